//! Dimensions of Hochschild and Tate-Hochschild (co)homology of quantum
//! complete intersections over exact fields.
//!
//! Three independent routes are provided and cross-checked: the bar complex,
//! explicit small complexes (the near-zero window and the codimension two
//! δ-complex) and closed-form formulas.

// Index loops read better than iterator chains over q-matrices.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod bar;
pub mod bimodule;
pub mod codim2;
pub mod engine;
pub mod error;
pub mod field;
pub mod formulas;
pub mod linalg;
pub mod near_zero;

pub use algebra::{frobenius_functional, multiply, nakayama, AlgebraElement, DiagonalTwist, QciSpec};
pub use bimodule::{dual_bimodule, recognize_twist, regular_bimodule, twisted_bimodule, Bimodule};
pub use engine::{cross_validate, tate_dims, Coefficient, DimensionTable, Method, Policy, TateRequest, Variant};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{ChainComplexWindow, SparseMatrix};
