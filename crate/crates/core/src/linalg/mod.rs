//! Exact sparse linear algebra over the supported fields.

mod complex;
mod eliminate;
mod sparse;

pub use complex::ChainComplexWindow;
pub use eliminate::modular_rank_bound;
pub use sparse::SparseMatrix;
