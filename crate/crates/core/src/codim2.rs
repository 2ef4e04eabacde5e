//! The explicit complex computing `HH_n(A, _{ν^{-1}}A_1)` for the codimension
//! two algebra `A = k<X, Y>/(X^a, XY - qYX, Y^b)` with `q` not a root of unity.
//!
//! Monomials are `y^u x^v` with index `v + a u`; the degree-`n` space is
//! `⊕_{i=0}^n A e_i` with index `i * ab + (v + a u)`.

use rayon::prelude::*;

use crate::algebra::QciSpec;
use crate::error::{Error, Result};
use crate::field::{assert_not_root_of_unity, FieldSpec, Scalar};
use crate::linalg::{ChainComplexWindow, SparseMatrix};

/// Parameters `(a, b, q)` and evaluation of the eight structure scalars.
#[derive(Clone, Debug)]
pub struct KScalarTable {
    a: usize,
    b: usize,
    q: Scalar,
}

fn halve(numerator: i64, m: u8) -> Result<i64> {
    if numerator % 2 != 0 {
        return Err(Error::Usage(format!("K_{m}: exponent {numerator}/2 is not an integer")));
    }
    Ok(numerator / 2)
}

impl KScalarTable {
    /// Requires `c = 2`, the rational field and `q != ±1`.
    pub fn new(algebra: &QciSpec) -> Result<Self> {
        if algebra.num_generators() != 2 {
            return Err(Error::Hypothesis(
                "the delta complex needs exactly two generators".into(),
            ));
        }
        if algebra.field() != FieldSpec::Rational {
            return Err(Error::Hypothesis(format!(
                "q must not be a root of unity; every unit of {} is one",
                algebra.field()
            )));
        }
        let q = algebra.q(0, 1).clone();
        if !assert_not_root_of_unity(&q, algebra.field())? {
            return Err(Error::Hypothesis(format!("q = {q} is a root of unity")));
        }
        Ok(KScalarTable {
            a: algebra.exponents()[0],
            b: algebra.exponents()[1],
            q,
        })
    }

    fn pow(&self, e: i64) -> Scalar {
        self.q.pow(e).expect("q is a unit")
    }

    /// `Σ_{j<len} q^{j e}`.
    fn geometric(&self, len: usize, e: i64) -> Scalar {
        let mut sum = self.q.field().zero();
        for j in 0..len as i64 {
            sum = &sum + &self.pow(j * e);
        }
        sum
    }

    /// `K_m(t, i, u, v)`; evaluating outside the parity/range side condition
    /// is a usage error.
    pub fn k(&self, m: u8, t: usize, i: usize, u: usize, v: usize) -> Result<Scalar> {
        let (a, b) = (self.a as i64, self.b as i64);
        let (t, ii, u, v) = (t as i64, i as i64, u as i64, v as i64);
        let ok = match m {
            1 | 2 | 5 | 6 => i.is_multiple_of(2) && ii <= 2 * t,
            3 | 4 => i % 2 == 1 && ii < 2 * t,
            7 | 8 => i % 2 == 1 && ii <= 2 * t + 1,
            _ => return Err(Error::Usage(format!("there is no K_{m}"))),
        };
        if !ok {
            return Err(Error::Usage(format!("K_{m} is not defined at t={t}, i={i}")));
        }
        let one = self.q.field().one();
        Ok(match m {
            1 => &self.pow(a + b - a * b - 1) * &self.geometric(self.b, halve(2 * a + a * ii + 2 * v - 2, m)?),
            2 => self.geometric(self.a, halve(2 * b * t + 2 * b - b * ii + 2 * u - 2, m)?),
            3 => &self.pow(halve(a * ii - a + 2 + 2 * v, m)?) - &self.pow(1 - a),
            4 => &self.pow(halve(2 * b * t - b * ii + b + 2 * u, m)?) - &one,
            5 => &self.pow(1 - a) - &self.pow(halve(a * ii + 2 * v, m)?),
            6 => self.geometric(self.a, halve(2 * b * t + 2 * b - b * ii + 2 * u, m)?),
            7 => &self.pow(a + b - a * b - 1) * &self.geometric(self.b, halve(2 * a + a * (ii - 1) + 2 * v, m)?),
            8 => &self.pow(halve(2 * b * t - b * ii + 3 * b + 2 * u - 2, m)?) - &one,
            _ => unreachable!(),
        })
    }
}

/// The differentials `δ_n` of the complex.
#[derive(Clone, Debug)]
pub struct DeltaComplex {
    table: KScalarTable,
}

impl DeltaComplex {
    pub fn new(algebra: &QciSpec) -> Result<Self> {
        Ok(DeltaComplex {
            table: KScalarTable::new(algebra)?,
        })
    }

    pub fn table(&self) -> &KScalarTable {
        &self.table
    }

    fn ab(&self) -> usize {
        self.table.a * self.table.b
    }

    pub fn space_dim(&self, n: usize) -> usize {
        (n + 1) * self.ab()
    }

    /// `δ_n` for `n ≥ 1`, as a matrix from degree `n` to degree `n - 1`.
    ///
    /// The `K_7` term carries a minus sign. Without it `δ_{2t} δ_{2t+1}` has
    /// the socle coefficient `K_7 K_4 + K_8 K_1 = 2 K_7 K_4`, which is nonzero
    /// for `q > 0`; with it both failing compositions cancel identically.
    pub fn delta(&self, n: usize) -> Result<SparseMatrix> {
        self.delta_with_signs(n, true)
    }

    /// `δ_n` with every scalar exactly as displayed (no sign on `K_7`). Kept
    /// to document that this version does not square to zero.
    pub fn delta_unsigned(&self, n: usize) -> Result<SparseMatrix> {
        self.delta_with_signs(n, false)
    }

    fn delta_with_signs(&self, n: usize, signed: bool) -> Result<SparseMatrix> {
        if n == 0 {
            return Err(Error::Usage("δ_n is defined for n ≥ 1".into()));
        }
        let (a, b, ab) = (self.table.a, self.table.b, self.ab());
        let t = n / 2;
        let index = |i: usize, u: usize, v: usize| -> Option<usize> {
            // e_{-1} and e_{n} in degree n - 1 vanish, as do exponents out of range.
            (i < n && u < b && v < a).then(|| i * ab + v + a * u)
        };
        let mut triplets = Vec::new();
        for i in 0..=n {
            // (K_m, dy, dx) for the e_i term, then for the e_{i-1} term.
            let (same, prev) = match (n % 2, i % 2) {
                (0, 0) => ((1, b - 1, 0), (2, 0, a - 1)),
                (0, _) => ((3, 1, 0), (4, 0, 1)),
                (_, 0) => ((5, 1, 0), (6, 0, a - 1)),
                (_, _) => ((7, b - 1, 0), (8, 0, 1)),
            };
            for u in 0..b {
                for v in 0..a {
                    let col = i * ab + v + a * u;
                    for (target_i, (m, dy, dx)) in [(Some(i), same), (i.checked_sub(1), prev)] {
                        let Some(row) = target_i.and_then(|ti| index(ti, u + dy, v + dx)) else {
                            continue;
                        };
                        let mut k = self.table.k(m, t, i, u, v)?;
                        if k.is_zero() {
                            return Err(Error::Consistency(format!("K_{m}({t}, {i}, {u}, {v}) vanishes")));
                        }
                        if signed && m == 7 {
                            k = -k;
                        }
                        triplets.push((row, col, k));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(self.table.q.field(), self.space_dim(n - 1), self.space_dim(n), triplets)
    }

    /// The window `C_top -> ... -> C_0`.
    pub fn window(&self, top: usize) -> Result<ChainComplexWindow> {
        let maps = (1..=top)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|n| self.delta(n))
            .collect::<Result<Vec<_>>>()?;
        let dims = (0..=top).rev().map(|n| self.space_dim(n)).collect();
        ChainComplexWindow::new(self.table.q.field(), top as i64, dims, maps)
    }
}

/// `dim HH_n(A, _{ν^{-1}}A_1)` for `n = 1..top-1`, read off the window ending at `top`.
pub fn twisted_homology_dims(algebra: &QciSpec, top: usize) -> Result<Vec<usize>> {
    if top < 2 {
        return Err(Error::Usage("the window needs top degree at least 2".into()));
    }
    let w = DeltaComplex::new(algebra)?.window(top)?;
    Ok(w.homology_dims().into_iter().rev().map(|(_, d)| d).collect())
}

/// `dim ker δ_n` for `n = 1..=top`.
pub fn kernel_dims(algebra: &QciSpec, top: usize) -> Result<Vec<usize>> {
    let complex = DeltaComplex::new(algebra)?;
    (1..=top)
        .into_par_iter()
        .map(|n| Ok(complex.space_dim(n) - complex.delta(n)?.rank()))
        .collect()
}
