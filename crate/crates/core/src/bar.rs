//! Hochschild (co)homology from the unnormalized bar complex.
//!
//! Degree-`n` chains are `B ⊗ A^{⊗n}` (cochains `Hom(A^{⊗n}, B)`), with basis
//! `(b, λ_1, ..., λ_n)` indexed in mixed radix, `b` fastest. Differentials are
//! assembled column by column from the cached product table.

use rayon::prelude::*;

use crate::algebra::QciSpec;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{ChainComplexWindow, SparseMatrix};

/// Default cap on the dimension of the largest chain space.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Homology,
    Cohomology,
}

#[derive(Clone, Copy, Debug)]
pub struct BarWindowRequest<'a> {
    pub algebra: &'a QciSpec,
    pub coefficients: &'a Bimodule,
    pub n_max: usize,
    pub direction: Direction,
    pub budget: u128,
}

impl<'a> BarWindowRequest<'a> {
    pub fn homology(algebra: &'a QciSpec, coefficients: &'a Bimodule, n_max: usize) -> Self {
        BarWindowRequest {
            algebra,
            coefficients,
            n_max,
            direction: Direction::Homology,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn cohomology(algebra: &'a QciSpec, coefficients: &'a Bimodule, n_max: usize) -> Self {
        BarWindowRequest {
            direction: Direction::Cohomology,
            ..Self::homology(algebra, coefficients, n_max)
        }
    }

    pub fn with_budget(self, budget: u128) -> Self {
        BarWindowRequest { budget, ..self }
    }
}

/// Sparse columns of the action of every basis monomial on `B`.
struct Actions {
    /// `left[u][b]`: the nonzero entries of `x^u . b`.
    left: Vec<Vec<Vec<(usize, Scalar)>>>,
    /// `right[u][b]`: the nonzero entries of `b . x^u`.
    right: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl Actions {
    fn new(a: &QciSpec, b: &Bimodule) -> Self {
        let (left, right) = (0..a.dim())
            .into_par_iter()
            .map(|u| {
                let exps = a.monomial_exponents(u);
                (b.left_monomial(&exps).columns(), b.right_monomial(&exps).columns())
            })
            .unzip();
        Actions { left, right }
    }
}

fn space_dim(dim_b: usize, dim_a: usize, n: usize) -> u128 {
    dim_b as u128 * (dim_a as u128).pow(n as u32)
}

fn split_index(mut idx: usize, dim_b: usize, dim_a: usize, n: usize) -> (usize, Vec<usize>) {
    let b = idx % dim_b;
    idx /= dim_b;
    let mut lambdas = Vec::with_capacity(n);
    for _ in 0..n {
        lambdas.push(idx % dim_a);
        idx /= dim_a;
    }
    (b, lambdas)
}

fn join_index(b: usize, lambdas: &[usize], dim_b: usize, dim_a: usize) -> usize {
    lambdas.iter().rev().fold(0, |acc, &l| acc * dim_a + l) * dim_b + b
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `∂_n : B ⊗ A^{⊗n} -> B ⊗ A^{⊗(n-1)}` for `n ≥ 1`.
fn homology_differential(a: &QciSpec, b: &Bimodule, act: &Actions, n: usize) -> Result<SparseMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let field = a.field();
    let table = a.table();
    let cols = db * da.pow(n as u32);
    let rows = db * da.pow(n as u32 - 1);
    let triplets: Vec<(usize, usize, Scalar)> = (0..cols)
        .into_par_iter()
        .flat_map_iter(|col| {
            let (bb, lam) = split_index(col, db, da, n);
            let mut out = Vec::new();
            // b λ_1 ⊗ λ_2 ⊗ ... ⊗ λ_n
            for (b2, v) in &act.right[lam[0]][bb] {
                out.push((join_index(*b2, &lam[1..], db, da), col, v.clone()));
            }
            // (-1)^i b ⊗ ... ⊗ λ_i λ_{i+1} ⊗ ...
            for i in 1..n {
                if let Some((t, s)) = table.product(lam[i - 1], lam[i]) {
                    let mut merged = Vec::with_capacity(n - 1);
                    merged.extend_from_slice(&lam[..i - 1]);
                    merged.push(*t);
                    merged.extend_from_slice(&lam[i + 1..]);
                    out.push((join_index(bb, &merged, db, da), col, s * &field.from_i64(sign(i))));
                }
            }
            // (-1)^n λ_n b ⊗ λ_1 ⊗ ... ⊗ λ_{n-1}
            let sg = field.from_i64(sign(n));
            for (b2, v) in &act.left[lam[n - 1]][bb] {
                out.push((join_index(*b2, &lam[..n - 1], db, da), col, v * &sg));
            }
            out
        })
        .collect();
    SparseMatrix::from_triplets(field, rows, cols, triplets)
}

/// `∂^n : Hom(A^{⊗n}, B) -> Hom(A^{⊗(n+1)}, B)` for `n ≥ 0`.
///
/// The basis cochain `(b, λ)` sends the tuple `λ` to `b` and every other
/// basis tuple to zero.
fn cohomology_differential(a: &QciSpec, b: &Bimodule, act: &Actions, n: usize) -> Result<SparseMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let field = a.field();
    let table = a.table();
    let cols = db * da.pow(n as u32);
    let rows = db * da.pow(n as u32 + 1);
    let triplets: Vec<(usize, usize, Scalar)> = (0..cols)
        .into_par_iter()
        .flat_map_iter(|col| {
            let (bb, lam) = split_index(col, db, da, n);
            let mut out = Vec::new();
            let mut tuple = Vec::with_capacity(n + 1);
            // μ_1 f(μ_2, ..., μ_{n+1})
            for mu in 0..da {
                tuple.clear();
                tuple.push(mu);
                tuple.extend_from_slice(&lam);
                for (b2, v) in &act.left[mu][bb] {
                    out.push((join_index(*b2, &tuple, db, da), col, v.clone()));
                }
            }
            // (-1)^i f(..., μ_i μ_{i+1}, ...)
            for i in 1..=n {
                let sg = field.from_i64(sign(i));
                for (l, r, s) in table.factorizations(lam[i - 1]) {
                    tuple.clear();
                    tuple.extend_from_slice(&lam[..i - 1]);
                    tuple.push(*l);
                    tuple.push(*r);
                    tuple.extend_from_slice(&lam[i..]);
                    out.push((join_index(bb, &tuple, db, da), col, s * &sg));
                }
            }
            // (-1)^{n+1} f(μ_1, ..., μ_n) μ_{n+1}
            let sg = field.from_i64(sign(n + 1));
            for mu in 0..da {
                tuple.clear();
                tuple.extend_from_slice(&lam);
                tuple.push(mu);
                for (b2, v) in &act.right[mu][bb] {
                    out.push((join_index(*b2, &tuple, db, da), col, v * &sg));
                }
            }
            out
        })
        .collect();
    SparseMatrix::from_triplets(field, rows, cols, triplets)
}

/// The window whose interior homology is `HH_n` (or `HH^n`) for `0 ≤ n ≤ n_max`.
///
/// Cohomological degree `n` sits at window degree `-n`.
pub fn bar_window(req: &BarWindowRequest<'_>) -> Result<ChainComplexWindow> {
    let (a, b) = (req.algebra, req.coefficients);
    if a.field() != b.field() || a.num_generators() != b.num_generators() {
        return Err(Error::Usage("bimodule and algebra do not match".into()));
    }
    let (da, db) = (a.dim(), b.dim());
    let top = req.n_max + 1;
    let needed = space_dim(db, da, top);
    if needed > req.budget {
        return Err(Error::Resource {
            degree: top as i64,
            needed,
            budget: req.budget,
        });
    }
    let act = Actions::new(a, b);
    let field = a.field();
    match req.direction {
        Direction::Homology => {
            let mut dims: Vec<usize> = (0..=top).rev().map(|n| db * da.pow(n as u32)).collect();
            dims.push(0);
            let mut maps = (1..=top)
                .rev()
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|n| homology_differential(a, b, &act, n))
                .collect::<Result<Vec<_>>>()?;
            maps.push(SparseMatrix::zero(field, 0, db));
            ChainComplexWindow::new(field, top as i64, dims, maps)
        }
        Direction::Cohomology => {
            let mut dims = vec![0];
            dims.extend((0..=top).map(|n| db * da.pow(n as u32)));
            let mut maps = vec![SparseMatrix::zero(field, db, 0)];
            maps.extend(
                (0..top)
                    .collect::<Vec<_>>()
                    .into_par_iter()
                    .map(|n| cohomology_differential(a, b, &act, n))
                    .collect::<Result<Vec<_>>>()?,
            );
            ChainComplexWindow::new(field, 1, dims, maps)
        }
    }
}

fn dims(req: &BarWindowRequest<'_>, expected: Direction) -> Result<Vec<usize>> {
    if req.direction != expected {
        return Err(Error::Usage(format!("request is for {:?}", req.direction)));
    }
    let w = bar_window(req)?;
    let h = w.homology_dims();
    Ok(match expected {
        // Descending window degrees n_max..0.
        Direction::Homology => h.into_iter().rev().map(|(_, d)| d).collect(),
        // Window degrees 0..-n_max are cohomological degrees 0..n_max.
        Direction::Cohomology => h.into_iter().map(|(_, d)| d).collect(),
    })
}

/// `dim HH_n(A, B)` for `n = 0..=n_max`.
pub fn hh_homology_dims(req: &BarWindowRequest<'_>) -> Result<Vec<usize>> {
    dims(req, Direction::Homology)
}

/// `dim HH^n(A, B)` for `n = 0..=n_max`.
pub fn hh_cohomology_dims(req: &BarWindowRequest<'_>) -> Result<Vec<usize>> {
    dims(req, Direction::Cohomology)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{multiply, nakayama, DiagonalTwist};
    use crate::bimodule::{dual_bimodule, regular_bimodule, twisted_bimodule};
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    fn rat(s: &str) -> Scalar {
        FieldSpec::Rational.parse(s).unwrap()
    }

    fn homology(a: &QciSpec, b: &Bimodule, n: usize) -> Vec<usize> {
        hh_homology_dims(&BarWindowRequest::homology(a, b, n)).unwrap()
    }

    fn cohomology(a: &QciSpec, b: &Bimodule, n: usize) -> Vec<usize> {
        hh_cohomology_dims(&BarWindowRequest::cohomology(a, b, n)).unwrap()
    }

    #[test]
    fn truncated_polynomial_in_characteristic_two() {
        let a = QciSpec::commutative(FieldSpec::prime(2).unwrap(), vec![2]).unwrap();
        let b = regular_bimodule(&a);
        assert_eq!(homology(&a, &b, 3), vec![2, 2, 2, 2]);
        assert_eq!(cohomology(&a, &b, 3), vec![2, 2, 2, 2]);
    }

    #[test]
    fn truncated_polynomial_over_rationals() {
        let a = QciSpec::commutative(FieldSpec::Rational, vec![2]).unwrap();
        assert_eq!(cohomology(&a, &regular_bimodule(&a), 3), vec![2, 1, 1, 1]);
    }

    #[test]
    fn commutative_center_is_everything() {
        let a = QciSpec::commutative(FieldSpec::Rational, vec![2, 2]).unwrap();
        assert_eq!(cohomology(&a, &regular_bimodule(&a), 0), vec![4]);
    }

    #[test]
    fn codim2_cohomology() {
        let a = QciSpec::codim2(FieldSpec::Rational, 2, 2, rat("2")).unwrap();
        assert_eq!(cohomology(&a, &regular_bimodule(&a), 3), vec![2, 2, 1, 0]);
    }

    #[test]
    fn codim2_inverse_nakayama_homology_vanishes() {
        let a = QciSpec::codim2(FieldSpec::Rational, 2, 2, rat("2")).unwrap();
        let id = DiagonalTwist::identity(a.field(), 2);
        let b = twisted_bimodule(&a, &nakayama(&a, -1), &id).unwrap();
        assert_eq!(&homology(&a, &b, 3)[1..], &[0, 0, 0]);
    }

    #[test]
    fn twisting_both_sides_changes_nothing() {
        let a = QciSpec::codim2(FieldSpec::Rational, 2, 3, rat("3")).unwrap();
        let nu = nakayama(&a, 1);
        let b = twisted_bimodule(&a, &nu, &nu).unwrap();
        assert_eq!(homology(&a, &b, 2), homology(&a, &regular_bimodule(&a), 2));
    }

    #[test]
    fn budget_is_enforced() {
        let a = QciSpec::exterior(FieldSpec::Rational, 3).unwrap();
        let b = regular_bimodule(&a);
        let req = BarWindowRequest::homology(&a, &b, 3).with_budget(1000);
        match hh_homology_dims(&req) {
            Err(Error::Resource { degree, needed, .. }) => {
                assert_eq!(degree, 4);
                assert_eq!(needed, 8 * 8u128.pow(4));
            }
            other => panic!("expected resource error, got {other:?}"),
        }
        assert!(hh_cohomology_dims(&req).is_err());
    }

    /// `dim A / [A, A]`, spanning the commutators of basis pairs directly.
    fn cocenter_dim(a: &QciSpec) -> usize {
        let columns = (0..a.dim())
            .flat_map(|u| (0..a.dim()).map(move |v| (u, v)))
            .map(|(u, v)| {
                let (x, y) = (a.basis_element(u), a.basis_element(v));
                let uv = multiply(a, &x, &y).unwrap();
                let vu = multiply(a, &y, &x).unwrap();
                let d = uv.add(&vu.scale(&a.field().from_i64(-1)));
                d.coeffs()
                    .iter()
                    .cloned()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .collect()
            })
            .collect();
        a.dim() - SparseMatrix::from_columns(a.field(), a.dim(), columns).unwrap().rank()
    }

    #[test]
    fn degree_zero_homology_is_cocenter() {
        let q = FieldSpec::Rational;
        for a in [
            QciSpec::codim2(q, 2, 2, rat("2")).unwrap(),
            QciSpec::codim2(q, 3, 2, rat("-1")).unwrap(),
            QciSpec::exterior(FieldSpec::prime(3).unwrap(), 2).unwrap(),
            QciSpec::exterior(FieldSpec::prime(2).unwrap(), 3).unwrap(),
        ] {
            assert_eq!(homology(&a, &regular_bimodule(&a), 0)[0], cocenter_dim(&a), "{a}");
        }
    }

    fn small_algebra() -> impl Strategy<Value = QciSpec> {
        let fields = prop_oneof![Just(FieldSpec::Rational), Just(FieldSpec::prime(5).unwrap())];
        (
            fields,
            prop_oneof![Just(vec![2]), Just(vec![3]), Just(vec![2, 2]), Just(vec![2, 3])],
            -3i64..=3,
        )
            .prop_filter_map("q must be nonzero", |(f, a, n)| {
                let q = f.from_i64(n);
                if q.is_zero() {
                    return None;
                }
                if a.len() == 1 {
                    QciSpec::commutative(f, a).ok()
                } else {
                    QciSpec::codim2(f, a[0], a[1], q).ok()
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn cohomology_is_homology_of_the_dual(a in small_algebra(), k in -2i64..=2, l in -1i64..=1) {
            let n = if a.dim() <= 4 { 3 } else { 2 };
            let b = twisted_bimodule(&a, &nakayama(&a, k), &nakayama(&a, l)).unwrap();
            prop_assert_eq!(cohomology(&a, &b, n), homology(&a, &dual_bimodule(&b), n));
        }
    }
}
