//! Finite-dimensional bimodules over a QCI, given by generator action matrices.

use crate::algebra::{DiagonalTwist, QciSpec};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::SparseMatrix;

/// A bimodule `B` over `A`: `left[i]` is `b -> x_i b`, `right[i]` is `b -> b x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: FieldSpec,
    dim: usize,
    left: Vec<SparseMatrix>,
    right: Vec<SparseMatrix>,
}

impl Bimodule {
    /// Validates the actions against the defining relations of `a`.
    pub fn new(a: &QciSpec, left: Vec<SparseMatrix>, right: Vec<SparseMatrix>) -> Result<Self> {
        let c = a.num_generators();
        if left.len() != c || right.len() != c {
            return Err(Error::Validation(format!(
                "expected {c} left and right action matrices"
            )));
        }
        let dim = left[0].rows();
        for m in left.iter().chain(&right) {
            if m.rows() != dim || m.cols() != dim || m.field() != a.field() {
                return Err(Error::Validation(format!(
                    "action matrices must be {dim}x{dim} over {}",
                    a.field()
                )));
            }
        }
        let b = Bimodule {
            field: a.field(),
            dim,
            left,
            right,
        };
        b.validate(a)?;
        Ok(b)
    }

    fn validate(&self, a: &QciSpec) -> Result<()> {
        let c = a.num_generators();
        let nilpotent = |m: &SparseMatrix, e: usize| -> Result<bool> {
            let mut p = m.clone();
            for _ in 1..e {
                p = p.mul(m)?;
            }
            Ok(p.is_zero())
        };
        for i in 0..c {
            let e = a.exponents()[i];
            if !nilpotent(&self.left[i], e)? {
                return Err(Error::Validation(format!(
                    "left action of x_{} is not nilpotent of order {e}",
                    i + 1
                )));
            }
            if !nilpotent(&self.right[i], e)? {
                return Err(Error::Validation(format!(
                    "right action of x_{} is not nilpotent of order {e}",
                    i + 1
                )));
            }
        }
        for i in 0..c {
            for j in 0..c {
                let q = a.q(i, j);
                // x_i (x_j b) = q_ij x_j (x_i b)
                let lhs = self.left[i].mul(&self.left[j])?;
                let rhs = self.left[j].mul(&self.left[i])?.scale(q);
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "left actions of x_{} and x_{} violate the q-relation",
                        i + 1,
                        j + 1
                    )));
                }
                // (b x_i) x_j = q_ij (b x_j) x_i
                let lhs = self.right[j].mul(&self.right[i])?;
                let rhs = self.right[i].mul(&self.right[j])?.scale(q);
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "right actions of x_{} and x_{} violate the q-relation",
                        i + 1,
                        j + 1
                    )));
                }
                if self.left[i].mul(&self.right[j])? != self.right[j].mul(&self.left[i])? {
                    return Err(Error::Validation(format!(
                        "left x_{} and right x_{} actions do not commute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_generators(&self) -> usize {
        self.left.len()
    }

    pub fn left(&self, i: usize) -> &SparseMatrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &SparseMatrix {
        &self.right[i]
    }

    /// Matrix of `b -> x^u b` for the monomial `x_c^{u_c}...x_1^{u_1}`.
    pub fn left_monomial(&self, exps: &[usize]) -> SparseMatrix {
        let mut m = SparseMatrix::identity(self.field, self.dim);
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                m = self.left[i].mul(&m).expect("square actions");
            }
        }
        m
    }

    /// Matrix of `b -> b x^u` for the monomial `x_c^{u_c}...x_1^{u_1}`.
    pub fn right_monomial(&self, exps: &[usize]) -> SparseMatrix {
        let mut m = SparseMatrix::identity(self.field, self.dim);
        for (i, &e) in exps.iter().enumerate().rev() {
            for _ in 0..e {
                m = self.right[i].mul(&m).expect("square actions");
            }
        }
        m
    }

    fn check_algebra(&self, a: &QciSpec) -> Result<()> {
        if a.field() != self.field || a.num_generators() != self.num_generators() {
            return Err(Error::Usage("bimodule and algebra do not match".into()));
        }
        Ok(())
    }

    /// `_f B`: the left action precomposed with the diagonal twist `f`.
    pub fn left_twist(&self, f: &DiagonalTwist) -> Bimodule {
        Bimodule {
            left: self.left.iter().zip(f.alphas()).map(|(m, s)| m.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// `B_g`: the right action precomposed with the diagonal twist `g`.
    pub fn right_twist(&self, g: &DiagonalTwist) -> Bimodule {
        Bimodule {
            right: self.right.iter().zip(g.alphas()).map(|(m, s)| m.scale(s)).collect(),
            ..self.clone()
        }
    }
}

/// Left and right multiplication by `x_i` on `A`.
fn multiplication_matrices(a: &QciSpec, i: usize) -> (SparseMatrix, SparseMatrix) {
    let x = a.generator_index(i);
    let table = a.table();
    let dim = a.dim();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for s in 0..dim {
        if let Some((t, k)) = table.product(x, s) {
            left.push((*t, s, k.clone()));
        }
        if let Some((t, k)) = table.product(s, x) {
            right.push((*t, s, k.clone()));
        }
    }
    (
        SparseMatrix::from_triplets(a.field(), dim, dim, left).expect("in range"),
        SparseMatrix::from_triplets(a.field(), dim, dim, right).expect("in range"),
    )
}

pub fn regular_bimodule(a: &QciSpec) -> Bimodule {
    let (left, right) = (0..a.num_generators()).map(|i| multiplication_matrices(a, i)).unzip();
    Bimodule {
        field: a.field(),
        dim: a.dim(),
        left,
        right,
    }
}

/// `_f A_g`: `lambda . m = f(lambda) m` and `m . mu = m g(mu)`.
pub fn twisted_bimodule(a: &QciSpec, f: &DiagonalTwist, g: &DiagonalTwist) -> Result<Bimodule> {
    let c = a.num_generators();
    if f.alphas().len() != c || g.alphas().len() != c {
        return Err(Error::Usage(format!("twists must have {c} scalars")));
    }
    if let Some(i) = f.alphas().iter().chain(g.alphas()).position(Scalar::is_zero) {
        return Err(Error::Domain(format!("twist scalar {} is zero", i % c + 1)));
    }
    Ok(regular_bimodule(a).left_twist(f).right_twist(g))
}

/// The k-linear dual `D(B)`; left `x_i` acts by `R_i^T`, right by `L_i^T`.
pub fn dual_bimodule(b: &Bimodule) -> Bimodule {
    Bimodule {
        field: b.field,
        dim: b.dim,
        left: b.right.iter().map(SparseMatrix::transpose).collect(),
        right: b.left.iter().map(SparseMatrix::transpose).collect(),
    }
}

/// Finds `psi` with `M ≅ _psi A_1`, trying each basis vector of `M` as a
/// generator. The isomorphism `a -> g . a` is checked explicitly before the
/// twist is returned.
pub fn recognize_twist(a: &QciSpec, m: &Bimodule) -> Result<Option<DiagonalTwist>> {
    m.check_algebra(a)?;
    if m.dim != a.dim() {
        return Ok(None);
    }
    let f = a.field();
    let c = a.num_generators();
    'candidate: for g in 0..m.dim {
        let mut unit = vec![f.zero(); m.dim];
        unit[g] = f.one();
        let mut alphas = Vec::with_capacity(c);
        for i in 0..c {
            let lg = m.left[i].apply(&unit);
            let rg = m.right[i].apply(&unit);
            let Some(t) = lg.iter().position(|s| !s.is_zero()) else {
                continue 'candidate;
            };
            let beta = &rg[t] * &lg[t].inv()?;
            if beta.is_zero() || lg.iter().zip(&rg).any(|(l, r)| &(l * &beta) != r) {
                continue 'candidate;
            }
            alphas.push(beta.inv()?);
        }
        let psi = DiagonalTwist::new(alphas)?;
        let model = twisted_bimodule(a, &psi, &DiagonalTwist::identity(f, c))?;
        // Column u of S is g . x^u.
        let columns: Vec<Vec<(usize, Scalar)>> = (0..a.dim())
            .map(|u| {
                let v = m.right_monomial(&a.monomial_exponents(u)).apply(&unit);
                v.into_iter().enumerate().filter(|(_, s)| !s.is_zero()).collect()
            })
            .collect();
        let s = SparseMatrix::from_columns(f, m.dim, columns)?;
        if s.rank() != m.dim {
            continue;
        }
        for i in 0..c {
            if s.mul(&model.left[i])? != m.left[i].mul(&s)? || s.mul(&model.right[i])? != m.right[i].mul(&s)? {
                continue 'candidate;
            }
        }
        return Ok(Some(psi));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::nakayama;

    fn rat(s: &str) -> Scalar {
        FieldSpec::Rational.parse(s).unwrap()
    }

    fn examples() -> Vec<QciSpec> {
        let q = FieldSpec::Rational;
        vec![
            QciSpec::codim2(q, 2, 2, rat("2")).unwrap(),
            QciSpec::codim2(q, 3, 2, rat("-1/3")).unwrap(),
            QciSpec::exterior(q, 3).unwrap(),
            QciSpec::commutative(FieldSpec::prime(5).unwrap(), vec![3, 2]).unwrap(),
            QciSpec::from_upper(
                q,
                vec![2, 3, 2],
                &[(0, 1, rat("2")), (0, 2, rat("3")), (1, 2, rat("5/7"))],
            )
            .unwrap(),
        ]
    }

    #[test]
    fn twisted_bimodules_are_valid() {
        for a in examples() {
            for (k, l) in [(0, 0), (1, 0), (-1, 2), (2, 1)] {
                let b = twisted_bimodule(&a, &nakayama(&a, k), &nakayama(&a, l)).unwrap();
                Bimodule::new(&a, b.left.clone(), b.right.clone()).unwrap();
                Bimodule::new(&a, dual_bimodule(&b).left, dual_bimodule(&b).right).unwrap();
            }
        }
    }

    #[test]
    fn left_twist_scales_generator_action() {
        let a = QciSpec::codim2(FieldSpec::Rational, 2, 3, rat("3")).unwrap();
        let nu = nakayama(&a, 1);
        let id = DiagonalTwist::identity(a.field(), 2);
        let b = twisted_bimodule(&a, &nu, &id).unwrap();
        let r = regular_bimodule(&a);
        for i in 0..2 {
            assert_eq!(b.left(i), &r.left(i).scale(&nu.alphas()[i]));
            assert_eq!(b.right(i), r.right(i));
        }
    }

    #[test]
    fn double_dual_is_identity() {
        for a in examples() {
            let b = twisted_bimodule(&a, &nakayama(&a, 2), &nakayama(&a, -1)).unwrap();
            assert_eq!(dual_bimodule(&dual_bimodule(&b)), b);
        }
    }

    #[test]
    fn dual_of_twisted_is_recognized() {
        // D(_{nu^k} A_1) is _{nu^{1-k}} A_1.
        for a in examples() {
            let id = DiagonalTwist::identity(a.field(), a.num_generators());
            for k in -2..=2 {
                let b = twisted_bimodule(&a, &nakayama(&a, k), &id).unwrap();
                let psi = recognize_twist(&a, &dual_bimodule(&b)).unwrap().expect("cyclic");
                assert_eq!(psi, nakayama(&a, 1 - k), "{a} k={k}");
            }
        }
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let a = QciSpec::codim2(FieldSpec::Rational, 2, 2, rat("2")).unwrap();
        let r = regular_bimodule(&a);
        // Swapping the sides breaks the q-relations for q != 1.
        let err = Bimodule::new(&a, r.right.clone(), r.left.clone()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        let id = SparseMatrix::identity(a.field(), 4);
        assert!(Bimodule::new(&a, vec![id.clone(), id.clone()], vec![id.clone(), id]).is_err());
    }
}
