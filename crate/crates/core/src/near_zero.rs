//! The segment `P_1 -> P_0 -> P_{-1}` of a complete bimodule resolution.
//!
//! `P_1 = (A^e)^c` maps to `P_0 = A^e` by right multiplication with the
//! column `(1⊗x_w - x_w⊗1)_w`, and `P_0` maps to `P_{-1} = A^e` by right
//! multiplication with the element `s`. Tensoring with a bimodule gives a
//! three-term complex whose middle homology is `ĤH_0`.

use crate::algebra::{DiagonalTwist, QciSpec};
use crate::bimodule::{twisted_bimodule, Bimodule};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{ChainComplexWindow, SparseMatrix};

/// An element of `A^e = A ⊗ A^op` over the basis `λ ⊗ λ'`, indexed
/// `λ + dim A * λ'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopingElement {
    dim: usize,
    coeffs: Vec<Scalar>,
}

impl EnvelopingElement {
    pub fn zero(a: &QciSpec) -> Self {
        EnvelopingElement {
            dim: a.dim(),
            coeffs: vec![a.field().zero(); a.dim() * a.dim()],
        }
    }

    pub fn coeff(&self, left: usize, right: usize) -> &Scalar {
        &self.coeffs[left + self.dim * right]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    fn add_term(&mut self, left: usize, right: usize, s: &Scalar) {
        let c = &mut self.coeffs[left + self.dim * right];
        *c = &*c + s;
    }

    /// The nonzero terms `(λ, λ', coeff)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(k, s)| (k % self.dim, k / self.dim, s))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// `λ ⊗ λ'` with coefficient one.
    pub fn pure(a: &QciSpec, left: usize, right: usize) -> Self {
        let mut e = Self::zero(a);
        e.add_term(left, right, &a.field().one());
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        EnvelopingElement {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    /// `(λ⊗λ')(μ⊗μ') = λμ ⊗ μ'λ'`.
    pub fn mul(&self, a: &QciSpec, other: &Self) -> Self {
        let table = a.table();
        let mut out = Self::zero(a);
        for (l1, r1, s1) in self.terms() {
            for (l2, r2, s2) in other.terms() {
                let (Some((l, x)), Some((r, y))) = (table.product(l1, l2), table.product(r2, r1)) else {
                    continue;
                };
                out.add_term(*l, *r, &(&(s1 * s2) * &(x * y)));
            }
        }
        out
    }
}

/// `s = Σ_i (Π_{u<v} q_uv^{-i_v(a_u - i_u - 1)}) x^i ⊗ x^{a-1-i}`.
pub fn build_s(a: &QciSpec) -> EnvelopingElement {
    let c = a.num_generators();
    let ex = a.exponents();
    let mut s = EnvelopingElement::zero(a);
    for idx in 0..a.dim() {
        let i = a.monomial_exponents(idx);
        let mut coeff = a.field().one();
        for u in 0..c {
            for v in u + 1..c {
                let e = -(i[v] as i64) * (ex[u] - i[u] - 1) as i64;
                coeff = &coeff * &a.q(u, v).pow(e).expect("q entries are units");
            }
        }
        let comp: Vec<usize> = ex.iter().zip(&i).map(|(a, i)| a - 1 - i).collect();
        s.add_term(idx, a.monomial_index(&comp), &coeff);
    }
    s
}

/// `1 ⊗ x_t - x_t ⊗ 1`.
fn commutator_generator(a: &QciSpec, t: usize) -> EnvelopingElement {
    let x = a.generator_index(t);
    EnvelopingElement::pure(a, 0, x).sub(&EnvelopingElement::pure(a, x, 0))
}

/// The two facts behind exactness of `P_1 -> P_0 -> P_{-1}` near zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    /// `(1⊗x_t - x_t⊗1) s = 0` for every `t`.
    pub annihilated: bool,
    /// Rank of the shifted copies `(x^j ⊗ 1) s`.
    pub independent: usize,
    /// `dim A = Π a_i`, the rank needed.
    pub expected: usize,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.annihilated && self.independent == self.expected
    }
}

pub fn exactness_report(a: &QciSpec) -> ExactnessReport {
    let s = build_s(a);
    let annihilated = (0..a.num_generators()).all(|t| commutator_generator(a, t).mul(a, &s).is_zero());
    let columns = (0..a.dim())
        .map(|j| {
            EnvelopingElement::pure(a, j, 0)
                .mul(a, &s)
                .coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect()
        })
        .collect();
    let shifted = SparseMatrix::from_columns(a.field(), a.dim() * a.dim(), columns).expect("in range");
    ExactnessReport {
        annihilated,
        independent: shifted.rank(),
        expected: a.dim(),
    }
}

/// Checks that `(1⊗x_t - x_t⊗1) s = 0` for every `t` and that the shifted
/// copies `(x^j ⊗ 1) s` are linearly independent. Together these make
/// `P_1 -> P_0 -> P_{-1}` exact.
pub fn check_exactness_claim(a: &QciSpec) -> bool {
    exactness_report(a).holds()
}

/// The geometric-sum product `Π_w (1 + α_w + ... + α_w^{a_w - 1})`.
pub fn alpha_bar(a: &QciSpec, psi: &DiagonalTwist) -> Scalar {
    let mut acc = a.field().one();
    for (alpha, &e) in psi.alphas().iter().zip(a.exponents()) {
        let mut sum = a.field().zero();
        let mut power = a.field().one();
        for _ in 0..e {
            sum = &sum + &power;
            power = &power * alpha;
        }
        acc = &acc * &sum;
    }
    acc
}

/// The three-term complex `_ψA_1^c -> _ψA_1 -> _ψA_1` from the closed
/// formulas for `d_1^ψ` and `d_0^ψ`.
#[derive(Debug)]
pub struct ZeromapsWindow {
    twist: DiagonalTwist,
    window: ChainComplexWindow,
}

impl ZeromapsWindow {
    pub fn new(a: &QciSpec, psi: &DiagonalTwist) -> Result<Self> {
        let c = a.num_generators();
        if psi.alphas().len() != c {
            return Err(Error::Usage(format!("twist must have {c} scalars")));
        }
        let dim = a.dim();
        let field = a.field();
        let mut d1 = Vec::new();
        for w in 0..c {
            for idx in 0..dim {
                let u = a.monomial_exponents(idx);
                if u[w] + 1 == a.exponents()[w] {
                    continue;
                }
                let mut left = psi.alphas()[w].clone();
                for (i, &ui) in u.iter().enumerate().skip(w) {
                    left = &left * &a.q(w, i).pow(ui as i64).expect("unit");
                }
                let mut right = field.one();
                for (j, &uj) in u.iter().enumerate().take(w + 1) {
                    right = &right * &a.q(j, w).pow(uj as i64).expect("unit");
                }
                let mut target = u.clone();
                target[w] += 1;
                d1.push((a.monomial_index(&target), w * dim + idx, &left - &right));
            }
        }
        let d1 = SparseMatrix::from_triplets(field, dim, c * dim, d1)?;
        let d0 = SparseMatrix::from_triplets(field, dim, dim, [(a.top_index(), 0, alpha_bar(a, psi))])?;
        let window = ChainComplexWindow::new(field, 1, vec![c * dim, dim, dim], vec![d1, d0])?;
        Ok(ZeromapsWindow {
            twist: psi.clone(),
            window,
        })
    }

    pub fn twist(&self) -> &DiagonalTwist {
        &self.twist
    }

    pub fn d1(&self) -> &SparseMatrix {
        self.window.map_from(1).unwrap()
    }

    pub fn d0(&self) -> &SparseMatrix {
        self.window.map_from(0).unwrap()
    }

    pub fn window(&self) -> &ChainComplexWindow {
        &self.window
    }

    pub fn homology_dim(&self) -> usize {
        self.window.homology_dim(0).unwrap()
    }
}

/// The same three-term complex for an arbitrary bimodule `B`, built from the
/// right `A^e`-action `b . (λ⊗λ') = λ' b λ`: the first map sends `b e_w` to
/// `x_w b - b x_w`, the second is `b -> b . s`.
pub fn enveloping_window(a: &QciSpec, b: &Bimodule) -> Result<ChainComplexWindow> {
    if a.field() != b.field() || a.num_generators() != b.num_generators() {
        return Err(Error::Usage("bimodule and algebra do not match".into()));
    }
    let (c, m, field) = (a.num_generators(), b.dim(), a.field());
    let blocks: Vec<SparseMatrix> = (0..c)
        .map(|w| b.left(w).add(&b.right(w).scale(&field.from_i64(-1))))
        .collect::<Result<_>>()?;
    let d1 = SparseMatrix::from_triplets(
        field,
        m,
        c * m,
        blocks.iter().enumerate().flat_map(|(w, blk)| {
            blk.entries()
                .iter()
                .map(move |(r, col, v)| (*r, w * m + col, v.clone()))
        }),
    )?;
    let mut d0 = SparseMatrix::zero(field, m, m);
    for (l, r, coeff) in build_s(a).terms() {
        let act = b
            .left_monomial(&a.monomial_exponents(r))
            .mul(&b.right_monomial(&a.monomial_exponents(l)))?;
        d0 = d0.add(&act.scale(coeff))?;
    }
    ChainComplexWindow::new(field, 1, vec![c * m, m, m], vec![d1, d0])
}

/// `dim ĤH_0(A, _ψA_1)` from the closed-form window.
pub fn tate_hh0(a: &QciSpec, psi: &DiagonalTwist) -> Result<usize> {
    Ok(ZeromapsWindow::new(a, psi)?.homology_dim())
}

/// `dim ĤH_0(A, B)` for any bimodule, via the `A^e` picture.
pub fn tate_hh0_bimodule(a: &QciSpec, b: &Bimodule) -> Result<usize> {
    enveloping_window(a, b)?.homology_dim(0)
}

/// Convenience: the `A^e` picture applied to `_ψA_1`.
pub fn tate_hh0_enveloping(a: &QciSpec, psi: &DiagonalTwist) -> Result<usize> {
    let id = DiagonalTwist::identity(a.field(), a.num_generators());
    tate_hh0_bimodule(a, &twisted_bimodule(a, psi, &id)?)
}
