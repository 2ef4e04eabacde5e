//! Quantum complete intersections `k<x_1..x_c> / (x_i^{a_i}, x_i x_j - q_ij x_j x_i)`.
//!
//! Basis monomials are written `x_c^{i_c} ... x_1^{i_1}` and indexed in mixed
//! radix with `i_1` fastest: `i_1 + a_1 i_2 + a_1 a_2 i_3 + ...`. Every matrix
//! in the crate uses this order.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{assert_not_root_of_unity, FieldSpec, Scalar};

/// Structure constants: the product of two basis monomials is either zero or
/// a scalar multiple of a single basis monomial.
#[derive(Clone, Debug)]
pub struct ProductTable {
    dim: usize,
    products: Vec<Option<(usize, Scalar)>>,
    /// For each target monomial, the pairs `(left, right, coeff)` with
    /// `left * right = coeff * target`.
    factorizations: Vec<Vec<(usize, usize, Scalar)>>,
}

impl ProductTable {
    pub fn product(&self, left: usize, right: usize) -> Option<&(usize, Scalar)> {
        self.products[left * self.dim + right].as_ref()
    }

    pub fn factorizations(&self, target: usize) -> &[(usize, usize, Scalar)] {
        &self.factorizations[target]
    }
}

/// The data `(k, a, q)` of a quantum complete intersection.
#[derive(Clone)]
pub struct QciSpec {
    field: FieldSpec,
    exponents: Vec<usize>,
    q: Vec<Vec<Scalar>>,
    generic_q: bool,
    table: OnceLock<ProductTable>,
}

impl fmt::Debug for QciSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QciSpec")
            .field("field", &self.field)
            .field("exponents", &self.exponents)
            .field("q", &self.q)
            .finish()
    }
}

impl PartialEq for QciSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.exponents == other.exponents && self.q == other.q
    }
}

impl Eq for QciSpec {}

impl fmt::Display for QciSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QCI over {} a={:?} q=[", self.field, self.exponents)?;
        for (i, row) in self.q.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl QciSpec {
    pub fn new(field: FieldSpec, exponents: Vec<usize>, q: Vec<Vec<Scalar>>) -> Result<Self> {
        let c = exponents.len();
        if c == 0 {
            return Err(Error::Validation("need at least one generator".into()));
        }
        for (i, &a) in exponents.iter().enumerate() {
            if a < 2 {
                return Err(Error::Validation(format!(
                    "exponent a_{} = {a} must be at least 2",
                    i + 1
                )));
            }
        }
        if q.len() != c || q.iter().any(|row| row.len() != c) {
            return Err(Error::Validation(format!("q must be a {c}x{c} matrix")));
        }
        let mut generic_q = true;
        for i in 0..c {
            for j in 0..c {
                if !field.contains(&q[i][j]) {
                    return Err(Error::Validation(format!(
                        "q_{}{} is not an element of {field}",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && !q[i][i].is_one() {
                    return Err(Error::Validation(format!("q_{}{} must be 1", i + 1, i + 1)));
                }
                if !(&q[i][j] * &q[j][i]).is_one() {
                    return Err(Error::Validation(format!(
                        "q_{0}{1} * q_{1}{0} = {2} must be 1",
                        i + 1,
                        j + 1,
                        &q[i][j] * &q[j][i]
                    )));
                }
                if i < j && !assert_not_root_of_unity(&q[i][j], field)? {
                    generic_q = false;
                }
            }
        }
        let dim = exponents
            .iter()
            .try_fold(1usize, |acc, &a| acc.checked_mul(a))
            .ok_or_else(|| Error::Validation("algebra dimension overflows".into()))?;
        if dim > 1 << 24 {
            return Err(Error::Validation(format!("algebra dimension {dim} is too large")));
        }
        Ok(QciSpec {
            field,
            exponents,
            q,
            generic_q,
            table: OnceLock::new(),
        })
    }

    /// Build from the upper-triangular commutation scalars `q_ij` (i < j),
    /// filling the rest of the matrix with `q_ji = q_ij^{-1}` and ones.
    pub fn from_upper(field: FieldSpec, exponents: Vec<usize>, upper: &[(usize, usize, Scalar)]) -> Result<Self> {
        let c = exponents.len();
        let mut q = vec![vec![field.one(); c]; c];
        for (i, j, s) in upper {
            if *i >= c || *j >= c || i == j {
                return Err(Error::Validation(format!("bad commutation index ({i}, {j})")));
            }
            q[*i][*j] = s.clone();
            q[*j][*i] = s.inv()?;
        }
        Self::new(field, exponents, q)
    }

    /// `k[x_1..x_c] / (x_i^{a_i})`.
    pub fn commutative(field: FieldSpec, exponents: Vec<usize>) -> Result<Self> {
        Self::from_upper(field, exponents, &[])
    }

    /// `k<x_1..x_c> / (x_i^2, x_i x_j + x_j x_i)`.
    pub fn exterior(field: FieldSpec, c: usize) -> Result<Self> {
        let minus_one = field.from_i64(-1);
        let upper: Vec<_> = (0..c)
            .flat_map(|i| (i + 1..c).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, minus_one.clone()))
            .collect();
        Self::from_upper(field, vec![2; c], &upper)
    }

    /// `k<X, Y> / (X^a, XY - q YX, Y^b)` with `X = x_1`, `Y = x_2`.
    pub fn codim2(field: FieldSpec, a: usize, b: usize, q: Scalar) -> Result<Self> {
        Self::from_upper(field, vec![a, b], &[(0, 1, q)])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Number of generators `c`.
    pub fn num_generators(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    /// `q_ij` with zero-based indices.
    pub fn q(&self, i: usize, j: usize) -> &Scalar {
        &self.q[i][j]
    }

    pub fn q_matrix(&self) -> &[Vec<Scalar>] {
        &self.q
    }

    /// True iff no off-diagonal `q_ij` is a root of unity.
    pub fn generic_q(&self) -> bool {
        self.generic_q
    }

    pub fn dim(&self) -> usize {
        self.exponents.iter().product()
    }

    pub fn monomial_index(&self, exps: &[usize]) -> usize {
        debug_assert_eq!(exps.len(), self.exponents.len());
        let mut idx = 0;
        let mut stride = 1;
        for (e, a) in exps.iter().zip(&self.exponents) {
            debug_assert!(e < a);
            idx += e * stride;
            stride *= a;
        }
        idx
    }

    pub fn monomial_exponents(&self, mut idx: usize) -> Vec<usize> {
        self.exponents
            .iter()
            .map(|a| {
                let e = idx % a;
                idx /= a;
                e
            })
            .collect()
    }

    /// Index of `x_c^{a_c-1} ... x_1^{a_1-1}`.
    pub fn top_index(&self) -> usize {
        self.dim() - 1
    }

    /// Index of the generator `x_i` (zero-based `i`).
    pub fn generator_index(&self, i: usize) -> usize {
        let mut e = vec![0; self.num_generators()];
        e[i] = 1;
        self.monomial_index(&e)
    }

    /// Product of two basis monomials in normal form, by bubbling the
    /// generator string into descending order and collecting `q` factors.
    pub fn multiply_monomials(&self, left: usize, right: usize) -> Option<(usize, Scalar)> {
        let c = self.num_generators();
        let mut word: Vec<usize> = Vec::new();
        for part in [left, right] {
            let exps = self.monomial_exponents(part);
            for i in (0..c).rev() {
                word.extend(std::iter::repeat_n(i, exps[i]));
            }
        }
        let mut coeff = self.field.one();
        // x_i x_j = q_ij x_j x_i moves the larger index leftwards.
        let n = word.len();
        for pass in 0..n {
            let mut swapped = false;
            for k in 0..n.saturating_sub(pass + 1) {
                let (i, j) = (word[k], word[k + 1]);
                if i < j {
                    coeff = &coeff * &self.q[i][j];
                    word.swap(k, k + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let mut exps = vec![0; c];
        for g in word {
            exps[g] += 1;
        }
        if exps.iter().zip(&self.exponents).any(|(e, a)| e >= a) {
            return None;
        }
        Some((self.monomial_index(&exps), coeff))
    }

    /// The cached table of structure constants.
    pub fn table(&self) -> &ProductTable {
        self.table.get_or_init(|| {
            let dim = self.dim();
            let mut products = Vec::with_capacity(dim * dim);
            let mut factorizations = vec![Vec::new(); dim];
            for l in 0..dim {
                for r in 0..dim {
                    let p = self.multiply_monomials(l, r);
                    if let Some((t, s)) = &p {
                        factorizations[*t].push((l, r, s.clone()));
                    }
                    products.push(p);
                }
            }
            ProductTable {
                dim,
                products,
                factorizations,
            }
        })
    }

    pub fn element(&self, coeffs: Vec<Scalar>) -> Result<AlgebraElement> {
        if coeffs.len() != self.dim() || coeffs.iter().any(|s| !self.field.contains(s)) {
            return Err(Error::Usage("coefficient vector does not match the algebra".into()));
        }
        Ok(AlgebraElement { coeffs })
    }

    pub fn zero_element(&self) -> AlgebraElement {
        AlgebraElement {
            coeffs: vec![self.field.zero(); self.dim()],
        }
    }

    pub fn basis_element(&self, idx: usize) -> AlgebraElement {
        let mut e = self.zero_element();
        e.coeffs[idx] = self.field.one();
        e
    }

    pub fn one_element(&self) -> AlgebraElement {
        self.basis_element(0)
    }

    fn check(&self, u: &AlgebraElement) -> Result<()> {
        if u.coeffs.len() != self.dim() || u.coeffs.first().is_some_and(|s| !self.field.contains(s)) {
            return Err(Error::Usage("element belongs to a different algebra".into()));
        }
        Ok(())
    }
}

/// A coefficient vector over the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    coeffs: Vec<Scalar>,
}

impl AlgebraElement {
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: usize) -> &Scalar {
        &self.coeffs[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Bilinear product of two algebra elements.
pub fn multiply(a: &QciSpec, u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
    a.check(u)?;
    a.check(v)?;
    let table = a.table();
    let mut out = a.zero_element();
    for (l, cl) in u.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (r, cr) in v.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if let Some((t, s)) = table.product(l, r) {
                out.coeffs[*t] = &out.coeffs[*t] + &(&(cl * cr) * s);
            }
        }
    }
    Ok(out)
}

/// The algebra automorphism `x_i -> alpha_i x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalTwist {
    alphas: Vec<Scalar>,
}

impl DiagonalTwist {
    pub fn new(alphas: Vec<Scalar>) -> Result<Self> {
        if let Some(i) = alphas.iter().position(Scalar::is_zero) {
            return Err(Error::Domain(format!("twist scalar alpha_{} is zero", i + 1)));
        }
        Ok(DiagonalTwist { alphas })
    }

    pub fn identity(field: FieldSpec, c: usize) -> Self {
        DiagonalTwist {
            alphas: vec![field.one(); c],
        }
    }

    pub fn alphas(&self) -> &[Scalar] {
        &self.alphas
    }

    pub fn is_identity(&self) -> bool {
        self.alphas.iter().all(Scalar::is_one)
    }

    pub fn compose(&self, other: &DiagonalTwist) -> DiagonalTwist {
        DiagonalTwist {
            alphas: self.alphas.iter().zip(&other.alphas).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inverse(&self) -> DiagonalTwist {
        DiagonalTwist {
            alphas: self
                .alphas
                .iter()
                .map(|a| a.inv().expect("twist scalars are nonzero"))
                .collect(),
        }
    }

    pub fn pow(&self, k: i64) -> DiagonalTwist {
        DiagonalTwist {
            alphas: self
                .alphas
                .iter()
                .map(|a| a.pow(k).expect("twist scalars are nonzero"))
                .collect(),
        }
    }

    /// The scalar by which the twist multiplies the monomial with exponents `exps`.
    pub fn monomial_factor(&self, exps: &[usize]) -> Scalar {
        let mut acc = self.alphas[0].field().one();
        for (a, &e) in self.alphas.iter().zip(exps) {
            acc = &acc * &a.pow(e as i64).expect("nonnegative exponent");
        }
        acc
    }
}

impl fmt::Display for DiagonalTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.alphas.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `nu^k` for the Nakayama automorphism `nu(x_w) = (prod_i q_iw^{a_i - 1}) x_w`.
pub fn nakayama(a: &QciSpec, k: i64) -> DiagonalTwist {
    let c = a.num_generators();
    let alphas = (0..c)
        .map(|w| {
            // i = w contributes q_ww = 1
            let mut acc = a.field.one();
            for i in 0..c {
                let e = a.exponents[i] as i64 - 1;
                acc = &acc * &a.q[i][w].pow(e).expect("q entries are units");
            }
            acc.pow(k).expect("Nakayama scalars are units")
        })
        .collect();
    DiagonalTwist { alphas }
}

/// The Frobenius form: the coefficient of the top monomial.
pub fn frobenius_functional(a: &QciSpec, u: &AlgebraElement) -> Scalar {
    u.coeffs[a.top_index()].clone()
}
