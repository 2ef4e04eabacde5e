//! Exact scalars: prime fields GF(p) with word-sized residues, and the
//! rationals with arbitrary-precision numerators and denominators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 61;

/// The ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    /// GF(p), checking that `p` is a prime below 2^61.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::Validation(format!("prime modulus {p} must be below 2^61")));
        }
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldSpec::Prime(p) => p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Prime(p) => Scalar::Residue {
                value: reduce_i128(n as i128, p),
                modulus: p,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// `n / d` in this field.
    pub fn fraction(&self, n: i64, d: i64) -> Result<Scalar> {
        let den = self.from_i64(d);
        Ok(self.from_i64(n) * den.inv()?)
    }

    /// Parse `"n"` or `"n/d"` (decimal integers, optional sign) into the field.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("malformed scalar {text:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("malformed scalar {text:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        match *self {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let n = reduce_big(&num, p);
                let d = reduce_big(&den, p);
                if d == 0 {
                    return Err(Error::Parse(format!("denominator of {text:?} vanishes modulo {p}")));
                }
                Ok(Scalar::Residue {
                    value: mul_mod(n, inv_mod(d, p), p),
                    modulus: p,
                })
            }
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        x.field() == *self
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

/// A field element in canonical form: a residue in `[0, p)` or a reduced
/// fraction with positive denominator. Equality is representation equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Residue { value: u64, modulus: u64 },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(match self {
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
        })
    }

    /// `self^n` for any integer `n`; a zero base with negative exponent is a
    /// domain error.
    pub fn pow(&self, n: i64) -> Result<Scalar> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let e = n.unsigned_abs();
        Ok(match base {
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(value, e, modulus),
                modulus,
            },
            Scalar::Rational(r) => {
                let e = u32::try_from(e).map_err(|_| Error::Domain(format!("exponent {n} too large")))?;
                Scalar::Rational(num_traits::pow::Pow::pow(&r, e))
            }
        })
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// Image under reduction modulo `p`, when the denominator is a unit there.
    pub(crate) fn reduce_mod(&self, p: u64) -> Option<u64> {
        match self {
            Scalar::Residue { value, modulus } => (*modulus == p).then_some(*value),
            Scalar::Rational(r) => {
                let d = reduce_big(r.denom(), p);
                if d == 0 {
                    return None;
                }
                Some(mul_mod(reduce_big(r.numer(), p), inv_mod(d, p), p))
            }
        }
    }
}

fn same_field(a: &Scalar, b: &Scalar) {
    assert_eq!(a.field(), b.field(), "arithmetic between scalars of different fields");
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => Scalar::Residue {
                value: add_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => Scalar::Residue {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Rational(r) => Scalar::Rational(-r),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

/// `x^n` (free-function form used by the closed forms and tests).
pub fn scalar_pow(x: &Scalar, n: i64) -> Result<Scalar> {
    x.pow(n)
}

/// Whether `q` is *not* a root of unity in `field`. Over the rationals the
/// only roots of unity are ±1; over a finite field every unit is one.
pub fn assert_not_root_of_unity(q: &Scalar, field: FieldSpec) -> Result<bool> {
    if !field.contains(q) {
        return Err(Error::Usage(format!("{q} is not an element of {field}")));
    }
    if q.is_zero() {
        return Err(Error::Domain("zero is not a unit".into()));
    }
    Ok(match q {
        Scalar::Residue { .. } => false,
        Scalar::Rational(r) => !(r.is_one() || (-r).is_one()),
    })
}

// --- word-sized modular helpers -------------------------------------------

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn reduce_i128(n: i128, p: u64) -> u64 {
    n.rem_euclid(p as i128) as u64
}

fn reduce_big(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Scalar {
        FieldSpec::Rational.parse(s).unwrap()
    }

    #[test]
    fn negative_power_over_rationals() {
        assert_eq!(scalar_pow(&q("2"), -3).unwrap(), q("1/8"));
    }

    #[test]
    fn zeroth_power_is_one() {
        for x in [q("0"), q("-7/3"), FieldSpec::Prime(5).from_i64(3)] {
            assert!(scalar_pow(&x, 0).unwrap().is_one());
        }
    }

    #[test]
    fn power_mod_five() {
        let f = FieldSpec::prime(5).unwrap();
        // 2^4 = 16 = 3*5 + 1
        assert_eq!(16 % 5, 1);
        assert_eq!(scalar_pow(&f.from_i64(2), 4).unwrap(), f.one());
    }

    #[test]
    fn zero_base_negative_exponent() {
        assert!(matches!(q("0").pow(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn roots_of_unity() {
        assert!(assert_not_root_of_unity(&q("2"), FieldSpec::Rational).unwrap());
        assert!(!assert_not_root_of_unity(&q("-1"), FieldSpec::Rational).unwrap());
        assert!(!assert_not_root_of_unity(&q("1"), FieldSpec::Rational).unwrap());
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(!assert_not_root_of_unity(&f7.from_i64(3), f7).unwrap());
        assert!(matches!(
            assert_not_root_of_unity(&q("0"), FieldSpec::Rational),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(q("6/-4").to_string(), "-3/2");
        assert_eq!(q(" 10 ").to_string(), "10");
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(f2.parse("-1").unwrap(), f2.one());
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.parse("1/2").unwrap().to_string(), "4");
        assert!(matches!(f7.parse("1/7"), Err(Error::Parse(_))));
        assert!(matches!(FieldSpec::Rational.parse("1/0"), Err(Error::Parse(_))));
        assert!(matches!(FieldSpec::Rational.parse("x"), Err(Error::Parse(_))));
    }

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime((1 << 61) - 1).is_ok());
        assert!(FieldSpec::prime(1 << 61).is_err());
        assert_eq!(FieldSpec::Rational.characteristic(), 0);
        assert_eq!(FieldSpec::prime(3).unwrap().characteristic(), 3);
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::Rational),
            Just(FieldSpec::Prime(2)),
            Just(FieldSpec::Prime(7)),
            Just(FieldSpec::Prime(1_000_000_007)),
        ]
    }

    fn arb_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        arb_field().prop_flat_map(|f| {
            let el = (-50i64..50, 1i64..20).prop_map(move |(n, d)| f.fraction(n, d).unwrap_or_else(|_| f.from_i64(n)));
            (el.clone(), el.clone(), el)
        })
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn power_law((a, _, _) in arb_triple(), m in -8i64..=8, n in -8i64..=8) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(a.pow(m + n).unwrap(), &a.pow(m).unwrap() * &a.pow(n).unwrap());
        }

        #[test]
        fn canonical_form(n in -30i64..30, d in 1i64..30, k in 1i64..5) {
            let f = FieldSpec::Rational;
            let x = f.fraction(n, d).unwrap();
            let y = f.fraction(n * k, d * k).unwrap();
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(x.to_string(), y.to_string());
            prop_assert_eq!(f.parse(&x.to_string()).unwrap(), x);
        }
    }
}
