//! Closed-form dimensions of Tate-Hochschild (co)homology.
//!
//! `p` is the characteristic, `0` for the rationals. Homology formulas are written for
//! `n ≥ 0`; negative degrees use the symmetry `n <-> -(n+1)`.

/// `binom(m, r)`, zero unless `0 ≤ r ≤ m`.
pub fn binom(m: i64, r: i64) -> u64 {
    if r < 0 || m < 0 || r > m {
        return 0;
    }
    let r = r.min(m - r) as u64;
    let m = m as u64;
    (0..r).fold(1u64, |acc, i| acc * (m - i) / (i + 1))
}

/// Whether the characteristic `p` divides `a`; characteristic zero divides nothing.
pub fn divides(p: u64, a: u64) -> bool {
    p != 0 && a.is_multiple_of(p)
}

fn fold_negative(n: i64) -> i64 {
    if n < 0 {
        -(n + 1)
    } else {
        n
    }
}

/// `HH^n` of the truncated polynomial algebra `k[x]/(x^a)`, `n ≥ 0`.
pub fn holm_dim(a: u64, p: u64, n: u64) -> u64 {
    if n == 0 || divides(p, a) {
        a
    } else {
        a - 1
    }
}

/// `k[x_1..x_c]/(x_1^a, ..., x_c^a)`, all `n ∈ ℤ`.
pub fn ci_dim(c: u64, a: u64, p: u64, n: i64) -> u64 {
    let n = fold_negative(n);
    let ac = a.pow(c as u32);
    if divides(p, a) {
        return binom(c as i64 + n - 1, n) * ac;
    }
    if n == 0 {
        return ac - 1;
    }
    (0..=c)
        .map(|t| {
            binom(c as i64, t as i64)
                * binom(n - 1, n - c as i64 + t as i64)
                * a.pow(t as u32)
                * (a - 1).pow((c - t) as u32)
        })
        .sum()
}

/// The exterior algebra on `c` generators, all `n ∈ ℤ`.
pub fn exterior_dim(c: u64, p: u64, n: i64) -> u64 {
    let n = fold_negative(n);
    let choose = binom(c as i64 + n - 1, c as i64 - 1);
    if p == 2 {
        (1 << c) * choose
    } else if n == 0 {
        (1 << c) - (1 << (c - 1))
    } else {
        (1 << (c - 1)) * choose
    }
}

/// Lower bound for `dim ĤH_n(A, A)` of any QCI with exponents `a`.
pub fn lower_bound(a: &[u64], p: u64, n: i64) -> u64 {
    let base = a.iter().sum::<u64>() - a.len() as u64;
    let d = a.iter().filter(|&&ai| divides(p, ai)).count() as u64;
    if n == 0 || n == -1 {
        base + u64::from(d > 0)
    } else {
        base + d
    }
}

/// `dim ĤH_n(A, A)` for `k<X,Y>/(X^a, XY - qYX, Y^b)`, `q` generic.
pub fn codim2_homology_dim(a: u64, b: u64, p: u64, n: i64) -> u64 {
    let (pa, pb) = (divides(p, a), divides(p, b));
    let near_zero = n == 0 || n == -1;
    match (pa, pb) {
        (false, false) => a + b - 2,
        (true, true) if !near_zero => a + b,
        _ => a + b - 1,
    }
}

/// `dim ĤH^n(A, A)` for the same algebra; `1, 2, 1` at `n = 0, 1, 2`.
pub fn codim2_cohomology_dim(n: i64) -> u64 {
    match n {
        0 | 2 => 1,
        1 => 2,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(4, -1), 0);
        assert_eq!(binom(2, 3), 0);
        assert_eq!(binom(-1, 0), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(30, 15), 155_117_520);
    }

    #[test]
    fn holm_examples() {
        assert_eq!(holm_dim(2, 0, 0), 2);
        assert_eq!(holm_dim(2, 2, 5), 2);
        assert_eq!(holm_dim(3, 2, 4), 2);
    }

    #[test]
    fn ci_examples() {
        assert_eq!(ci_dim(2, 2, 0, 0), 3);
        assert_eq!(ci_dim(2, 2, 0, 2), 5);
        assert_eq!(ci_dim(2, 2, 2, 3), 16);
        assert_eq!((0..4).map(|n| ci_dim(2, 2, 0, n)).collect::<Vec<_>>(), vec![3, 4, 5, 6]);
        assert_eq!(
            (0..4).map(|n| ci_dim(2, 2, 2, n)).collect::<Vec<_>>(),
            vec![4, 8, 12, 16]
        );
    }

    #[test]
    fn ci_with_one_generator_is_holm_in_positive_degrees() {
        // Degree zero differs: holm_dim is the classical HH^0, the Tate
        // group there is a quotient of it.
        for a in 2..6 {
            for p in [0, 2, 3, 5] {
                for n in 1..6 {
                    assert_eq!(ci_dim(1, a, p, n as i64), holm_dim(a, p, n), "a={a} p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn exterior_examples() {
        assert_eq!(exterior_dim(2, 3, 0), 2);
        assert_eq!(exterior_dim(3, 0, 2), 24);
        assert_eq!(exterior_dim(2, 2, 1), 8);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&[2, 3], 0, 0), 3);
        assert_eq!(lower_bound(&[2, 2], 2, 4), 4);
        assert_eq!(lower_bound(&[2, 3], 2, 0), 4);
    }

    #[test]
    fn codim2_examples() {
        assert_eq!(codim2_homology_dim(2, 3, 0, 0), 3);
        assert_eq!(codim2_homology_dim(2, 2, 2, 5), 4);
        assert_eq!(codim2_homology_dim(2, 3, 3, 2), 4);
        assert_eq!(codim2_homology_dim(2, 2, 2, 0), 3);
        assert_eq!(codim2_cohomology_dim(1), 2);
        assert_eq!(codim2_cohomology_dim(-3), 0);
        assert_eq!(codim2_cohomology_dim(0), 1);
    }

    #[test]
    fn cohomology_is_not_palindromic() {
        assert_ne!(codim2_cohomology_dim(0), codim2_cohomology_dim(-1));
    }

    proptest! {
        #[test]
        fn homology_forms_are_palindromic(c in 1u64..5, a in 2u64..6, b in 2u64..6, p in prop::sample::select(vec![0u64, 2, 3, 5]), n in -20i64..20) {
            let m = -(n + 1);
            prop_assert_eq!(ci_dim(c, a, p, n), ci_dim(c, a, p, m));
            prop_assert_eq!(exterior_dim(c, p, n), exterior_dim(c, p, m));
            prop_assert_eq!(codim2_homology_dim(a, b, p, n), codim2_homology_dim(a, b, p, m));
            prop_assert_eq!(lower_bound(&[a, b], p, n), lower_bound(&[a, b], p, m));
        }

        #[test]
        fn exterior_meets_lower_bound(c in 1u64..5, p in prop::sample::select(vec![0u64, 2, 3]), n in -6i64..6) {
            let a = vec![2; c as usize];
            prop_assert!(exterior_dim(c, p, n) >= lower_bound(&a, p, n));
        }
    }
}
