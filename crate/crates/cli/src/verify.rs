//! Verification suites. Each suite is a list of independent checks that
//! compare two routes to the same dimension; checks run in parallel and the
//! report keeps the order in which they were listed.

use std::fmt;

use qci_tate::bar::{hh_cohomology_dims, hh_homology_dims, BarWindowRequest};
use qci_tate::codim2::{kernel_dims, twisted_homology_dims};
use qci_tate::engine::formula_value;
use qci_tate::formulas::{ci_dim, codim2_cohomology_dim, codim2_homology_dim, exterior_dim};
use qci_tate::near_zero::{exactness_report, tate_hh0, tate_hh0_bimodule};
use qci_tate::{
    dual_bimodule, nakayama, regular_bimodule, twisted_bimodule, Coefficient, DiagonalTwist, Error, FieldSpec, Policy,
    QciSpec, Scalar, TateRequest, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::reports::CheckRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Ci,
    Exterior,
    Codim2,
    Duality,
    Exactness,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Ci,
        Suite::Exterior,
        Suite::Codim2,
        Suite::Duality,
        Suite::Exactness,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Ci => "ci",
            Suite::Exterior => "exterior",
            Suite::Codim2 => "codim2",
            Suite::Duality => "duality",
            Suite::Exactness => "exactness",
        })
    }
}

/// Seed of the randomized duality family.
pub const DUALITY_SEED: u64 = 0x00d0_a117_5eed;

type Check = Box<dyn Fn() -> qci_tate::Result<CheckRecord> + Send + Sync>;

fn check<F>(name: String, f: F) -> (String, Check)
where
    F: Fn() -> qci_tate::Result<CheckRecord> + Send + Sync + 'static,
{
    (name, Box::new(f))
}

fn compare<T: Serialize + PartialEq>(name: &str, lhs: T, rhs: T) -> qci_tate::Result<CheckRecord> {
    Ok(CheckRecord::compare(name, lhs, rhs))
}

fn q(text: &str) -> Scalar {
    FieldSpec::Rational.parse(text).expect("literal")
}

fn field_name(f: FieldSpec) -> String {
    match f {
        FieldSpec::Rational => "Q".into(),
        FieldSpec::Prime(p) => format!("GF({p})"),
    }
}

fn describe(a: &QciSpec) -> String {
    let c = a.num_generators();
    let mut q = Vec::new();
    for i in 0..c {
        for j in i + 1..c {
            q.push(format!("q{}{}={}", i + 1, j + 1, a.q(i, j)));
        }
    }
    format!("{} a={:?} {}", field_name(a.field()), a.exponents(), q.join(" "))
        .trim_end()
        .to_string()
}

fn bar_dims(a: &QciSpec, variant: Variant, k: i64, n_max: usize, budget: u128) -> qci_tate::Result<Vec<usize>> {
    let id = DiagonalTwist::identity(a.field(), a.num_generators());
    let b = twisted_bimodule(a, &nakayama(a, k), &id)?;
    match variant {
        Variant::Homology => hh_homology_dims(&BarWindowRequest::homology(a, &b, n_max).with_budget(budget)),
        Variant::Cohomology => hh_cohomology_dims(&BarWindowRequest::cohomology(a, &b, n_max).with_budget(budget)),
    }
}

/// A table computed without closed forms: complexes first, the bar complex
/// for whatever they leave open.
pub fn independent_table(
    a: &QciSpec,
    variant: Variant,
    coefficient: Coefficient,
    n_min: i64,
    n_max: i64,
    budget: u128,
) -> qci_tate::Result<Vec<Option<usize>>> {
    let req = TateRequest::new(a.clone(), variant, n_min, n_max)
        .with_coefficient(coefficient)
        .with_budget(budget);
    let bar = qci_tate::tate_dims(&req.clone().with_policy(Policy::BarOnly))?;
    let complex = match qci_tate::tate_dims(&req.clone().with_policy(Policy::ComplexOnly)) {
        Err(Error::Hypothesis(_)) => {
            // No δ-complex here; the near-zero window still covers 0 and -1.
            let (lo, hi) = (n_min.max(-1), n_max.min(0));
            if lo > hi {
                None
            } else {
                let narrow = TateRequest {
                    n_min: lo,
                    n_max: hi,
                    ..req
                };
                Some(qci_tate::tate_dims(&narrow.with_policy(Policy::ComplexOnly))?)
            }
        }
        other => Some(other?),
    };
    Ok(bar
        .entries
        .iter()
        .map(|e| {
            let near = complex.as_ref().and_then(|t| t.get(e.degree)?.value);
            near.or(e.value)
        })
        .collect())
}

fn first_missing(values: &[Option<usize>], n_min: i64) -> Option<i64> {
    values.iter().position(Option::is_none).map(|i| n_min + i as i64)
}

fn ci_checks(d: usize, budget: u128) -> Vec<(String, Check)> {
    let mut out = Vec::new();
    let cases: Vec<(usize, usize, FieldSpec)> = vec![
        (1, 2, FieldSpec::Rational),
        (1, 3, FieldSpec::Rational),
        (1, 3, FieldSpec::Prime(3)),
        (1, 4, FieldSpec::Prime(2)),
        (2, 2, FieldSpec::Rational),
        (2, 2, FieldSpec::Prime(2)),
        (2, 2, FieldSpec::Prime(3)),
        (2, 3, FieldSpec::Prime(3)),
    ];
    for (c, e, field) in cases {
        let a = QciSpec::commutative(field, vec![e; c]).expect("valid");
        let p = field.characteristic();
        let name = describe(&a);
        {
            let a = a.clone();
            out.push(check(format!("ci {name}: HH_0 near zero = formula"), move || {
                let id = DiagonalTwist::identity(a.field(), c);
                compare("", tate_hh0(&a, &id)?, ci_dim(c as u64, e as u64, p, 0) as usize)
            }));
        }
        for variant in [Variant::Homology, Variant::Cohomology] {
            let a = a.clone();
            out.push(check(
                format!("ci {name}: {variant} degrees 1..{d} bar = formula"),
                move || {
                    let dims = bar_dims(&a, variant, 0, d, budget)?;
                    let want: Vec<usize> = (1..=d)
                        .map(|n| ci_dim(c as u64, e as u64, p, n as i64) as usize)
                        .collect();
                    compare("", dims[1..].to_vec(), want)
                },
            ));
        }
    }
    out
}

fn exterior_checks(d: usize, budget: u128) -> Vec<(String, Check)> {
    let mut out = Vec::new();
    for c in 1..=3usize {
        for field in [FieldSpec::Prime(2), FieldSpec::Prime(3), FieldSpec::Rational] {
            let a = QciSpec::exterior(field, c).expect("valid");
            let p = field.characteristic();
            let name = format!("c={c} over {}", field_name(field));
            let top = if c == 3 { d.min(3) } else { d };
            {
                let a = a.clone();
                out.push(check(format!("exterior {name}: HH_0 near zero = formula"), move || {
                    let id = DiagonalTwist::identity(a.field(), c);
                    compare("", tate_hh0(&a, &id)?, exterior_dim(c as u64, p, 0) as usize)
                }));
            }
            for variant in [Variant::Homology, Variant::Cohomology] {
                let a = a.clone();
                out.push(check(
                    format!("exterior {name}: {variant} degrees 1..{top} bar = formula"),
                    move || {
                        let dims = bar_dims(&a, variant, 0, top, budget)?;
                        let want: Vec<usize> = (1..=top)
                            .map(|n| exterior_dim(c as u64, p, n as i64) as usize)
                            .collect();
                        compare("", dims[1..].to_vec(), want)
                    },
                ));
            }
            // Palindrome about -1/2 of the table built without closed forms.
            for variant in [Variant::Homology, Variant::Cohomology] {
                let a = a.clone();
                let lo = -(top as i64) - 1;
                out.push(check(
                    format!("exterior {name}: {variant} table on [{lo},{top}] is palindromic"),
                    move || {
                        let t = independent_table(&a, variant, Coefficient::Regular, lo, top as i64, budget)?;
                        if let Some(n) = first_missing(&t, lo) {
                            return Err(Error::Usage(format!("degree {n} not computed")));
                        }
                        let t: Vec<usize> = t.into_iter().flatten().collect();
                        let mirrored: Vec<usize> = t.iter().rev().copied().collect();
                        compare("", t, mirrored)
                    },
                ));
            }
        }
    }
    out
}

fn codim2_checks(d: usize, budget: u128) -> Vec<(String, Check)> {
    let mut out = Vec::new();
    let qs = ["2", "3", "1/2"];
    let shapes = [(2usize, 2usize), (2, 3), (3, 2)];
    let lo = -(d as i64) - 1;
    let hi = d as i64;
    for (a_exp, b_exp) in shapes {
        for qt in qs {
            let a = QciSpec::codim2(FieldSpec::Rational, a_exp, b_exp, q(qt)).expect("valid");
            let name = format!("({a_exp},{b_exp}) q={qt}");
            {
                let a = a.clone();
                out.push(check(
                    format!("codim2 {name}: cohomology on [{lo},{hi}] = formula"),
                    move || {
                        let t = independent_table(&a, Variant::Cohomology, Coefficient::Regular, lo, hi, budget)?;
                        let want: Vec<Option<usize>> =
                            (lo..=hi).map(|n| Some(codim2_cohomology_dim(n) as usize)).collect();
                        compare("", t, want)
                    },
                ));
            }
            {
                let a = a.clone();
                out.push(check(
                    format!("codim2 {name}: homology on [{lo},{hi}] = formula"),
                    move || {
                        let t = independent_table(&a, Variant::Homology, Coefficient::Regular, lo, hi, budget)?;
                        let want: Vec<Option<usize>> = (lo..=hi)
                            .map(|n| Some(codim2_homology_dim(a_exp as u64, b_exp as u64, 0, n) as usize))
                            .collect();
                        compare("", t, want)
                    },
                ));
            }
            {
                let a = a.clone();
                let top = 2 * d;
                out.push(check(
                    format!("codim2 {name}: twisted homology vanishes for n = 1..{top}"),
                    move || compare("", twisted_homology_dims(&a, top + 1)?, vec![0; top]),
                ));
            }
            {
                let a = a.clone();
                let top = 2 * d;
                out.push(check(
                    format!("codim2 {name}: kernel dimensions for n = 1..{top}"),
                    move || {
                        let ab = a_exp * b_exp;
                        let want: Vec<usize> = (1..=top)
                            .map(|n| {
                                let t = n / 2;
                                if n % 2 == 0 {
                                    ab * t + ab - 1
                                } else {
                                    ab * t + ab + 1
                                }
                            })
                            .collect();
                        compare("", kernel_dims(&a, top)?, want)
                    },
                ));
            }
        }
        // The tables do not depend on q.
        out.push(check(
            format!("codim2 ({a_exp},{b_exp}): tables agree across q"),
            move || {
                let tables = qs
                    .iter()
                    .map(|qt| {
                        let a = QciSpec::codim2(FieldSpec::Rational, a_exp, b_exp, q(qt))?;
                        let h = independent_table(&a, Variant::Homology, Coefficient::Regular, lo, hi, budget)?;
                        let c = independent_table(&a, Variant::Cohomology, Coefficient::Regular, lo, hi, budget)?;
                        Ok((h, c))
                    })
                    .collect::<qci_tate::Result<Vec<_>>>()?;
                compare("", tables[1..].to_vec(), vec![tables[0].clone(); qs.len() - 1])
            },
        ));
    }
    out
}

/// Algebras of dimension at most 6: a fixed list plus seeded random ones.
pub fn duality_family(extra: usize) -> Vec<QciSpec> {
    let mut out = vec![
        QciSpec::commutative(FieldSpec::Rational, vec![2]).unwrap(),
        QciSpec::commutative(FieldSpec::Prime(2), vec![4]).unwrap(),
        QciSpec::commutative(FieldSpec::Rational, vec![2, 3]).unwrap(),
        QciSpec::exterior(FieldSpec::Rational, 2).unwrap(),
        QciSpec::exterior(FieldSpec::Prime(3), 2).unwrap(),
        QciSpec::codim2(FieldSpec::Rational, 2, 2, q("2")).unwrap(),
        QciSpec::codim2(FieldSpec::Rational, 3, 2, q("-1/3")).unwrap(),
        QciSpec::codim2(FieldSpec::Prime(5), 2, 3, FieldSpec::Prime(5).from_i64(2)).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(DUALITY_SEED);
    let shapes: [&[usize]; 6] = [&[2], &[3], &[5], &[6], &[2, 2], &[2, 3]];
    for _ in 0..extra {
        let ex = shapes[rng.gen_range(0..shapes.len())].to_vec();
        let field = [
            FieldSpec::Rational,
            FieldSpec::Prime(2),
            FieldSpec::Prime(3),
            FieldSpec::Prime(7),
        ][rng.gen_range(0..4)];
        let a = if ex.len() == 2 {
            let (n, den) = (rng.gen_range(-5i64..=5), rng.gen_range(1i64..=4));
            let qv = if n == 0 {
                field.one()
            } else {
                field.fraction(n, den).unwrap_or_else(|_| field.one())
            };
            let qv = if qv.is_zero() { field.one() } else { qv };
            QciSpec::codim2(field, ex[0], ex[1], qv).unwrap()
        } else {
            QciSpec::commutative(field, ex).unwrap()
        };
        out.push(a);
    }
    out
}

fn duality_checks(d: usize, budget: u128) -> Vec<(String, Check)> {
    let mut out = Vec::new();
    let coefficients = [("A", 0i64), ("nu A", 1), ("nu^-1 A", -1)];
    for a in duality_family(6) {
        let name = describe(&a);
        for (label, k) in coefficients {
            let a = a.clone();
            out.push(check(
                format!("duality {name}: dim HH^n(A,B) = dim HH_n(A,D(B)), B = {label}, n = 0..{d}"),
                move || {
                    let id = DiagonalTwist::identity(a.field(), a.num_generators());
                    let b = twisted_bimodule(&a, &nakayama(&a, k), &id)?;
                    let db = dual_bimodule(&b);
                    let lhs = hh_cohomology_dims(&BarWindowRequest::cohomology(&a, &b, d).with_budget(budget))?;
                    let rhs = hh_homology_dims(&BarWindowRequest::homology(&a, &db, d).with_budget(budget))?;
                    compare("", lhs, rhs)
                },
            ));
        }
        // Homology palindrome, the two sides by different routes: the
        // negative side from the closed form when one applies, otherwise from
        // the Hom-side complex of D(A) = _{nu}A_1.
        for n in 0..=d.min(2) as i64 {
            let a = a.clone();
            out.push(check(
                format!("duality {name}: dim HH_{n} = dim HH_{}", -(n + 1)),
                move || {
                    let id = DiagonalTwist::identity(a.field(), a.num_generators());
                    let formula = formula_value(&a, Variant::Homology, -(n + 1), 0);
                    let (lhs, rhs) = if n == 0 {
                        let rhs = match formula {
                            Some(v) => v,
                            None => tate_hh0_bimodule(&a, &regular_bimodule(&a))?,
                        };
                        (tate_hh0(&a, &id)?, rhs)
                    } else {
                        let lhs = bar_dims(&a, Variant::Homology, 0, n as usize, budget)?[n as usize];
                        let rhs = match formula {
                            Some(v) => v,
                            None => bar_dims(&a, Variant::Cohomology, 1, n as usize, budget)?[n as usize],
                        };
                        (lhs, rhs)
                    };
                    compare("", lhs, rhs)
                },
            ));
        }
        // Twist duality for cohomology: dim ĤH^n(A,A) = dim ĤH^{-(n+1)}(A, nu^2 A).
        for n in 0..=1i64 {
            let a = a.clone();
            out.push(check(
                format!("duality {name}: dim HH^{n}(A,A) = dim HH^{}(A, nu^2 A)", -(n + 1)),
                move || {
                    let lhs = if n == 0 {
                        tate_hh0_bimodule(&a, &dual_bimodule(&regular_bimodule(&a)))?
                    } else {
                        bar_dims(&a, Variant::Cohomology, 0, 1, budget)?[1]
                    };
                    let req = TateRequest::new(a.clone(), Variant::Cohomology, -(n + 1), -(n + 1))
                        .with_coefficient(Coefficient::NakayamaPower(2))
                        .with_budget(budget);
                    let t = qci_tate::tate_dims(&req)?;
                    let e = &t.entries[0];
                    compare("", lhs, e.value.ok_or_else(|| Error::Usage(e.method.source_text()))?)
                },
            ));
        }
    }
    out
}

/// Algebras of dimension at most 16 for the exactness check.
pub fn exactness_family() -> Vec<QciSpec> {
    let mut out = Vec::new();
    for field in [
        FieldSpec::Rational,
        FieldSpec::Prime(2),
        FieldSpec::Prime(3),
        FieldSpec::Prime(5),
    ] {
        for e in 2..=16 {
            out.push(QciSpec::commutative(field, vec![e]).unwrap());
        }
        for c in 1..=4 {
            out.push(QciSpec::exterior(field, c).unwrap());
        }
        for (a, b) in [(2, 2), (2, 3), (3, 3), (2, 4), (4, 4), (3, 5), (2, 8)] {
            let qv = if field == FieldSpec::Rational {
                q("2")
            } else {
                field.from_i64(-1)
            };
            out.push(QciSpec::codim2(field, a, b, qv).unwrap());
            out.push(QciSpec::commutative(field, vec![a, b]).unwrap());
        }
    }
    out.push(
        QciSpec::from_upper(
            FieldSpec::Rational,
            vec![2, 2, 3],
            &[(0, 1, q("2")), (0, 2, q("-1/3")), (1, 2, q("5"))],
        )
        .unwrap(),
    );
    out.push(
        QciSpec::from_upper(
            FieldSpec::Prime(7),
            vec![2, 2, 2, 2],
            &[
                (0, 1, FieldSpec::Prime(7).from_i64(3)),
                (2, 3, FieldSpec::Prime(7).from_i64(5)),
            ],
        )
        .unwrap(),
    );
    out
}

fn exactness_checks() -> Vec<(String, Check)> {
    exactness_family()
        .into_iter()
        .map(|a| {
            check(format!("exactness {}", describe(&a)), move || {
                let r = exactness_report(&a);
                let lhs = serde_json::json!({"annihilated": r.annihilated, "independent": r.independent});
                let rhs = serde_json::json!({"annihilated": true, "independent": r.expected});
                compare("", lhs, rhs)
            })
        })
        .collect()
}

/// Exactness records for a single algebra.
pub fn exactness_records(a: &QciSpec) -> Vec<CheckRecord> {
    let r = exactness_report(a);
    vec![
        CheckRecord::compare("commutators annihilate s", r.annihilated, true),
        CheckRecord::compare("rank of shifted copies of s", r.independent, r.expected),
    ]
}

/// Runs one suite at the given depth.
pub fn run_verify(suite: Suite, max_degree: usize, budget: u128) -> Vec<CheckRecord> {
    let checks = match suite {
        Suite::Ci => ci_checks(max_degree, budget),
        Suite::Exterior => exterior_checks(max_degree, budget),
        Suite::Codim2 => codim2_checks(max_degree, budget),
        Suite::Duality => duality_checks(max_degree, budget),
        Suite::Exactness => exactness_checks(),
    };
    checks
        .par_iter()
        .map(|(name, f)| match f() {
            Ok(mut r) => {
                r.check = name.clone();
                r
            }
            Err(e) => CheckRecord::failed(name.clone(), &e),
        })
        .collect()
}

/// 0 when every check passes, 3 when the only failures are resource
/// failures, 1 otherwise.
pub fn exit_status(records: &[CheckRecord]) -> i32 {
    if records.iter().all(|r| r.pass) {
        0
    } else if records.iter().all(|r| r.pass || r.is_resource_failure()) {
        3
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_deterministic_and_small() {
        let a: Vec<String> = duality_family(6).iter().map(describe).collect();
        let b: Vec<String> = duality_family(6).iter().map(describe).collect();
        assert_eq!(a, b);
        assert!(duality_family(6).iter().all(|a| a.dim() <= 6));
        assert!(exactness_family().iter().all(|a| a.dim() <= 16));
    }

    #[test]
    fn exit_status_ranks_failures() {
        let ok = CheckRecord::compare("a", 1, 1);
        let bad = CheckRecord::compare("b", 1, 2);
        let res = CheckRecord::failed(
            "c",
            &Error::Resource {
                degree: 1,
                needed: 2,
                budget: 1,
            },
        );
        assert_eq!(exit_status(std::slice::from_ref(&ok)), 0);
        assert_eq!(exit_status(&[ok.clone(), res.clone()]), 3);
        assert_eq!(exit_status(&[ok, res, bad]), 1);
    }

    #[test]
    fn exactness_suite_passes() {
        let records = run_verify(Suite::Exactness, 0, 1);
        assert!(records.iter().all(|r| r.pass), "{records:#?}");
    }
}
