//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qci_tate::codim2::{kernel_dims, twisted_homology_dims};
use qci_tate::formulas::{ci_dim, codim2_homology_dim, exterior_dim, lower_bound};
use qci_tate::near_zero::tate_hh0;
use qci_tate::{tate_dims, Coefficient, DiagonalTwist, FieldSpec, Policy, QciSpec, Scalar, TateRequest, Variant};
use qci_tate_cli::verify::{independent_table, run_verify, Suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(s: &str) -> Scalar {
    FieldSpec::Rational.parse(s).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn bar_values(a: &QciSpec, variant: Variant, lo: i64, hi: i64) -> Result<Vec<usize>, String> {
    let t = tate_dims(&TateRequest::new(a.clone(), variant, lo, hi).with_policy(Policy::BarOnly))
        .map_err(|e| e.to_string())?;
    t.values()
        .into_iter()
        .map(|v| v.ok_or_else(|| "bar value missing".to_string()))
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let expected: Vec<Option<usize>> = (-5i64..=5)
        .map(|n| {
            Some(match n {
                0 | 2 => 1,
                1 => 2,
                _ => 0,
            })
        })
        .collect();
    for (a, b) in [(2, 2), (3, 2)] {
        for q in ["2", "3", "1/2"] {
            let alg = QciSpec::codim2(FieldSpec::Rational, a, b, rat(q)).unwrap();
            let auto =
                tate_dims(&TateRequest::new(alg.clone(), Variant::Cohomology, -5, 5)).map_err(|e| e.to_string())?;
            ensure(auto.values() == expected, || {
                format!("({a},{b}) q={q}: auto table {:?}", auto.values())
            })?;
            let independent = independent_table(&alg, Variant::Cohomology, Coefficient::Regular, -5, 5, 5_000_000)
                .map_err(|e| e.to_string())?;
            ensure(independent == expected, || {
                format!("({a},{b}) q={q}: bar/complex table {independent:?}")
            })?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "6 algebras, auto and bar/complex tables equal, {:.1?}",
        start.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    for (a, b) in [(2usize, 2usize), (3, 2)] {
        for q in ["2", "3", "1/2"] {
            let alg = QciSpec::codim2(FieldSpec::Rational, a, b, rat(q)).unwrap();
            let want = vec![Some(a + b - 2); 9];
            let auto =
                tate_dims(&TateRequest::new(alg.clone(), Variant::Homology, -4, 4)).map_err(|e| e.to_string())?;
            ensure(auto.values() == want, || {
                format!("({a},{b}) q={q}: auto {:?}", auto.values())
            })?;
            let ind = independent_table(&alg, Variant::Homology, Coefficient::Regular, -4, 4, 5_000_000)
                .map_err(|e| e.to_string())?;
            ensure(ind == want, || format!("({a},{b}) q={q}: bar/complex {ind:?}"))?;
        }
    }
    // Positive characteristic has no generic q: those rows exist only as closed forms.
    let gf5 = QciSpec::codim2(FieldSpec::Prime(5), 2, 3, FieldSpec::Prime(5).from_i64(2)).unwrap();
    let t = tate_dims(&TateRequest::new(gf5, Variant::Homology, -2, 2).with_policy(Policy::FormulaOnly))
        .map_err(|e| e.to_string())?;
    ensure(t.values().iter().all(Option::is_none), || {
        "closed form applied over GF(5)".into()
    })?;
    let rows = [
        ((2, 2, 2), [4, 3, 3, 4]),
        ((2, 3, 2), [4, 4, 4, 4]),
        ((4, 6, 2), [10, 9, 9, 10]),
        ((3, 3, 3), [6, 5, 5, 6]),
        ((2, 3, 3), [4, 4, 4, 4]),
    ];
    for ((a, b, p), want) in rows {
        let got: Vec<u64> = (-2..=1).map(|n| codim2_homology_dim(a, b, p, n)).collect();
        ensure(got == want, || format!("closed form a={a} b={b} p={p}: {got:?}"))?;
    }
    Ok("constant a+b-2 on [-4,4] over Q; p | a and p | a,b rows checked as closed forms only".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    for (a, b) in [(2usize, 2usize), (2, 3), (3, 3)] {
        let alg = QciSpec::codim2(FieldSpec::Rational, a, b, rat("2")).unwrap();
        let h = twisted_homology_dims(&alg, 9).map_err(|e| e.to_string())?;
        ensure(h == vec![0; 8], || format!("({a},{b}) homology {h:?}"))?;
        let k = kernel_dims(&alg, 8).map_err(|e| e.to_string())?;
        let ab = a * b;
        let want: Vec<usize> = (1..=8usize)
            .map(|n| {
                if n % 2 == 0 {
                    ab * (n / 2) + ab - 1
                } else {
                    ab * (n / 2) + ab + 1
                }
            })
            .collect();
        ensure(k == want, || format!("({a},{b}) kernels {k:?} vs {want:?}"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "homology zero for n = 1..8, kernels abt+ab∓1, {:.1?}",
        start.elapsed()
    ))
}

fn criterion_4() -> Outcome {
    for c in 1..=3usize {
        for field in [FieldSpec::Prime(2), FieldSpec::Prime(3), FieldSpec::Rational] {
            let a = QciSpec::exterior(field, c).unwrap();
            let p = field.characteristic();
            let id = DiagonalTwist::identity(field, c);
            let h0 = tate_hh0(&a, &id).map_err(|e| e.to_string())?;
            ensure(h0 == exterior_dim(c as u64, p, 0) as usize, || {
                format!("c={c} {field:?}: degree 0 gives {h0}")
            })?;
            for variant in [Variant::Homology, Variant::Cohomology] {
                let bar = bar_values(&a, variant, 1, 3)?;
                let want: Vec<usize> = (1..=3).map(|n| exterior_dim(c as u64, p, n) as usize).collect();
                ensure(bar == want, || {
                    format!("c={c} {field:?} {variant}: bar {bar:?} vs {want:?}")
                })?;
                let t = independent_table(&a, variant, Coefficient::Regular, -4, 3, 5_000_000)
                    .map_err(|e| e.to_string())?;
                let rev: Vec<_> = t.iter().rev().copied().collect();
                ensure(t.iter().all(Option::is_some) && t == rev, || {
                    format!("c={c} {field:?} {variant}: table {t:?}")
                })?;
            }
        }
    }
    Ok("9 algebras, degree 0 and bar degrees 1..3 match, [-4,3] palindromic".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for (field, want) in [
        (FieldSpec::Rational, [3usize, 4, 5, 6]),
        (FieldSpec::Prime(2), [4, 8, 12, 16]),
    ] {
        let a = QciSpec::commutative(field, vec![2, 2]).unwrap();
        let p = field.characteristic();
        let mut got = vec![tate_hh0(&a, &DiagonalTwist::identity(field, 2)).map_err(|e| e.to_string())?];
        got.extend(bar_values(&a, Variant::Homology, 1, 3)?);
        let formula: Vec<usize> = (0..=3).map(|n| ci_dim(2, 2, p, n) as usize).collect();
        ensure(got == want && formula == want, || {
            format!("{field:?}: computed {got:?}, formula {formula:?}")
        })?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "(3,4,5,6) over Q and (4,8,12,16) over GF(2), {:.1?}",
        start.elapsed()
    ))
}

fn random_spec(rng: &mut ChaCha8Rng) -> QciSpec {
    let c = rng.gen_range(1..=3usize);
    let ex: Vec<usize> = (0..c).map(|_| rng.gen_range(2..=4)).collect();
    let mut upper = Vec::new();
    let field = if rng.gen_bool(0.5) {
        FieldSpec::Rational
    } else {
        FieldSpec::Prime([2u64, 3, 5, 7][rng.gen_range(0..4)])
    };
    for i in 0..c {
        for j in i + 1..c {
            let q = match field {
                FieldSpec::Rational => loop {
                    let (n, d) = (rng.gen_range(-5i64..=5), rng.gen_range(1i64..=5));
                    if n != 0 && n.abs() != d {
                        break field.fraction(n, d).unwrap();
                    }
                },
                _ => field.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 }),
            };
            upper.push((i, j, q));
        }
    }
    QciSpec::from_upper(field, ex, &upper).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10_b0_0d);
    let mut tight = 0;
    for i in 0..20 {
        let a = random_spec(&mut rng);
        if a.field() == FieldSpec::Rational {
            ensure(a.generic_q(), || format!("spec {i} has a root of unity"))?;
        }
        let ex: Vec<u64> = a.exponents().iter().map(|&e| e as u64).collect();
        let bound = lower_bound(&ex, a.field().characteristic(), 0) as usize;
        let v = tate_hh0(&a, &DiagonalTwist::identity(a.field(), a.num_generators())).map_err(|e| e.to_string())?;
        ensure(v >= bound, || format!("spec {i} {:?}: {v} < {bound}", a.exponents()))?;
        tight += usize::from(v == bound);
    }
    Ok(format!("20 random specs, bound attained in {tight}"))
}

fn suite(s: Suite, d: usize) -> Outcome {
    let records = run_verify(s, d, 5_000_000);
    let bad: Vec<_> = records.iter().filter(|r| !r.pass).map(|r| r.check.clone()).collect();
    ensure(bad.is_empty(), || format!("failed: {bad:?}"))?;
    Ok(format!("{} checks", records.len()))
}

fn criterion_7() -> Outcome {
    suite(Suite::Duality, 3)
}

fn criterion_8() -> Outcome {
    suite(Suite::Exactness, 0)
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qci-tate"))
        .args(["verify", "--max-degree", "3"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "{} checks, exit 0, {:.1?}",
        report.as_array().map_or(0, Vec::len),
        start.elapsed()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "codim-2 cohomology table", criterion_1),
        (2, "codim-2 homology table", criterion_2),
        (3, "twisted homology vanishes", criterion_3),
        (4, "exterior algebras", criterion_4),
        (5, "commutative complete intersection", criterion_5),
        (6, "lower bound in degree 0", criterion_6),
        (7, "duality suite", criterion_7),
        (8, "exactness near zero", criterion_8),
        (9, "verify subcommand", criterion_9),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {n} ({name}): PASS - {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL - {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
