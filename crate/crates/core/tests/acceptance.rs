//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any line is FAIL. Runs without the libtest harness so the
//! lines are always shown.

use std::process::Command;
use std::time::Instant;

use khintchine::asymptotics::{
    alpha_asymptotic, alpha_upper_bound, balanced_upper_bound, beta_asymptotic, convergence_report,
    log_gamma, SweepRegime,
};
use khintchine::combinatorics::binomial;
use khintchine::formulas::{
    balanced_closed_form, best_constant_2p_power, full_sum_case, t_e_minus_t_o,
};
use khintchine::oracle::Oracle;
use khintchine::{exact_to_log, ExactRational, Parameters};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params(n: u64, m: i64, p: u64) -> Parameters {
    Parameters::new(n, m, p).expect("valid parameters")
}

fn composition_identity() -> Check {
    let oracle = Oracle::default();
    for n in 1..=8u64 {
        for m in (0..=n).filter(|m| (n - m) % 2 == 0) {
            for p in 1..=4 {
                let pr = params(n, m as i64, p);
                let tally = oracle.tally_compositions(&pr).map_err(|e| e.to_string())?;
                let closed = BigInt::from(t_e_minus_t_o(&pr));
                ensure(tally.difference() == closed, || {
                    format!(
                        "N={n} M={m} p={p}: tally {} vs closed form {closed}",
                        tally.difference()
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn conditioning_count() -> Check {
    let oracle = Oracle::default();
    for n in 0..=16u64 {
        for m in (0..=n).filter(|m| (n - m) % 2 == 0) {
            for signed in [m as i64, -(m as i64)] {
                let count = oracle
                    .enumerate_sign_vectors(n, signed, |_| {})
                    .map_err(|e| e.to_string())?;
                let expected = binomial(n as i64, (n + m) / 2);
                ensure(count == expected, || {
                    format!("N={n} M={signed}: enumerated {count}, expected {expected}")
                })?;
            }
        }
    }
    Ok(())
}

fn reductions() -> Check {
    for p in 1..=6 {
        for n in 1..=20u64 {
            let full = best_constant_2p_power(&params(n, n as i64, p));
            let expected = ExactRational::from_integer(
                BigInt::from(2u8).pow(n as u32) * BigInt::from(n).pow(p as u32),
            );
            ensure(full == expected && full_sum_case(n, p) == expected, || {
                format!("full sum N={n} p={p}: {full} vs {expected}")
            })?;
        }
        for n in (2..=20u64).step_by(2) {
            let exact = best_constant_2p_power(&params(n, 0, p));
            let closed = balanced_closed_form(n, p).map_err(|e| e.to_string())?;
            ensure(exact == closed, || {
                format!("balanced N={n} p={p}: {exact} vs {closed}")
            })?;
        }
    }
    let a = best_constant_2p_power(&params(4, 0, 1));
    ensure(a.to_string() == "32/15", || format!("(4, 0, 1) gave {a}"))?;
    let b = best_constant_2p_power(&params(2, 2, 1));
    ensure(b.to_string() == "8", || format!("(2, 2, 1) gave {b}"))
}

fn gamma_machinery() -> Check {
    let lg = |x: f64| log_gamma(x).map_err(|e| e.to_string());
    for x in [0.5, 1.0, 2.5, 10.0, 100.0] {
        let r = lg(x + 1.0)? - lg(x)? - x.ln();
        ensure(r.abs() < 1e-9, || {
            format!("recurrence at {x}: residual {r:e}")
        })?;
    }
    let pi = std::f64::consts::PI;
    for x in [1.0, 2.5, 50.0] {
        let rhs = -0.5 * pi.ln() + (2.0 * x - 1.0) * 2f64.ln() + lg(x)? + lg(x + 0.5)?;
        let r = lg(2.0 * x)? - rhs;
        ensure(r.abs() < 1e-9, || {
            format!("duplication at {x}: residual {r:e}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let num: i64 = rng.random_range(-(1i64 << 62)..(1i64 << 62));
        let den: u64 = rng.random_range(1..u64::MAX);
        if num == 0 {
            continue;
        }
        let v = ExactRational::new(BigInt::from(num), BigInt::from(den));
        let back = exact_to_log(&v).ln_magnitude().unwrap_or(f64::NAN).exp();
        let exact = num.unsigned_abs() as f64 / den as f64;
        let rel = (back - exact).abs() / exact;
        ensure(rel < 1e-10, || {
            format!("round trip of {v}: relative error {rel:e}")
        })?;
    }
    Ok(())
}

fn convergence() -> Check {
    let grid = [50, 500, 5000];
    let mut regimes = vec![SweepRegime::Balanced];
    regimes.extend([1, 2, 5].map(SweepRegime::FixedM));
    regimes.extend([2.0, 3.0].map(SweepRegime::Alpha));
    regimes.extend([0.25, 0.5].map(SweepRegime::Beta));
    for regime in regimes {
        for p in [2, 3] {
            let report = convergence_report(regime, &grid, p).map_err(|e| e.to_string())?;
            let devs: Vec<f64> = report.evaluated().filter_map(|r| r.deviation()).collect();
            let label = format!("{} {:?} p={p}", regime.name(), regime);
            ensure(devs.len() == grid.len(), || {
                format!("{label}: only {} rows evaluated", devs.len())
            })?;
            let (first, last) = (devs[0], devs[devs.len() - 1]);
            ensure(last < first && last < 0.05, || {
                format!("{label}: |r-1| {first:.4} at smallest, {last:.4} at largest")
            })?;
        }
    }
    Ok(())
}

fn orderings() -> Check {
    for p in 1..=5 {
        for n in (2..=200u64).step_by(2) {
            let bound = balanced_upper_bound(n, p).map_err(|e| e.to_string())?;
            let exact = best_constant_2p_power(&params(n, 0, p));
            ensure(bound.finite >= exact, || {
                format!("balanced N={n} p={p}: {} < {exact}", bound.finite)
            })?;
        }
    }
    for n in [50, 500] {
        for alpha in [2.0, 3.0] {
            for p in [2, 3] {
                let upper = alpha_upper_bound(n, alpha, p).map_err(|e| e.to_string())?;
                let asym = alpha_asymptotic(n, alpha, p).map_err(|e| e.to_string())?;
                ensure(upper.value >= asym.value, || {
                    format!(
                        "alpha n={n} a={alpha} p={p}: {} < {}",
                        upper.value, asym.value
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn probe_regression() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_khintchine"))
            .args([
                "verify", "--n", "2", "--m", "0", "--p", "1", "--trials", "0",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    ensure(first.status.success(), || {
        format!("exit status {}", first.status)
    })?;
    ensure(first.stdout == second.stdout, || {
        "output differs between runs".into()
    })?;
    let text = String::from_utf8(first.stdout).map_err(|e| e.to_string())?;
    let hit = text.lines().any(|line| {
        let v: serde_json::Value = serde_json::from_str(line).unwrap_or_default();
        v["kind"] == "probe_vector"
            && v["extras"]["coefficients"] == serde_json::json!(["1", "-1"])
            && v["extras"]["ratio"] == "3/2"
    });
    ensure(hit, || {
        format!("no (1, -1) record with ratio 3/2 in:\n{text}")
    })
}

fn cross_parameterization() -> Check {
    let a = alpha_asymptotic(100, 3.0, 2).map_err(|e| e.to_string())?;
    let b = beta_asymptotic(400, 0.5, 2).map_err(|e| e.to_string())?;
    let r = a.value.ratio_to(&b.value);
    ensure((r - 1.0).abs() < 0.01, || format!("ratio {r}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("composition parity identity", composition_identity),
        ("conditioning probability", conditioning_count),
        ("special-case reductions", reductions),
        ("gamma and log machinery", gamma_machinery),
        ("asymptotic convergence", convergence),
        ("upper-bound orderings", orderings),
        ("probe regression", probe_regression),
        ("cross-parameterization", cross_parameterization),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
