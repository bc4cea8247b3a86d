//! Large-`N` behaviour of the constant, evaluated in log space.
//!
//! Each estimate is a leading-order expansion valid as `N` (or `n`) grows
//! with `p` fixed. Exponential factors such as `2^N` and `alpha^{alpha n}`
//! are kept as logarithms; only the short sums over `m = 0..=p` are
//! combined, via log-sum-exp.
//!
//! The expansions are stated for `p >= 2`; `p = 1` is accepted everywhere
//! and simply evaluates the same expressions.

mod convergence;
mod gamma;

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::Serialize;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::formulas::{to_rational, ExactRational, Parameters};
pub use crate::log_value::{exact_to_log, LogValue};

pub use convergence::{convergence_report, ConvergenceReport, ConvergenceRow, SweepRegime};
pub use gamma::{ln_factorial, log_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BalancedUpper,
    FixedM,
    UnitM,
    ProportionalAlpha,
    ProportionalAlphaUpper,
    ProportionalBeta,
}

impl Regime {
    pub const ALL: [Regime; 6] = [
        Regime::BalancedUpper,
        Regime::FixedM,
        Regime::UnitM,
        Regime::ProportionalAlpha,
        Regime::ProportionalAlphaUpper,
        Regime::ProportionalBeta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::BalancedUpper => "balanced_upper",
            Regime::FixedM => "fixed_m",
            Regime::UnitM => "unit_m",
            Regime::ProportionalAlpha => "proportional_alpha",
            Regime::ProportionalAlphaUpper => "proportional_alpha_upper",
            Regime::ProportionalBeta => "proportional_beta",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown regime `{s}`")))
    }
}

/// Inputs echoed alongside an estimate. `n` is the sample size `N`;
/// `little_n` is the minority count of the proportional regime.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RegimeInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub little_n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub p: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub regime: Regime,
    pub inputs: RegimeInputs,
    pub value: LogValue,
}

impl AsymptoticEstimate {
    /// The integer `(N, M, p)` whose exact constant this estimate
    /// approximates, snapped to matching parity where the inputs are real.
    pub fn counterpart(&self) -> Option<Parameters> {
        let i = &self.inputs;
        match self.regime {
            Regime::BalancedUpper => Parameters::new(i.n?, 0, i.p).ok(),
            Regime::FixedM => Parameters::new(i.n?, i.m? as i64, i.p).ok(),
            Regime::UnitM => Parameters::new(i.n?, 1, i.p).ok(),
            Regime::ProportionalAlpha | Regime::ProportionalAlphaUpper => {
                snap_alpha(i.little_n?, i.alpha?, i.p).ok()
            }
            Regime::ProportionalBeta => snap_beta(i.n?, i.beta?, i.p).ok(),
        }
    }
}

/// Both sides of the balanced bound: the finite-`N` upper bound (exact) and
/// its large-`N` form.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedUpperBound {
    pub finite: ExactRational,
    pub finite_log: LogValue,
    pub limiting: AsymptoticEstimate,
}

fn check_p(p: u64) -> Result<()> {
    if p == 0 {
        return Err(Error::ZeroMoment);
    }
    Ok(())
}

fn ln_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln((2p)! / 2^p)`
fn ln_gaussian_numerator(p: u64) -> f64 {
    ln_factorial(2 * p) - p as f64 * LN_2
}

/// `e^{-p/N} sqrt(pi N / 2) (2p)!/(2^p p!)`, shared by the balanced limit and
/// the `M = 1` expansion.
fn ln_unit_form(n: u64, p: u64) -> f64 {
    let n = n as f64;
    -(p as f64) / n + 0.5 * (PI * n / 2.0).ln() + ln_gaussian_numerator(p) - ln_factorial(p)
}

/// Balanced case (`M = 0`, `N` even):
/// `C <= N^p/(N+1)^p * 2^N ((N/2)!)^2 / N! * (2p)!/(2^p p!)`, which behaves
/// like `e^{-p/N} sqrt(pi N / 2) (2p)!/(2^p p!)`.
pub fn balanced_upper_bound(n: u64, p: u64) -> Result<BalancedUpperBound> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "balanced regime needs an even N >= 2, got {n}"
        )));
    }
    check_p(p)?;
    let half = factorial(n / 2);
    let num =
        BigUint::from(n).pow(p) * (BigUint::from(1u8) << n) * &half * &half * factorial(2 * p);
    let den = BigUint::from(n + 1).pow(p) * factorial(n) * (BigUint::from(1u8) << p) * factorial(p);
    let finite = to_rational(num, den);
    let finite_log = exact_to_log(&finite);
    Ok(BalancedUpperBound {
        finite,
        finite_log,
        limiting: AsymptoticEstimate {
            regime: Regime::BalancedUpper,
            inputs: RegimeInputs {
                n: Some(n),
                p,
                ..Default::default()
            },
            value: LogValue::from_ln(ln_unit_form(n, p)),
        },
    })
}

/// Fixed `M` with `0 < M < N`:
/// `sqrt(pi (N^2 - M^2) / (2N)) e^{-Mp/N} / (M-1)! * (2p)!/2^p
///  * sum_m (2m+M-1)! / ((p-m)! (2m)!) * (2/(N-M))^m`.
///
/// Parity of `N - M` is not enforced: the expression is defined for every
/// real pair and only the exact counterpart needs it.
pub fn fixed_m_asymptotic(n: u64, m: u64, p: u64) -> Result<AsymptoticEstimate> {
    check_p(p)?;
    if m == 0 {
        return Err(Error::Domain(
            "fixed_m needs M >= 1; M = 0 is the balanced regime".into(),
        ));
    }
    if m >= n {
        return Err(Error::Domain(format!(
            "fixed_m needs M < N (got M = {m}, N = {n}); M = N has the exact value 2^N N^p"
        )));
    }
    let (nf, mf) = (n as f64, m as f64);
    let ln_step = (2.0 / (nf - mf)).ln();
    let ln_sum = ln_sum_exp((0..=p).map(|k| {
        ln_factorial(2 * k + m - 1) - ln_factorial(p - k) - ln_factorial(2 * k) + k as f64 * ln_step
    }));
    let ln = 0.5 * (PI * (nf * nf - mf * mf) / (2.0 * nf)).ln()
        - mf * p as f64 / nf
        - ln_factorial(m - 1)
        + ln_gaussian_numerator(p)
        + ln_sum;
    Ok(AsymptoticEstimate {
        regime: Regime::FixedM,
        inputs: RegimeInputs {
            n: Some(n),
            m: Some(m),
            p,
            ..Default::default()
        },
        value: LogValue::from_ln(ln),
    })
}

/// `M = 1`: `e^{-p/N} sqrt(pi N / 2) (2p)!/(2^p p!)`.
pub fn unit_m_asymptotic(n: u64, p: u64) -> Result<AsymptoticEstimate> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok(AsymptoticEstimate {
        regime: Regime::UnitM,
        inputs: RegimeInputs {
            n: Some(n),
            p,
            ..Default::default()
        },
        value: LogValue::from_ln(ln_unit_form(n, p)),
    })
}

fn check_alpha(alpha: f64, allow_one: bool) -> Result<()> {
    let ok = alpha.is_finite() && (alpha > 1.0 || (allow_one && alpha == 1.0));
    if !ok {
        let need = if allow_one { ">= 1" } else { "> 1" };
        return Err(Error::Domain(format!(
            "alpha must be finite and {need}, got {alpha}"
        )));
    }
    Ok(())
}

/// `ln( sqrt(2 pi n alpha/(alpha+1)) alpha^{alpha n} 2^{(alpha+1)n} / (alpha+1)^{(alpha+1)n} )`
fn ln_alpha_prefix(n: f64, alpha: f64) -> f64 {
    0.5 * (2.0 * PI * n * alpha / (alpha + 1.0)).ln()
        + alpha * n * alpha.ln()
        + (alpha + 1.0) * n * (LN_2 - (alpha + 1.0).ln())
}

fn alpha_inputs(n: u64, alpha: f64, p: u64) -> RegimeInputs {
    RegimeInputs {
        little_n: Some(n),
        alpha: Some(alpha),
        p,
        ..Default::default()
    }
}

/// `n` minority signs and `alpha n` majority signs (`N = (alpha+1) n`,
/// `M = (alpha-1) n`):
/// `prefix * (2p)!/(alpha+1)^p * sum_m (alpha-1)^{2m} n^m / ((p-m)! (2m)!)`.
pub fn alpha_asymptotic(n: u64, alpha: f64, p: u64) -> Result<AsymptoticEstimate> {
    check_p(p)?;
    check_alpha(alpha, false)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let nf = n as f64;
    let ln_step = 2.0 * (alpha - 1.0).ln() + nf.ln();
    let ln_sum =
        ln_sum_exp((0..=p).map(|k| k as f64 * ln_step - ln_factorial(p - k) - ln_factorial(2 * k)));
    let ln =
        ln_alpha_prefix(nf, alpha) + ln_factorial(2 * p) - p as f64 * (alpha + 1.0).ln() + ln_sum;
    Ok(AsymptoticEstimate {
        regime: Regime::ProportionalAlpha,
        inputs: alpha_inputs(n, alpha, p),
        value: LogValue::from_ln(ln),
    })
}

/// Leading-order upper bound
/// `prefix * (alpha-1)^{2p} n^p / (p+1)^p * (2p)! / ((alpha+1)^p p!)`.
pub fn alpha_upper_bound(n: u64, alpha: f64, p: u64) -> Result<AsymptoticEstimate> {
    check_p(p)?;
    check_alpha(alpha, false)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let (nf, pf) = (n as f64, p as f64);
    let ln = ln_alpha_prefix(nf, alpha) + 2.0 * pf * (alpha - 1.0).ln() + pf * nf.ln()
        - pf * (pf + 1.0).ln()
        + ln_factorial(2 * p)
        - pf * (alpha + 1.0).ln()
        - ln_factorial(p);
    Ok(AsymptoticEstimate {
        regime: Regime::ProportionalAlphaUpper,
        inputs: alpha_inputs(n, alpha, p),
        value: LogValue::from_ln(ln),
    })
}

/// The bound before its leading-order simplification,
/// `prefix * (2p)!/(alpha+1)^p * sum_m C(p+m, 2m) (alpha-1)^{2m} n^m / (p! (p+1)^m)`.
/// Defined at `alpha = 1`, where it equals `sqrt(pi n) (2p)!/(2^p p!)`.
pub fn alpha_upper_bound_summed(n: u64, alpha: f64, p: u64) -> Result<AsymptoticEstimate> {
    check_p(p)?;
    check_alpha(alpha, true)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let (nf, pf) = (n as f64, p as f64);
    let ln_sum = ln_sum_exp((0..=p).map(|k| {
        if k == 0 {
            return 0.0;
        }
        let kf = k as f64;
        ln_factorial(p + k) - ln_factorial(2 * k) - ln_factorial(p - k)
            + kf * (2.0 * (alpha - 1.0).ln() + nf.ln() - (pf + 1.0).ln())
    })) - ln_factorial(p);
    let ln = ln_alpha_prefix(nf, alpha) + ln_factorial(2 * p) - pf * (alpha + 1.0).ln() + ln_sum;
    Ok(AsymptoticEstimate {
        regime: Regime::ProportionalAlphaUpper,
        inputs: alpha_inputs(n, alpha, p),
        value: LogValue::from_ln(ln),
    })
}

/// `M = beta N`:
/// `sqrt(pi N / 2) (1-beta^2)^{(N+1)/2} ((1+beta)/(1-beta))^{beta N / 2}
///  * (1-beta)^p (2p)!/2^p * sum_m 2^m beta^{2m} N^m / ((1-beta)^m (p-m)! (2m)!)`.
pub fn beta_asymptotic(n: u64, beta: f64, p: u64) -> Result<AsymptoticEstimate> {
    check_p(p)?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!(
            "beta must lie in (0, 1), got {beta}"
        )));
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let nf = n as f64;
    let ln_one_minus = (1.0 - beta).ln();
    let ln_step = LN_2 + 2.0 * beta.ln() + nf.ln() - ln_one_minus;
    let ln_sum =
        ln_sum_exp((0..=p).map(|k| k as f64 * ln_step - ln_factorial(p - k) - ln_factorial(2 * k)));
    let ln = 0.5 * (PI * nf / 2.0).ln()
        + 0.5 * (nf + 1.0) * (1.0 - beta * beta).ln()
        + 0.5 * beta * nf * ((1.0 + beta).ln() - ln_one_minus)
        + p as f64 * ln_one_minus
        + ln_gaussian_numerator(p)
        + ln_sum;
    Ok(AsymptoticEstimate {
        regime: Regime::ProportionalBeta,
        inputs: RegimeInputs {
            n: Some(n),
            beta: Some(beta),
            p,
            ..Default::default()
        },
        value: LogValue::from_ln(ln),
    })
}

/// Nearest `M` in `[0, N]` to `target` with `N - M` even; ties go to the
/// smaller `M`.
fn snap_sum(n: u64, target: f64) -> i64 {
    let n = n as i64;
    let clamp = |m: i64| m.clamp(0, n);
    let m0 = clamp(target.round() as i64);
    if (n - m0) % 2 == 0 {
        return m0;
    }
    let (lo, hi) = (m0 - 1, m0 + 1);
    let pick = if lo < 0 {
        hi
    } else if hi > n || (target - lo as f64).abs() <= (hi as f64 - target).abs() {
        lo
    } else {
        hi
    };
    clamp(pick)
}

/// `N = round((alpha+1) n)` and `M` nearest to `(alpha-1) n` with matching
/// parity.
pub fn snap_alpha(n: u64, alpha: f64, p: u64) -> Result<Parameters> {
    check_alpha(alpha, true)?;
    let total = ((alpha + 1.0) * n as f64).round() as u64;
    Parameters::new(total, snap_sum(total, (alpha - 1.0) * n as f64), p)
}

/// `M` nearest to `beta N` with matching parity.
pub fn snap_beta(n: u64, beta: f64, p: u64) -> Result<Parameters> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!(
            "beta must lie in [0, 1], got {beta}"
        )));
    }
    Parameters::new(n, snap_sum(n, beta * n as f64), p)
}
