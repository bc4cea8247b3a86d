//! Exact-versus-asymptotic comparison along a grid.

use std::fmt;

use rayon::prelude::*;

use super::{
    alpha_asymptotic, alpha_upper_bound, balanced_upper_bound, beta_asymptotic, fixed_m_asymptotic,
    snap_alpha, snap_beta, unit_m_asymptotic,
};
use crate::error::{Error, Result};
use crate::formulas::{best_constant_2p_power, Parameters};
use crate::log_value::{exact_to_log, LogValue};

/// A regime together with the parameter that stays fixed along the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepRegime {
    /// Grid over even `N`, compared with the balanced limiting form.
    Balanced,
    /// Grid over `N` with this fixed `M`.
    FixedM(u64),
    /// Grid over odd `N` with `M = 1`.
    UnitM,
    /// Grid over the minority count `n`.
    Alpha(f64),
    /// Grid over `n`, compared with the leading-order upper bound.
    AlphaUpper(f64),
    /// Grid over `N` with `M` nearest `beta N`.
    Beta(f64),
    /// `M = N` has no expansion; the report is always empty.
    FullSum,
}

impl SweepRegime {
    pub fn name(&self) -> &'static str {
        match self {
            SweepRegime::Balanced => "balanced_upper",
            SweepRegime::FixedM(_) => "fixed_m",
            SweepRegime::UnitM => "unit_m",
            SweepRegime::Alpha(_) => "proportional_alpha",
            SweepRegime::AlphaUpper(_) => "proportional_alpha_upper",
            SweepRegime::Beta(_) => "proportional_beta",
            SweepRegime::FullSum => "full_sum",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SweepRegime::FixedM(0) => Err(Error::Domain(
                "fixed_m needs M >= 1; M = 0 is the balanced regime".into(),
            )),
            SweepRegime::Alpha(a) | SweepRegime::AlphaUpper(a) if !(a > 1.0 && a.is_finite()) => {
                Err(Error::Domain(format!(
                    "alpha must be finite and > 1, got {a}"
                )))
            }
            SweepRegime::Beta(b) if !(b > 0.0 && b < 1.0) => {
                Err(Error::Domain(format!("beta must lie in (0, 1), got {b}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SweepRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub grid: u64,
    /// The exact-side triple after parity snapping.
    pub params: Option<Parameters>,
    pub exact: Option<LogValue>,
    pub asymptotic: Option<LogValue>,
    /// `exact / asymptotic`
    pub ratio: Option<f64>,
    /// Whether `|ratio - 1|` shrank relative to the previous evaluated row.
    pub improving: Option<bool>,
    pub skipped: Option<String>,
}

impl ConvergenceRow {
    fn skipped(grid: u64, reason: impl Into<String>) -> Self {
        ConvergenceRow {
            grid,
            params: None,
            exact: None,
            asymptotic: None,
            ratio: None,
            improving: None,
            skipped: Some(reason.into()),
        }
    }

    pub fn deviation(&self) -> Option<f64> {
        self.ratio.map(|r| (r - 1.0).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub regime: SweepRegime,
    pub p: u64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// `|ratio - 1|` shrinks at every evaluated step.
    pub fn monotone(&self) -> bool {
        self.rows.iter().all(|r| r.improving != Some(false))
    }

    pub fn evaluated(&self) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(|r| r.ratio.is_some())
    }
}

fn even_up(n: u64) -> u64 {
    n + n % 2
}

fn odd_up(n: u64) -> u64 {
    n + (1 - n % 2)
}

fn evaluate(regime: SweepRegime, grid: u64, p: u64) -> Result<ConvergenceRow> {
    if grid == 0 {
        return Ok(ConvergenceRow::skipped(grid, "grid value must be positive"));
    }
    let (params, asymptotic) = match regime {
        SweepRegime::Balanced => {
            let n = even_up(grid);
            let bound = balanced_upper_bound(n, p)?;
            (Parameters::new(n, 0, p)?, bound.limiting.value)
        }
        SweepRegime::FixedM(m) => {
            let n = if (grid + m).is_multiple_of(2) {
                grid
            } else {
                grid + 1
            };
            if n <= m {
                return Ok(ConvergenceRow::skipped(grid, format!("M = {m} >= N = {n}")));
            }
            (
                Parameters::new(n, m as i64, p)?,
                fixed_m_asymptotic(n, m, p)?.value,
            )
        }
        SweepRegime::UnitM => {
            let n = odd_up(grid);
            if n <= 1 {
                return Ok(ConvergenceRow::skipped(grid, "M = 1 >= N = 1"));
            }
            (Parameters::new(n, 1, p)?, unit_m_asymptotic(n, p)?.value)
        }
        SweepRegime::Alpha(alpha) => (
            snap_alpha(grid, alpha, p)?,
            alpha_asymptotic(grid, alpha, p)?.value,
        ),
        SweepRegime::AlphaUpper(alpha) => (
            snap_alpha(grid, alpha, p)?,
            alpha_upper_bound(grid, alpha, p)?.value,
        ),
        SweepRegime::Beta(beta) => (
            snap_beta(grid, beta, p)?,
            beta_asymptotic(grid, beta, p)?.value,
        ),
        SweepRegime::FullSum => unreachable!("full-sum reports have no rows"),
    };
    let exact = exact_to_log(&best_constant_2p_power(&params));
    Ok(ConvergenceRow {
        grid,
        params: Some(params),
        exact: Some(exact),
        asymptotic: Some(asymptotic),
        ratio: Some(exact.ratio_to(&asymptotic)),
        improving: None,
        skipped: None,
    })
}

/// Evaluates every grid point (ascending, deduplicated) in parallel on the
/// current rayon pool; row order does not depend on the pool size.
pub fn convergence_report(regime: SweepRegime, grid: &[u64], p: u64) -> Result<ConvergenceReport> {
    if p == 0 {
        return Err(Error::ZeroMoment);
    }
    regime.validate()?;
    if regime == SweepRegime::FullSum {
        return Ok(ConvergenceReport {
            regime,
            p,
            rows: Vec::new(),
        });
    }
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();

    let mut rows = grid
        .par_iter()
        .map(|&g| evaluate(regime, g, p))
        .collect::<Result<Vec<_>>>()?;

    let mut previous: Option<f64> = None;
    for row in &mut rows {
        if let Some(dev) = row.deviation() {
            row.improving = previous.map(|prev| dev < prev);
            previous = Some(dev);
        }
    }
    Ok(ConvergenceReport { regime, p, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_ratios_pinned() {
        // independent high-precision evaluation of exact / limiting form
        let expected = [
            0.926_763_102_096_209_3,
            0.991_410_939_349_078_8,
            0.999_126_630_438_806_8,
        ];
        let report = convergence_report(SweepRegime::Balanced, &[2000, 20, 200], 2).unwrap();
        let grid: Vec<u64> = report.rows.iter().map(|r| r.grid).collect();
        assert_eq!(grid, vec![20, 200, 2000]);
        for (row, want) in report.rows.iter().zip(expected) {
            assert!((row.ratio.unwrap() - want).abs() < 1e-10, "{row:?}");
        }
        assert!(report.monotone());
        assert_eq!(report.rows[0].improving, None);
    }

    #[test]
    fn unit_m_matches_fixed_m_one_exact_side() {
        let unit = convergence_report(SweepRegime::UnitM, &[51, 501], 2).unwrap();
        let fixed = convergence_report(SweepRegime::FixedM(1), &[51, 501], 2).unwrap();
        for (u, f) in unit.rows.iter().zip(&fixed.rows) {
            assert_eq!(u.params, f.params);
            assert_eq!(u.exact, f.exact);
        }
    }

    #[test]
    fn full_sum_is_empty() {
        let report = convergence_report(SweepRegime::FullSum, &[10, 100], 2).unwrap();
        assert!(report.rows.is_empty());
    }

    #[test]
    fn fixed_m_skips_small_n() {
        let report = convergence_report(SweepRegime::FixedM(5), &[3, 5, 51], 2).unwrap();
        assert!(report.rows[0].skipped.is_some());
        assert!(report.rows[1].skipped.is_some());
        assert_eq!(
            report.rows[2].params,
            Some(Parameters::new(51, 5, 2).unwrap())
        );
        assert_eq!(report.rows[2].improving, None);
    }

    #[test]
    fn parity_snapping_of_grid() {
        let report = convergence_report(SweepRegime::FixedM(2), &[51], 2).unwrap();
        assert_eq!(report.rows[0].params.unwrap().n(), 52);
        let report = convergence_report(SweepRegime::Balanced, &[51], 2).unwrap();
        assert_eq!(report.rows[0].params.unwrap().n(), 52);
    }

    #[test]
    fn invalid_regimes() {
        assert!(convergence_report(SweepRegime::FixedM(0), &[10], 2).is_err());
        assert!(convergence_report(SweepRegime::Alpha(1.0), &[10], 2).is_err());
        assert!(convergence_report(SweepRegime::Beta(1.5), &[10], 2).is_err());
        assert!(convergence_report(SweepRegime::Balanced, &[10], 0).is_err());
    }
}
