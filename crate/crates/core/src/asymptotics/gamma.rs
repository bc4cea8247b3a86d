use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `B_{2k} / (2k (2k-1))` for `k = 1..=8`, the Stirling series coefficients.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// The series is used from here up; the first omitted term is below 2e-21.
const SHIFT: f64 = 15.0;

/// `ln Gamma(x)` for `x > 0`.
///
/// Arguments below 15 are shifted up with `Gamma(x+1) = x Gamma(x)` and the
/// truncated Stirling series is evaluated there. Absolute error is around
/// 1e-15, so relative error is below 1e-12 except in the immediate
/// neighbourhood of the zeros at 1 and 2.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::Domain(format!(
            "log_gamma needs a finite x > 0, got {x}"
        )));
    }
    let mut z = x;
    let mut product = 1.0;
    while z < SHIFT {
        product *= z;
        z += 1.0;
    }
    let inv = z.recip();
    let inv_sq = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv_sq;
    }
    let stirling = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series;
    Ok(stirling - product.ln())
}

/// `ln n!`
pub fn ln_factorial(n: u64) -> f64 {
    log_gamma(n as f64 + 1.0).expect("n + 1 is positive")
}
