//! Closed forms for the conditioned Khintchine constant, all in exact
//! rationals.
//!
//! Throughout, `N` signs `eps_i` are conditioned on `sum eps_i = M`, the
//! moment order is `2p`, and `ell = (N - |M|) / 2` is the number of minority
//! signs. Negative `M` is handled by reflection: flipping every sign maps the
//! event `sum = M` onto `sum = -M`, so every quantity here depends on `|M|`
//! only.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::combinatorics::{binomial, factorial, weak_composition_count, BigCount};
use crate::error::{Error, Result};
use crate::log_value::{exact_to_log, LogValue};

/// Arbitrary-precision rational, always normalized with a positive
/// denominator.
pub type ExactRational = BigRational;

/// A validated `(N, M, p)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Parameters {
    n: u64,
    m: i64,
    p: u64,
}

impl Parameters {
    pub fn new(n: u64, m: i64, p: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if p == 0 {
            return Err(Error::ZeroMoment);
        }
        if m.unsigned_abs() > n {
            return Err(Error::SumOutOfRange { n, m });
        }
        if !(n - m.unsigned_abs()).is_multiple_of(2) {
            return Err(Error::ParityMismatch { n, m });
        }
        Ok(Parameters { n, m, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn m_abs(&self) -> u64 {
        self.m.unsigned_abs()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of minority signs, `(N - |M|) / 2`.
    pub fn ell(&self) -> u64 {
        (self.n - self.m_abs()) / 2
    }

    /// Number of majority signs, `(N + |M|) / 2`.
    pub fn majority(&self) -> u64 {
        (self.n + self.m_abs()) / 2
    }
}

pub(crate) fn to_rational(num: BigUint, den: BigUint) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn integer(v: BigUint) -> ExactRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// Total number of weak compositions of `2p` into `N` parts.
pub fn composition_total(params: &Parameters) -> BigCount {
    binomial((2 * params.p + params.n) as i64 - 1, 2 * params.p)
}

/// `T_E - T_O = sum_{m=0}^{p} W(p-m, ell) * W(2m, |M|)`, where `W(s, k)`
/// counts weak compositions of `s` into `k` parts.
pub fn t_e_minus_t_o(params: &Parameters) -> BigCount {
    let (p, ell, m_abs) = (params.p, params.ell(), params.m_abs());
    (0..=p)
        .map(|m| weak_composition_count(p - m, ell) * weak_composition_count(2 * m, m_abs))
        .sum()
}

pub fn p_dif(params: &Parameters) -> ExactRational {
    to_rational(t_e_minus_t_o(params), composition_total(params))
}

/// `P(sum of N signs = M) = C(N, (N+|M|)/2) / 2^N`; zero for an empty event.
pub fn prob_sum_equals(n: u64, m: i64) -> ExactRational {
    let m_abs = m.unsigned_abs();
    if m_abs > n || !(n - m_abs).is_multiple_of(2) {
        return ExactRational::default();
    }
    to_rational(binomial(n as i64, (n + m_abs) / 2), pow2(n))
}

pub fn expectation_product(params: &Parameters) -> ExactRational {
    let num = pow2(params.n) * t_e_minus_t_o(params);
    let den = binomial(params.n as i64, params.majority()) * composition_total(params);
    to_rational(num, den)
}

/// `C_{2p}^{2p} = N^p * E_M(prod eps_i^{p_i})`.
pub fn best_constant_2p_power(params: &Parameters) -> ExactRational {
    expectation_product(params) * integer(BigUint::from(params.n).pow(params.p))
}

/// `C_{2p} = (C_{2p}^{2p})^{1/(2p)}` in log space.
pub fn best_constant(params: &Parameters) -> LogValue {
    exact_to_log(&best_constant_2p_power(params)).root(2 * params.p)
}

/// `(2p)! / (2^p p!)`, the Gaussian moment `E g^{2p}`.
pub fn double_factorial_odd(p: u64) -> ExactRational {
    to_rational(factorial(2 * p), pow2(p) * factorial(p))
}

/// Balanced (`M = 0`) form
/// `(N/2)^{p+1} * sqrt(pi) Gamma(N/2) / Gamma(p + N/2 + 1/2) * (2p)!/(2^p p!)`.
///
/// With `h = N/2` and `q = p + h`, `Gamma(q + 1/2) = (2q)! sqrt(pi) / (4^q q!)`,
/// so the `sqrt(pi)` cancels and the value is rational.
pub fn balanced_closed_form(n: u64, p: u64) -> Result<ExactRational> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "balanced closed form needs a positive even N, got {n}"
        )));
    }
    if p == 0 {
        return Err(Error::ZeroMoment);
    }
    let h = n / 2;
    let q = p + h;
    let gamma_ratio = to_rational(
        factorial(h - 1) * pow2(2 * q) * factorial(q),
        factorial(2 * q),
    );
    let scale = integer(BigUint::from(h).pow(p + 1));
    Ok(scale * gamma_ratio * double_factorial_odd(p))
}

/// `M = N`: every sign is `+1` and `C_{2p}^{2p} = 2^N N^p`.
pub fn full_sum_case(n: u64, p: u64) -> ExactRational {
    integer(pow2(n) * BigUint::from(n).pow(p))
}
