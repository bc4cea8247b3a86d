//! Brute-force ground truth.
//!
//! Everything here is exact and exhaustive: conditioned sign vectors are
//! enumerated one by one, weak compositions are listed and classified, and
//! moments are averaged in rationals. Enumeration sizes are checked against
//! a cap before any work starts.

mod compositions;
mod probe;
mod sign_vectors;

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial, BigCount};
use crate::error::{Error, Result};
use crate::formulas::{composition_total, ExactRational, Parameters};

pub use compositions::WeakCompositions;
pub use probe::{
    corner_vectors, random_vectors, CoefficientVector, ProbeRecord, ProbeReport, ProbeStrategy,
    ProbeSummary, VectorSource,
};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Parity tallies of the weak compositions of `2p` into `N` parts, split by
/// the parity of the first `ell` parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionTally {
    pub t_even: BigCount,
    pub t_odd: BigCount,
    pub total: BigCount,
}

impl CompositionTally {
    pub fn difference(&self) -> BigInt {
        BigInt::from(self.t_even.clone()) - BigInt::from(self.t_odd.clone())
    }
}

/// Exhaustive evaluator with an enumeration size limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    cap: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

fn event_is_empty(n: u64, m: i64) -> bool {
    m.unsigned_abs() > n || !(n - m.unsigned_abs()).is_multiple_of(2)
}

impl Oracle {
    pub fn with_cap(cap: u64) -> Self {
        Oracle { cap }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn check_cap(&self, count: &BigUint) -> Result<()> {
        if *count > BigUint::from(self.cap) {
            return Err(Error::CapExceeded {
                count: count.clone(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Visits each `{-1,+1}^N` vector summing to `M` and returns how many
    /// were visited (zero for an empty event).
    pub fn enumerate_sign_vectors(
        &self,
        n: u64,
        m: i64,
        mut visitor: impl FnMut(&[i8]),
    ) -> Result<BigCount> {
        if event_is_empty(n, m) {
            return Ok(BigCount::zero());
        }
        let positives = ((n as i64 + m) / 2) as u64;
        let count = binomial(n as i64, positives);
        self.check_cap(&count)?;
        sign_vectors::visit(n as usize, positives as usize, &mut visitor);
        Ok(count)
    }

    /// Exact `E[(sum a_i eps_i)^{2p} | sum eps_i = M]`.
    pub fn conditional_moment(
        &self,
        a: &CoefficientVector,
        params: &Parameters,
    ) -> Result<ExactRational> {
        let n = params.n();
        if a.len() as u64 != n {
            return Err(Error::LengthMismatch {
                expected: n as usize,
                got: a.len(),
            });
        }
        // Scale to integers so the inner loop never touches rationals.
        let scale = a
            .entries()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = a
            .entries()
            .iter()
            .map(|x| x.numer() * (&scale / x.denom()))
            .collect();

        let small: Option<Vec<i64>> = ints.iter().map(|x| x.to_i64()).collect();
        let abs_total: BigInt = ints.iter().map(|x| x.abs()).sum();
        let fits = abs_total <= BigInt::from(i64::MAX);

        let exponent = 2 * params.p() as u32;
        let (count, power_sum) = match small {
            Some(b) if fits => {
                let mut histogram: HashMap<i64, u64> = HashMap::new();
                let count = self.enumerate_sign_vectors(n, params.m(), |signs| {
                    let s: i64 = signs.iter().zip(&b).map(|(&e, &x)| e as i64 * x).sum();
                    *histogram.entry(s).or_default() += 1;
                })?;
                let sum: BigInt = histogram
                    .into_iter()
                    .map(|(s, c)| BigInt::from(s).pow(exponent) * c)
                    .sum();
                (count, sum)
            }
            _ => {
                let mut histogram: BTreeMap<BigInt, u64> = BTreeMap::new();
                let count = self.enumerate_sign_vectors(n, params.m(), |signs| {
                    let s: BigInt = signs
                        .iter()
                        .zip(&ints)
                        .map(|(&e, x)| if e > 0 { x.clone() } else { -x })
                        .sum();
                    *histogram.entry(s).or_default() += 1;
                })?;
                let sum: BigInt = histogram
                    .into_iter()
                    .map(|(s, c)| s.pow(exponent) * c)
                    .sum();
                (count, sum)
            }
        };
        if count.is_zero() {
            return Err(Error::NullEvent { n, m: params.m() });
        }
        let den = BigInt::from(count) * scale.pow(exponent);
        Ok(BigRational::new(power_sum, den))
    }

    /// Exact `E[prod eps_i^{p_i} | sum eps_i = M]` for one exponent vector,
    /// by enumeration.
    pub fn product_expectation(&self, exponents: &[u64], n: u64, m: i64) -> Result<ExactRational> {
        if exponents.len() as u64 != n {
            return Err(Error::LengthMismatch {
                expected: n as usize,
                got: exponents.len(),
            });
        }
        let total: u64 = exponents.iter().sum();
        if total == 0 || !total.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "exponents must sum to 2p with p >= 1, got {total}"
            )));
        }
        if event_is_empty(n, m) {
            return Err(Error::NullEvent { n, m });
        }
        let odd: Vec<usize> = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e % 2 == 1)
            .map(|(i, _)| i)
            .collect();
        let mut signed_sum = 0i64;
        let count = self.enumerate_sign_vectors(n, m, |signs| {
            signed_sum += odd.iter().map(|&i| signs[i] as i64).product::<i64>();
        })?;
        Ok(BigRational::new(signed_sum.into(), BigInt::from(count)))
    }

    /// Lists every weak composition of `2p` into `N` parts and classifies it
    /// by the parity of `p_1 + ... + p_ell`. Shards on the first part.
    pub fn tally_compositions(&self, params: &Parameters) -> Result<CompositionTally> {
        let total = composition_total(params);
        self.check_cap(&total)?;

        let two_p = 2 * params.p();
        let n = params.n() as usize;
        let ell = params.ell() as usize;
        let (t_even, t_odd) = (0..=two_p)
            .into_par_iter()
            .map(|first| {
                let (mut even, mut odd) = (0u64, 0u64);
                compositions::visit(two_p - first, n - 1, &mut |rest| {
                    let head = if ell == 0 {
                        0
                    } else {
                        first + rest[..ell - 1].iter().sum::<u64>()
                    };
                    if head % 2 == 0 {
                        even += 1;
                    } else {
                        odd += 1;
                    }
                });
                (even, odd)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

        debug_assert_eq!(BigUint::from(t_even + t_odd), total);
        Ok(CompositionTally {
            t_even: t_even.into(),
            t_odd: t_odd.into(),
            total,
        })
    }

    /// Exact moment, bound and ratio for every vector of the strategy.
    pub fn inequality_probe(
        &self,
        params: &Parameters,
        strategy: &ProbeStrategy,
    ) -> Result<ProbeReport> {
        probe::run(self, params, strategy)
    }
}
