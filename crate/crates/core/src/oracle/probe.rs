//! Empirical check of `E_M (sum a_i eps_i)^{2p} <= C_{2p}^{2p} ||a||_2^{2p}`
//! on concrete coefficient vectors.
//!
//! Random vectors come from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`. Each entry draws a denominator
//! uniformly from `1..=64`, then a numerator uniformly from `-d..=d`; an
//! all-zero draw is discarded and the whole vector redrawn.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Oracle;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::formulas::{best_constant_2p_power, ExactRational, Parameters};

const MAX_DENOMINATOR: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector(Vec<ExactRational>);

impl CoefficientVector {
    pub fn new(entries: Vec<ExactRational>) -> Self {
        CoefficientVector(entries)
    }

    pub fn from_integers(entries: &[i64]) -> Self {
        CoefficientVector(
            entries
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    /// `e_i` (zero-based `i`).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self::from_integers(&v)
    }

    pub fn entries(&self) -> &[ExactRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn norm_squared(&self) -> ExactRational {
        self.0.iter().map(|x| x * x).sum()
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorSource {
    /// `e_{i+1}`
    Basis(usize),
    AllOnes,
    /// `(1, -1, 1, -1, ...)`
    Alternating,
    /// `(1, -1, 0, ..., 0)`
    Dipole,
    /// The `k`-th seeded random draw.
    Random(u64),
}

impl fmt::Display for VectorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorSource::Basis(i) => write!(f, "basis_e{}", i + 1),
            VectorSource::AllOnes => write!(f, "all_ones"),
            VectorSource::Alternating => write!(f, "alternating"),
            VectorSource::Dipole => write!(f, "dipole"),
            VectorSource::Random(k) => write!(f, "random_{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeStrategy {
    pub trials: u64,
    pub seed: u64,
}

impl ProbeStrategy {
    pub fn corners_only() -> Self {
        ProbeStrategy { trials: 0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub source: VectorSource,
    pub coefficients: CoefficientVector,
    pub exact_moment: ExactRational,
    pub bound: ExactRational,
    pub ratio: ExactRational,
}

impl ProbeRecord {
    pub fn is_violation(&self) -> bool {
        self.ratio > ExactRational::one()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSummary {
    pub max_ratio: ExactRational,
    /// Index into `ProbeReport::records` of the first record reaching `max_ratio`.
    pub argmax: usize,
    pub violation_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub params: Parameters,
    pub strategy: ProbeStrategy,
    pub records: Vec<ProbeRecord>,
    pub summary: ProbeSummary,
}

impl ProbeReport {
    pub fn argmax_vector(&self) -> &CoefficientVector {
        &self.records[self.summary.argmax].coefficients
    }
}

/// Basis vectors, all-ones, alternating and dipole, without duplicates.
pub fn corner_vectors(n: usize) -> Vec<(VectorSource, CoefficientVector)> {
    let mut out: Vec<(VectorSource, CoefficientVector)> = Vec::new();
    let mut push = |source, v: CoefficientVector| {
        if !out.iter().any(|(_, w)| *w == v) {
            out.push((source, v));
        }
    };
    for i in 0..n {
        push(VectorSource::Basis(i), CoefficientVector::basis(n, i));
    }
    push(
        VectorSource::AllOnes,
        CoefficientVector::from_integers(&vec![1; n]),
    );
    if n >= 2 {
        let alternating: Vec<i64> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        push(
            VectorSource::Alternating,
            CoefficientVector::from_integers(&alternating),
        );
        let mut dipole = vec![0; n];
        dipole[0] = 1;
        dipole[1] = -1;
        push(
            VectorSource::Dipole,
            CoefficientVector::from_integers(&dipole),
        );
    }
    out
}

pub fn random_vectors(n: usize, trials: u64, seed: u64) -> Vec<(VectorSource, CoefficientVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|k| loop {
            let v = CoefficientVector::new(
                (0..n)
                    .map(|_| {
                        let den = rng.random_range(1..=MAX_DENOMINATOR);
                        let num = rng.random_range(-den..=den);
                        BigRational::new(num.into(), den.into())
                    })
                    .collect(),
            );
            if !v.is_zero() {
                break (VectorSource::Random(k), v);
            }
        })
        .collect()
}

pub(super) fn run(
    oracle: &Oracle,
    params: &Parameters,
    strategy: &ProbeStrategy,
) -> Result<ProbeReport> {
    let n = params.n() as usize;
    // Fail before generating anything if a single moment is out of reach.
    oracle.check_cap(&binomial(params.n() as i64, params.majority()))?;

    let constant = best_constant_2p_power(params);
    let mut vectors = corner_vectors(n);
    vectors.extend(random_vectors(n, strategy.trials, strategy.seed));

    let records = vectors
        .into_par_iter()
        .map(|(source, coefficients)| {
            if coefficients.is_zero() {
                return Err(Error::ZeroVector);
            }
            let exact_moment = oracle.conditional_moment(&coefficients, params)?;
            let bound = &constant * coefficients.norm_squared().pow(params.p() as u32);
            let ratio = &exact_moment / &bound;
            Ok(ProbeRecord {
                source,
                coefficients,
                exact_moment,
                bound,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut argmax = 0;
    for (i, r) in records.iter().enumerate() {
        if r.ratio > records[argmax].ratio {
            argmax = i;
        }
    }
    let summary = ProbeSummary {
        max_ratio: records[argmax].ratio.clone(),
        argmax,
        violation_count: records.iter().filter(|r| r.is_violation()).count(),
    };
    Ok(ProbeReport {
        params: *params,
        strategy: *strategy,
        records,
        summary,
    })
}
