use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sample size N must be at least 1")]
    EmptySample,

    #[error("moment index p must be at least 1 (the moment order is 2p)")]
    ZeroMoment,

    #[error("|M| = {m_abs} exceeds N = {n}", m_abs = .m.unsigned_abs())]
    SumOutOfRange { n: u64, m: i64 },

    #[error(
        "N = {n} and M = {m} have different parity; a sum of N signs has the parity of N, \
         so the conditioning event is empty"
    )]
    ParityMismatch { n: u64, m: i64 },

    #[error("{0}")]
    Domain(String),

    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },

    #[error("conditioning on null event: no sign vector of length {n} sums to {m}")]
    NullEvent { n: u64, m: i64 },

    #[error("coefficient vector has {got} entries but N = {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("coefficient vector is identically zero")]
    ZeroVector,
}

pub type Result<T> = std::result::Result<T, Error>;
