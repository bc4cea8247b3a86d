//! Best constants in the Khintchine inequality for Rademacher signs
//! conditioned on a fixed sum.
//!
//! * [`formulas`] evaluates the closed forms exactly.
//! * [`oracle`] recomputes the same quantities by exhaustive enumeration and
//!   probes the moment inequality on concrete coefficient vectors.
//! * [`asymptotics`] evaluates the large-`N` expansions in log space.
//! * [`cli`] drives all of the above from the `khintchine` binary.

pub mod asymptotics;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod formulas;
pub mod log_value;
pub mod oracle;

pub use error::{Error, Result};
pub use formulas::{ExactRational, Parameters};
pub use log_value::{exact_to_log, LogValue, Sign};
