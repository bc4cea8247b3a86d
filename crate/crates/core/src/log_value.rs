//! Sign plus natural-log magnitude, for quantities like `2^N N^p` that leave
//! `f64` range long before the asymptotic regimes become accurate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::{BigUint, Sign as BigSign};
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::formulas::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i8() * rhs.as_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    sign: Sign,
    /// ln |v|; meaningless when `sign` is `Zero` and kept at `-inf` there.
    ln_magnitude: f64,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue {
            sign: Sign::Zero,
            ln_magnitude: f64::NEG_INFINITY,
        }
    }

    /// Positive value `e^ln`.
    pub fn from_ln(ln: f64) -> Self {
        LogValue {
            sign: Sign::Positive,
            ln_magnitude: ln,
        }
    }

    pub fn new(sign: Sign, ln_magnitude: f64) -> Self {
        if sign == Sign::Zero {
            Self::zero()
        } else {
            LogValue { sign, ln_magnitude }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else if x > 0.0 {
            Self::from_ln(x.ln())
        } else {
            LogValue::new(Sign::Negative, (-x).ln())
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// `None` for zero.
    pub fn ln_magnitude(&self) -> Option<f64> {
        (self.sign != Sign::Zero).then_some(self.ln_magnitude)
    }

    /// May overflow to `±inf` or underflow to `0`.
    pub fn to_f64(&self) -> f64 {
        self.sign.as_i8() as f64 * self.ln_magnitude.exp()
    }

    /// `|v|^(1/k)` with the sign kept; used to turn `C^{2p}` into `C`.
    pub fn root(&self, k: u64) -> Self {
        LogValue::new(self.sign, self.ln_magnitude / k as f64)
    }

    /// `self / other` as a plain float, for magnitudes of the same order.
    pub fn ratio_to(&self, other: &LogValue) -> f64 {
        (*self / *other).to_f64()
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.sign * rhs.sign, self.ln_magnitude + rhs.ln_magnitude)
    }
}

impl Div for LogValue {
    type Output = LogValue;

    fn div(self, rhs: LogValue) -> LogValue {
        assert!(rhs.sign != Sign::Zero, "division of LogValue by zero");
        LogValue::new(self.sign * rhs.sign, self.ln_magnitude - rhs.ln_magnitude)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Some(Ordering::Equal),
                Sign::Positive => self.ln_magnitude.partial_cmp(&other.ln_magnitude),
                Sign::Negative => other.ln_magnitude.partial_cmp(&self.ln_magnitude),
            },
            ord => Some(ord),
        }
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            Sign::Positive => write!(f, "exp({})", self.ln_magnitude),
            Sign::Negative => write!(f, "-exp({})", self.ln_magnitude),
        }
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("LogValue", 2)?;
        s.serialize_field("sign", &self.sign.as_i8())?;
        s.serialize_field("ln_magnitude", &self.ln_magnitude())?;
        s.end()
    }
}

/// ln of a big integer from its top 64 bits plus the discarded bit count, so
/// integers far beyond `f64` range are never converted directly.
pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 64 {
        let top = x.iter_u64_digits().next().unwrap_or(0);
        return (top as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn exact_to_log(v: &ExactRational) -> LogValue {
    let (sign, num) = v.numer().clone().into_parts();
    let sign = match sign {
        BigSign::NoSign => return LogValue::zero(),
        BigSign::Plus => Sign::Positive,
        BigSign::Minus => Sign::Negative,
    };
    let den = v.denom().magnitude();
    LogValue::new(sign, ln_biguint(&num) - ln_biguint(den))
}
