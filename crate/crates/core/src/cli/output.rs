//! Output records and their JSON-lines / CSV encodings.

use std::io::Write;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed, Zero};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::formulas::ExactRational;
use crate::log_value::{exact_to_log, LogValue};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const SIGNIFICANT_DIGITS: u32 = 12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Newline-delimited JSON, one self-describing record per line.
    #[default]
    Json,
    /// CSV with a fixed header per subcommand.
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub kind: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_value: Option<LogValue>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub extras: Map<String, Value>,
}

impl OutputRecord {
    pub fn new(kind: &'static str, inputs: Map<String, Value>) -> Self {
        OutputRecord {
            kind,
            version: VERSION,
            seed: None,
            inputs,
            exact: None,
            decimal: None,
            log_value: None,
            extras: Map::new(),
        }
    }

    /// Sets `exact`, `decimal` and `log_value` from one rational.
    pub fn with_exact(mut self, v: &ExactRational) -> Self {
        self.exact = Some(rational_string(v));
        self.decimal = Some(decimal_string(v));
        self.log_value = Some(exact_to_log(v));
        self
    }

    pub fn with_log(mut self, v: LogValue) -> Self {
        self.log_value = Some(v);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn extra(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extras.insert(key.to_owned(), value.into());
        self
    }

    /// CSV cell for `column`; extras shadow inputs.
    fn cell(&self, column: &str) -> String {
        match column {
            "kind" => return self.kind.to_owned(),
            "version" => return self.version.to_owned(),
            "seed" => return self.seed.map(|s| s.to_string()).unwrap_or_default(),
            "exact" => return self.exact.clone().unwrap_or_default(),
            "decimal" => return self.decimal.clone().unwrap_or_default(),
            "sign" => {
                return self
                    .log_value
                    .map(|v| v.sign().as_i8().to_string())
                    .unwrap_or_default()
            }
            "ln_magnitude" => {
                return self
                    .log_value
                    .and_then(|v| v.ln_magnitude())
                    .map(|x| x.to_string())
                    .unwrap_or_default()
            }
            _ => {}
        }
        self.extras
            .get(column)
            .or_else(|| self.inputs.get(column))
            .map(value_cell)
            .unwrap_or_default()
    }
}

fn value_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(value_cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

/// `num/den` in lowest terms, or just `num` for integers.
pub fn rational_string(v: &ExactRational) -> String {
    v.to_string()
}

/// Rounded to 12 significant digits in scientific notation, trailing zeros
/// dropped: `32/15` gives `2.13333333333e0`, `8` gives `8e0`.
pub fn decimal_string(v: &ExactRational) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let num = v.numer().abs();
    let den = v.denom().clone();
    let ten = BigInt::from(10);
    let lower = ten.clone().pow(SIGNIFICANT_DIGITS - 1);
    let upper = ten.clone().pow(SIGNIFICANT_DIGITS);

    let ln = exact_to_log(v).ln_magnitude().unwrap_or(0.0);
    let mut exp10 = (ln / std::f64::consts::LN_10).floor() as i64;
    let digits = loop {
        let shift = SIGNIFICANT_DIGITS as i64 - 1 - exp10;
        let (n, d): (BigInt, BigInt) = if shift >= 0 {
            (&num * ten.clone().pow(shift as u32), den.clone())
        } else {
            (num.clone(), &den * ten.clone().pow((-shift) as u32))
        };
        // round half up
        let two = BigInt::from(2);
        let q = Integer::div_floor(&(&n * &two + &d), &(&d * &two));
        if q >= upper {
            exp10 += 1;
        } else if q < lower {
            exp10 -= 1;
        } else {
            break q.to_string();
        }
    };
    let (lead, rest) = digits.split_at(1);
    let rest = rest.trim_end_matches('0');
    let sign = if v.is_negative() { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{lead}e{exp10}")
    } else {
        format!("{sign}{lead}.{rest}e{exp10}")
    }
}

pub fn write_records(
    out: &mut dyn Write,
    format: Format,
    columns: &[&str],
    records: &[OutputRecord],
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(columns)?;
            for r in records.iter() {
                w.write_record(columns.iter().map(|c| r.cell(c)))?;
            }
            w.flush()?;
        }
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> ExactRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_string(&rat(32, 15)), "2.13333333333e0");
        assert_eq!(decimal_string(&rat(8, 1)), "8e0");
        assert_eq!(decimal_string(&rat(-3, 2)), "-1.5e0");
        assert_eq!(decimal_string(&rat(1, 3)), "3.33333333333e-1");
        assert_eq!(decimal_string(&rat(2, 3)), "6.66666666667e-1");
        assert_eq!(decimal_string(&rat(0, 3)), "0");
        assert_eq!(decimal_string(&rat(9_999_999_999_999, 10)), "1e12");
        assert_eq!(decimal_string(&rat(1, 1_000_000_007)), "9.99999993e-10");
        let huge = BigRational::from_integer(BigInt::from(10).pow(400u32) * 7);
        assert_eq!(decimal_string(&huge), "7e400");
    }

    #[test]
    fn rationals() {
        assert_eq!(rational_string(&rat(32, 15)), "32/15");
        assert_eq!(rational_string(&rat(16, 2)), "8");
        assert_eq!(rational_string(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn csv_cells() {
        let mut inputs = Map::new();
        inputs.insert("n".into(), 4.into());
        let r = OutputRecord::new("x", inputs)
            .with_exact(&rat(32, 15))
            .extra("coefficients", vec!["1", "-1"])
            .extra("flag", true);
        assert_eq!(r.cell("n"), "4");
        assert_eq!(r.cell("exact"), "32/15");
        assert_eq!(r.cell("sign"), "1");
        assert_eq!(r.cell("coefficients"), "1;-1");
        assert_eq!(r.cell("flag"), "true");
        assert_eq!(r.cell("missing"), "");
    }
}
