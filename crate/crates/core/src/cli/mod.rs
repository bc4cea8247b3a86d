//! The `khintchine` command line.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 enumeration cap
//! exceeded, 4 I/O failure.

mod grid;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::asymptotics::{
    alpha_asymptotic, alpha_upper_bound, alpha_upper_bound_summed, balanced_upper_bound,
    beta_asymptotic, convergence_report, fixed_m_asymptotic, unit_m_asymptotic, AsymptoticEstimate,
    SweepRegime,
};
use crate::error::Error;
use crate::formulas::{
    best_constant, best_constant_2p_power, expectation_product, p_dif, prob_sum_equals,
    t_e_minus_t_o, Parameters,
};
use crate::log_value::exact_to_log;
use crate::oracle::{Oracle, ProbeStrategy};

pub use grid::parse_grid;
pub use output::{decimal_string, rational_string, Format, OutputRecord, VERSION};

/// Exact counterparts of asymptotic estimates are only computed up to this N.
pub const EXACT_COUNTERPART_LIMIT: u64 = 200_000;

#[derive(Debug, Parser)]
#[command(
    name = "khintchine",
    version,
    about = "Best constants for conditioned Rademacher sums"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact constant and its ingredients for one (N, M, p).
    Exact(ExactArgs),
    /// Large-N expansions and bounds.
    Asymptotic(AsymptoticArgs),
    /// Exact moment-to-bound ratios on corner and seeded random vectors.
    Verify(VerifyArgs),
    /// Brute-force parity tally of weak compositions against the closed form.
    Tally(TallyArgs),
    /// Exact versus asymptotic along a grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TripleArgs {
    /// Sample size N.
    #[arg(long)]
    pub n: u64,
    /// Conditioned sum M; negative values are reflected.
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    /// Half the moment order (the moment is 2p).
    #[arg(long)]
    pub p: u64,
}

impl TripleArgs {
    fn params(&self) -> Result<Parameters, CliError> {
        Ok(Parameters::new(self.n, self.m, self.p)?)
    }

    fn inputs(&self) -> Map<String, Value> {
        obj(json!({"n": self.n, "m": self.m, "p": self.p}))
    }
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub triple: TripleArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum RegimeArg {
    BalancedUpper,
    FixedM,
    UnitM,
    ProportionalAlpha,
    ProportionalAlphaUpper,
    ProportionalBeta,
    /// M = N; only meaningful for `sweep`, where it yields no rows.
    FullSum,
}

#[derive(Debug, Args)]
pub struct AsymptoticArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// Sample size N.
    #[arg(long)]
    pub n: Option<u64>,
    /// Minority count n of the proportional-alpha regime.
    #[arg(long)]
    pub little_n: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub triple: TripleArgs,
    /// Seeded random vectors on top of the corner set.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TallyArgs {
    #[command(flatten)]
    pub triple: TripleArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// e.g. `n=20:2000:x10`, `n=50,500,5000`, `n=10:100:+10`
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub p: u64,
    /// Fixed M for `fixed_m`.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::CapExceeded { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 4,
        }
    }
}

fn io_error(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

const EXACT_COLUMNS: &[&str] = &[
    "kind",
    "version",
    "n",
    "m",
    "p",
    "exact",
    "decimal",
    "sign",
    "ln_magnitude",
];
const ASYMPTOTIC_COLUMNS: &[&str] = &[
    "kind",
    "version",
    "regime",
    "n",
    "little_n",
    "m",
    "alpha",
    "beta",
    "p",
    "exact",
    "decimal",
    "sign",
    "ln_magnitude",
    "exact_n",
    "exact_m",
    "exact_ln",
    "ratio",
];
const VERIFY_COLUMNS: &[&str] = &[
    "kind",
    "version",
    "seed",
    "trials",
    "n",
    "m",
    "p",
    "index",
    "source",
    "coefficients",
    "exact_moment",
    "bound",
    "ratio",
    "ratio_decimal",
    "violation",
    "violation_count",
];
const TALLY_COLUMNS: &[&str] = &[
    "kind",
    "version",
    "n",
    "m",
    "p",
    "t_even",
    "t_odd",
    "total",
    "closed_form",
    "match",
];
const SWEEP_COLUMNS: &[&str] = &[
    "kind",
    "version",
    "regime",
    "p",
    "alpha",
    "beta",
    "grid",
    "n",
    "m",
    "exact_ln",
    "asymptotic_ln",
    "ratio",
    "improving",
    "skipped",
];

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Exact(args) => {
            let records = cmd_exact(&args.triple)?;
            output::write_records(out, args.format, EXACT_COLUMNS, &records).map_err(io_error)
        }
        Command::Asymptotic(args) => {
            let records = cmd_asymptotic(args)?;
            output::write_records(out, args.format, ASYMPTOTIC_COLUMNS, &records).map_err(io_error)
        }
        Command::Verify(args) => {
            let records = cmd_verify(args)?;
            output::write_records(out, args.format, VERIFY_COLUMNS, &records).map_err(io_error)
        }
        Command::Tally(args) => {
            let records = cmd_tally(&args.triple)?;
            output::write_records(out, args.format, TALLY_COLUMNS, &records).map_err(io_error)
        }
        Command::Sweep(args) => {
            let records = cmd_sweep(args)?;
            match &args.out {
                Some(path) => {
                    let file = File::create(path).map_err(|e| {
                        CliError::Io(format!("cannot write {}: {e}", path.display()))
                    })?;
                    let mut w = BufWriter::new(file);
                    output::write_records(&mut w, args.format, SWEEP_COLUMNS, &records)
                        .map_err(io_error)
                }
                None => output::write_records(out, args.format, SWEEP_COLUMNS, &records)
                    .map_err(io_error),
            }
        }
    }
}

pub fn cmd_exact(triple: &TripleArgs) -> Result<Vec<OutputRecord>, CliError> {
    let params = triple.params()?;
    let inputs = triple.inputs();
    Ok(vec![
        OutputRecord::new("best_constant_2p_power", inputs.clone())
            .with_exact(&best_constant_2p_power(&params)),
        OutputRecord::new("best_constant", inputs.clone()).with_log(best_constant(&params)),
        OutputRecord::new("p_dif", inputs.clone()).with_exact(&p_dif(&params)),
        OutputRecord::new("expectation_product", inputs.clone())
            .with_exact(&expectation_product(&params)),
        OutputRecord::new("prob_sum_equals", inputs)
            .with_exact(&prob_sum_equals(params.n(), params.m())),
    ])
}

fn require<T>(value: Option<T>, regime: &str, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--regime {regime} requires --{flag}")))
}

fn require_m(m: Option<i64>, regime: &str) -> Result<u64, CliError> {
    Ok(require(m, regime, "m")?.unsigned_abs())
}

fn estimate_record(e: &AsymptoticEstimate) -> OutputRecord {
    let mut inputs = obj(serde_json::to_value(e.inputs).unwrap_or(Value::Null));
    inputs.insert("regime".into(), e.regime.as_str().into());
    let mut record = OutputRecord::new("asymptotic_estimate", inputs).with_log(e.value);
    if let Some(params) = e.counterpart().filter(|p| p.n() <= EXACT_COUNTERPART_LIMIT) {
        let exact = exact_to_log(&best_constant_2p_power(&params));
        record = record
            .extra("exact_n", params.n())
            .extra("exact_m", params.m())
            .extra("exact_ln", exact.ln_magnitude())
            .extra("ratio", exact.ratio_to(&e.value));
    }
    record
}

pub fn cmd_asymptotic(args: &AsymptoticArgs) -> Result<Vec<OutputRecord>, CliError> {
    let p = args.p;
    let records = match args.regime {
        RegimeArg::BalancedUpper => {
            let n = require(args.n, "balanced_upper", "n")?;
            let bound = balanced_upper_bound(n, p)?;
            let limiting = estimate_record(&bound.limiting);
            let mut finite = OutputRecord::new("balanced_finite_bound", limiting.inputs.clone())
                .with_exact(&bound.finite);
            if let Some(exact) = limiting.extras.get("exact_ln").and_then(Value::as_f64) {
                let ratio = (exact - bound.finite_log.ln_magnitude().unwrap_or(0.0)).exp();
                finite = finite.extra("exact_ln", exact).extra("ratio", ratio);
            }
            vec![limiting, finite]
        }
        RegimeArg::FixedM => {
            let n = require(args.n, "fixed_m", "n")?;
            let m = require_m(args.m, "fixed_m")?;
            vec![estimate_record(&fixed_m_asymptotic(n, m, p)?)]
        }
        RegimeArg::UnitM => {
            let n = require(args.n, "unit_m", "n")?;
            vec![estimate_record(&unit_m_asymptotic(n, p)?)]
        }
        RegimeArg::ProportionalAlpha => {
            let n = require(args.little_n, "proportional_alpha", "little-n")?;
            let alpha = require(args.alpha, "proportional_alpha", "alpha")?;
            vec![estimate_record(&alpha_asymptotic(n, alpha, p)?)]
        }
        RegimeArg::ProportionalAlphaUpper => {
            let n = require(args.little_n, "proportional_alpha_upper", "little-n")?;
            let alpha = require(args.alpha, "proportional_alpha_upper", "alpha")?;
            let summed = alpha_upper_bound_summed(n, alpha, p)?;
            let mut summed_record = estimate_record(&summed);
            summed_record.kind = "alpha_upper_summed";
            vec![
                estimate_record(&alpha_upper_bound(n, alpha, p)?),
                summed_record,
            ]
        }
        RegimeArg::ProportionalBeta => {
            let n = require(args.n, "proportional_beta", "n")?;
            let beta = require(args.beta, "proportional_beta", "beta")?;
            vec![estimate_record(&beta_asymptotic(n, beta, p)?)]
        }
        RegimeArg::FullSum => {
            return Err(CliError::Usage(
                "full_sum has no expansion; use `exact --m <N>` for 2^N N^p".into(),
            ))
        }
    };
    Ok(records)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Vec<OutputRecord>, CliError> {
    let params = args.triple.params()?;
    let strategy = ProbeStrategy {
        trials: args.trials,
        seed: args.seed,
    };
    let report = Oracle::default().inequality_probe(&params, &strategy)?;
    let mut inputs = args.triple.inputs();
    inputs.insert("trials".into(), args.trials.into());

    let mut records: Vec<OutputRecord> = report
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let coefficients: Vec<String> = r
                .coefficients
                .entries()
                .iter()
                .map(rational_string)
                .collect();
            OutputRecord::new("probe_vector", inputs.clone())
                .with_seed(args.seed)
                .extra("index", i)
                .extra("source", r.source.to_string())
                .extra("coefficients", coefficients)
                .extra("exact_moment", rational_string(&r.exact_moment))
                .extra("bound", rational_string(&r.bound))
                .extra("ratio", rational_string(&r.ratio))
                .extra("ratio_decimal", decimal_string(&r.ratio))
                .extra("violation", r.is_violation())
        })
        .collect();

    let best = &report.records[report.summary.argmax];
    let argmax: Vec<String> = best
        .coefficients
        .entries()
        .iter()
        .map(rational_string)
        .collect();
    records.push(
        OutputRecord::new("probe_summary", inputs)
            .with_seed(args.seed)
            .extra("index", report.summary.argmax)
            .extra("source", best.source.to_string())
            .extra("coefficients", argmax)
            .extra("ratio", rational_string(&report.summary.max_ratio))
            .extra("ratio_decimal", decimal_string(&report.summary.max_ratio))
            .extra("violation_count", report.summary.violation_count)
            .extra("vectors", report.records.len()),
    );
    Ok(records)
}

pub fn cmd_tally(triple: &TripleArgs) -> Result<Vec<OutputRecord>, CliError> {
    let params = triple.params()?;
    let tally = Oracle::default().tally_compositions(&params)?;
    let closed_form = t_e_minus_t_o(&params);
    let matches = tally.difference() == closed_form.clone().into();
    let count = |v: &num_bigint::BigUint| -> Value {
        u64::try_from(v)
            .map(Value::from)
            .unwrap_or_else(|_| v.to_string().into())
    };
    Ok(vec![OutputRecord::new("tally", triple.inputs())
        .extra("t_even", count(&tally.t_even))
        .extra("t_odd", count(&tally.t_odd))
        .extra("total", count(&tally.total))
        .extra("closed_form", count(&closed_form))
        .extra("match", matches)])
}

fn sweep_regime(args: &SweepArgs) -> Result<SweepRegime, CliError> {
    Ok(match args.regime {
        RegimeArg::BalancedUpper => SweepRegime::Balanced,
        RegimeArg::FixedM => SweepRegime::FixedM(require_m(args.m, "fixed_m")?),
        RegimeArg::UnitM => SweepRegime::UnitM,
        RegimeArg::ProportionalAlpha => {
            SweepRegime::Alpha(require(args.alpha, "proportional_alpha", "alpha")?)
        }
        RegimeArg::ProportionalAlphaUpper => {
            SweepRegime::AlphaUpper(require(args.alpha, "proportional_alpha_upper", "alpha")?)
        }
        RegimeArg::ProportionalBeta => {
            SweepRegime::Beta(require(args.beta, "proportional_beta", "beta")?)
        }
        RegimeArg::FullSum => SweepRegime::FullSum,
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<OutputRecord>, CliError> {
    let regime = sweep_regime(args)?;
    let grid = parse_grid(&args.grid).map_err(CliError::Usage)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let report = pool.install(|| convergence_report(regime, &grid, args.p))?;

    let mut inputs = Map::new();
    inputs.insert("regime".into(), regime.name().into());
    inputs.insert("p".into(), args.p.into());
    match regime {
        SweepRegime::FixedM(m) => {
            inputs.insert("m".into(), m.into());
        }
        SweepRegime::Alpha(a) | SweepRegime::AlphaUpper(a) => {
            inputs.insert("alpha".into(), a.into());
        }
        SweepRegime::Beta(b) => {
            inputs.insert("beta".into(), b.into());
        }
        _ => {}
    }

    let mut records: Vec<OutputRecord> = report
        .rows
        .iter()
        .map(|row| {
            let mut r = OutputRecord::new("sweep_row", inputs.clone()).extra("grid", row.grid);
            if let Some(params) = row.params {
                r = r.extra("n", params.n()).extra("m", params.m());
            }
            r.extra("exact_ln", row.exact.and_then(|v| v.ln_magnitude()))
                .extra(
                    "asymptotic_ln",
                    row.asymptotic.and_then(|v| v.ln_magnitude()),
                )
                .extra("ratio", row.ratio)
                .extra("improving", row.improving)
                .extra("skipped", row.skipped.clone())
        })
        .collect();
    if args.format == Format::Json {
        records.push(
            OutputRecord::new("sweep_summary", inputs)
                .extra("rows", report.rows.len())
                .extra("evaluated", report.evaluated().count())
                .extra("monotone", report.monotone()),
        );
    }
    Ok(records)
}
