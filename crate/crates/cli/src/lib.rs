//! Command-line front end: `analyze`, `scan`, `verify` and `conjugate`.
//!
//! Exit codes: 0 success, 1 internal failure, 2 invalid input, 3 search cap
//! exhausted, 4 I/O failure, 5 a verification suite found a violation.

pub mod report;
pub mod scan;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use lorenz_renorm::conjugacy::{conjugate_with, ConjugacyOptions, DEFAULT_MATCH_DEPTH};
use lorenz_renorm::error::Error;
use lorenz_renorm::map::LorenzMap;
use lorenz_renorm::periodic::{minimal_period, Kappa, DEFAULT_PERIOD_CAP};
use lorenz_renorm::renorm::{cascade_with_caps, reduce_with_cap, DEFAULT_LEVEL_CAP};
use lorenz_renorm::scalar::{parse_scalar, Exact, Float, Mode, Scalar};
use lorenz_renorm::suites::{run_suite, Suite};

use report::{AnalysisReport, ConjugacyReport};

/// Environment variable that sets the arithmetic mode when `--mode` is absent.
pub const MODE_ENV: &str = "LORENZ_RENORM_MODE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "lorenz-renorm",
    version,
    about = "Renormalization of piecewise linear Lorenz maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a map, follow its renormalization cascade and conjugate it
    /// to a β-transformation.
    Analyze(AnalyzeArgs),
    /// Cascade depth and slope data over a parameter grid, as CSV.
    Scan(scan::ScanArgs),
    /// Randomized verification suites.
    Verify(VerifyArgs),
    /// Parameters (β, α) of the conjugate β-transformation.
    Conjugate(ConjugateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    /// Left slope, as `p/q` or a decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Right slope.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Discontinuity in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Arithmetic backend.
    #[arg(long, env = MODE_ENV, default_value = "exact", value_parser = parse_mode)]
    pub mode: Mode,
    /// Preimage levels searched for the minimal period.
    #[arg(long, default_value_t = DEFAULT_PERIOD_CAP)]
    pub max_period: usize,
    /// Compact single-line JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    pub json: bool,
    /// Indented JSON.
    #[arg(long)]
    pub pretty: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

pub(crate) fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConjugateArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Kneading symbols to match.
    #[arg(long, default_value_t = DEFAULT_MATCH_DEPTH)]
    pub depth: usize,
    /// Bracket width at which the α bisection stops.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Largest lap index used to estimate β.
    #[arg(long, default_value_t = 200)]
    pub lap_depth: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// One of expansion, lemmas, decomposition, trivial-orbit,
    /// period-oracle, consistency, conjugacy, or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub parallel: Option<usize>,
}

/// A failed command: the message for stderr and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn io(e: io::Error) -> Self {
        CliError::new(EXIT_IO, format!("I/O error: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidMap(_) | Error::NotExpandOnAverage { .. } | Error::Parse(_) | Error::Precondition(_) => {
                EXIT_INVALID
            }
            Error::CapExceeded { .. } | Error::ContinuityWitnessFailure { .. } => EXIT_CAP,
            Error::ViolationFound(_) => EXIT_VIOLATION,
            _ => EXIT_INTERNAL,
        };
        CliError::new(code, e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Output goes to `out`, diagnostics to `err`.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(args) => {
            let report = match args.common.mode {
                Mode::Exact => analyze::<Exact>(args)?,
                Mode::Float => analyze::<Float>(args)?,
            };
            emit_json(out, &report, args.common.pretty)
        }
        Command::Conjugate(args) => {
            let report = match args.common.mode {
                Mode::Exact => conjugate::<Exact>(args)?,
                Mode::Float => conjugate::<Float>(args)?,
            };
            emit_json(out, &report, args.common.pretty)
        }
        Command::Scan(args) => scan::run_scan(args, out),
        Command::Verify(args) => verify(args, out),
    }
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T, pretty: bool) -> Result<(), CliError> {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| CliError::new(EXIT_INTERNAL, e.to_string()))?;
    writeln!(out, "{text}").map_err(CliError::io)
}

/// Builds the map and checks it is in `L`.
pub fn parse_map<S: Scalar>(m: &MapArgs) -> Result<LorenzMap<S>, CliError> {
    let f = LorenzMap::new(parse_scalar(&m.a)?, parse_scalar(&m.b)?, parse_scalar(&m.c)?)?;
    f.require_l()?;
    Ok(f)
}

fn kappa_within<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> Result<usize, CliError> {
    match minimal_period(f, cap)?.kappa {
        Kappa::Finite(k) => Ok(k),
        Kappa::ExceedsCap => Err(CliError::new(
            EXIT_CAP,
            format!("minimal period exceeds the search cap of {cap} preimage levels"),
        )),
    }
}

pub fn analyze<S: Scalar>(args: &AnalyzeArgs) -> Result<AnalysisReport, CliError> {
    let t0 = Instant::now();
    let f: LorenzMap<S> = parse_map(&args.map)?;
    let cap = args.common.max_period;
    let kappa = kappa_within(&f, cap)?;
    let (_, chain) = reduce_with_cap(&f, cap)?;
    let cascade = cascade_with_caps(&f, DEFAULT_LEVEL_CAP, cap)?;
    let opts = ConjugacyOptions {
        period_cap: cap,
        ..ConjugacyOptions::default()
    };
    let params = conjugate_with(&f, &opts)?;
    let mut report = AnalysisReport::assemble(&f, kappa, &chain, &cascade, &params);
    if args.common.timing {
        report.timing_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

pub fn conjugate<S: Scalar>(args: &ConjugateArgs) -> Result<ConjugacyReport, CliError> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::new(EXIT_INVALID, "--tol must be positive"));
    }
    if args.lap_depth < 3 {
        return Err(CliError::new(EXIT_INVALID, "--lap-depth must be at least 3"));
    }
    let f: LorenzMap<S> = parse_map(&args.map)?;
    kappa_within(&f, args.common.max_period)?;
    let opts = ConjugacyOptions {
        lap_depth: args.lap_depth,
        match_depth: args.depth,
        alpha_tol: args.tol,
        period_cap: args.common.max_period,
    };
    Ok(ConjugacyReport::of(&conjugate_with(&f, &opts)?))
}

pub(crate) fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(CliError::new(EXIT_INVALID, "--parallel must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(job))
            .map_err(|e| CliError::new(EXIT_INTERNAL, e.to_string())),
    }
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse().map_err(CliError::from)?]
    };
    let mut failed = 0;
    for suite in suites {
        let reports = with_pool(args.parallel, || run_suite(suite, args.samples, args.seed))?;
        for r in reports {
            writeln!(out, "{r}").map_err(CliError::io)?;
            failed += r.failed;
        }
    }
    if failed > 0 {
        return Err(CliError::new(EXIT_VIOLATION, format!("{failed} violations found")));
    }
    Ok(())
}
