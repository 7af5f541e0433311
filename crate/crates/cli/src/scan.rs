//! Parameter-grid scans written as CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use lorenz_renorm::conjugacy::entropy_beta;
use lorenz_renorm::error::Error;
use lorenz_renorm::map::LorenzMap;
use lorenz_renorm::periodic::DEFAULT_PERIOD_CAP;
use lorenz_renorm::renorm::{cascade_with_caps, DEFAULT_LEVEL_CAP};
use lorenz_renorm::scalar::{parse_rational, q, Exact, Float, Mode, Scalar};

use crate::{parse_mode, with_pool, CliError, EXIT_INTERNAL, EXIT_INVALID, EXIT_IO, MODE_ENV};

/// Column order of the CSV output.
pub const HEADER: [&str; 8] = ["a", "b", "c", "kappa", "depth", "terminal_slope", "beta", "prime"];

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Sweep `a` with `b = a` and `c = 1/2`.
    #[arg(long, conflicts_with_all = ["b_range", "c_range"])]
    pub symmetric: bool,
    /// `lo:hi:n` for the `n` points `lo + k (hi - lo) / n`, `k = 1..n`, or a
    /// single value.
    #[arg(long)]
    pub a_range: String,
    #[arg(long, required_unless_present = "symmetric")]
    pub b_range: Option<String>,
    #[arg(long)]
    pub c_range: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub parallel: Option<usize>,
    #[arg(long, env = MODE_ENV, default_value = "exact", value_parser = parse_mode)]
    pub mode: Mode,
    #[arg(long, default_value_t = DEFAULT_PERIOD_CAP)]
    pub max_period: usize,
    /// Largest lap index used to estimate β.
    #[arg(long, default_value_t = 60)]
    pub lap_depth: usize,
}

/// One grid point. Fields are empty where the map is not in `L` or the
/// analysis failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub a: String,
    pub b: String,
    pub c: String,
    pub kappa: Option<usize>,
    pub depth: Option<usize>,
    /// Common slope of the terminal map, or `a;b` when they differ.
    pub terminal_slope: Option<String>,
    pub beta: Option<f64>,
    pub prime: Option<bool>,
}

/// Parses `lo:hi:n` or a single value into exact grid points.
pub fn parse_range(spec: &str) -> Result<Vec<Exact>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![parse_rational(v)?]),
        [lo, hi, n] => {
            let lo = parse_rational(lo)?;
            let hi = parse_rational(hi)?;
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad point count in `{spec}`")))?;
            if n < 0 {
                return Err(Error::Parse(format!("negative point count in `{spec}`")));
            }
            let step = if n == 0 {
                Exact::zero()
            } else {
                (hi - lo.clone()) * q(1, n)
            };
            Ok((1..=n).map(|k| lo.clone() + step.clone() * q(k, 1)).collect())
        }
        _ => Err(Error::Parse(format!("range `{spec}` is neither `lo:hi:n` nor a value"))),
    }
}

/// Grid points in row order: `a` outermost, then `b`, then `c`.
pub fn grid(args: &ScanArgs) -> Result<Vec<(Exact, Exact, Exact)>, Error> {
    let a = parse_range(&args.a_range)?;
    if args.symmetric {
        return Ok(a.into_iter().map(|a| (a.clone(), a, q(1, 2))).collect());
    }
    let b = parse_range(args.b_range.as_deref().unwrap_or("1/2"))?;
    let c = parse_range(args.c_range.as_deref().unwrap_or("1/2"))?;
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for x in &a {
        for y in &b {
            for z in &c {
                out.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    Ok(out)
}

fn analyze_point<S: Scalar>(a: &Exact, b: &Exact, c: &Exact, args: &ScanArgs) -> ScanRow {
    let mut row = ScanRow {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        kappa: None,
        depth: None,
        terminal_slope: None,
        beta: None,
        prime: None,
    };
    let Ok(f) = LorenzMap::new(S::from_ratio(a), S::from_ratio(b), S::from_ratio(c)) else {
        return row;
    };
    if let Ok(rep) = cascade_with_caps(&f, DEFAULT_LEVEL_CAP, args.max_period) {
        let t = &rep.terminal;
        row.kappa = Some(rep.kappa);
        row.depth = Some(rep.depth_m);
        row.terminal_slope = Some(if t.a() == t.b() {
            t.a().to_exact_string()
        } else {
            format!("{};{}", t.a().to_exact_string(), t.b().to_exact_string())
        });
        row.prime = Some(rep.is_prime());
    }
    if f.require_l().is_ok() {
        row.beta = entropy_beta(&f, args.lap_depth, 1e-12).ok().map(|e| e.beta);
    }
    row
}

/// Rows for every grid point, in grid order whatever the thread count.
pub fn scan_rows(args: &ScanArgs) -> Result<Vec<ScanRow>, CliError> {
    if args.lap_depth < 3 {
        return Err(CliError::new(EXIT_INVALID, "--lap-depth must be at least 3"));
    }
    let points = grid(args)?;
    with_pool(args.parallel, || {
        points
            .par_iter()
            .map(|(a, b, c)| match args.mode {
                Mode::Exact => analyze_point::<Exact>(a, b, c, args),
                Mode::Float => analyze_point::<Float>(a, b, c, args),
            })
            .collect()
    })
}

pub fn write_csv<W: Write>(sink: W, rows: &[ScanRow]) -> Result<(), CliError> {
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => CliError::new(EXIT_IO, format!("I/O error: {e}")),
        other => CliError::new(EXIT_INTERNAL, format!("{other:?}")),
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    w.write_record(HEADER).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::new(EXIT_IO, format!("I/O error: {e}")))
}

pub fn run_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = scan_rows(args)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::new(EXIT_IO, format!("cannot create {}: {e}", path.display())))?;
            write_csv(io::BufWriter::new(file), &rows)
        }
        None => write_csv(out, &rows),
    }
}
