//! Command-line front end. Exit codes: 0 pass, 1 fail, 2 input or usage
//! error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::lattice::{self, Direction};
use crate::montecarlo::{self, BinSpec};
use crate::orderstats::{
    discretize_first_k_density, discretize_pair_density, DistributionModel, OrderStatContext,
};
use crate::positivity::{self, CheckMode, CheckOptions, DEFAULT_FULL_BUDGET, DEFAULT_TOLERANCE};
use crate::text::fmt_f64;
use crate::verify::{self, Property, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "totpos",
    version,
    about = "Directional total positivity and order-statistic dependence checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a lattice file for directional total positivity.
    Check(CheckArgs),
    /// Tabulate an order-statistic joint density on a grid.
    Osdensity(OsdensityArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
    /// Simulate sorted samples, or binned gap-survival estimates with --y.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Lattice JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Report destination (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Sign vector such as +1,-1,+1 (all +1 when omitted).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, value_enum, default_value_t = LatticeMode::Pairs)]
    mode: LatticeMode,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Compare sums of logs instead of products.
    #[arg(long)]
    log_domain: bool,
    /// Largest number of point pairs the full check may visit.
    #[arg(long, default_value_t = DEFAULT_FULL_BUDGET)]
    full_budget: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LatticeMode {
    Pairs,
    Full,
    Chain,
    Survival,
    Negative,
}

impl From<LatticeMode> for CheckMode {
    fn from(m: LatticeMode) -> Self {
        match m {
            LatticeMode::Pairs => CheckMode::Pairs,
            LatticeMode::Full => CheckMode::Full,
            LatticeMode::Chain => CheckMode::Chain,
            LatticeMode::Survival => CheckMode::Survival,
            LatticeMode::Negative => CheckMode::Negative,
        }
    }
}

#[derive(Debug, Args)]
struct OsdensityArgs {
    /// Model such as exp:1, uniform:0,1, pareto:1,2, weibull:0.5,1.
    #[arg(long)]
    dist: String,
    #[arg(long = "d")]
    d: usize,
    #[arg(long = "i", default_value_t = 1)]
    i: usize,
    #[arg(long = "j", default_value_t = 2)]
    j: usize,
    /// Tabulate the first k order statistics instead of the (i, j) pair.
    #[arg(long = "k")]
    k: Option<usize>,
    /// Grid lo:hi:n, used on every axis.
    #[arg(long)]
    grid: String,
    #[arg(long, value_enum, default_value_t = DensityFormat::Csv)]
    format: DensityFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DensityFormat {
    Csv,
    Lattice,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// plrd, prd, cis, cis-spacing, dfr, beta-identity or equivalence.
    #[arg(long)]
    prop: String,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long = "d")]
    d: Option<usize>,
    #[arg(long = "i")]
    i: Option<usize>,
    #[arg(long = "j")]
    j: Option<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Lattice shape for the equivalence suite, e.g. 3,3,3.
    #[arg(long, default_value = "3,3,3")]
    shape: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Conditioning grid lo:hi:n.
    #[arg(long)]
    grid: Option<String>,
    /// Single second-argument value in place of the default grid.
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    dist: String,
    #[arg(long = "d")]
    d: usize,
    /// Number of samples.
    #[arg(long = "n")]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Gap threshold; switches output to binned estimates.
    #[arg(long)]
    y: Option<f64>,
    #[arg(long, default_value_t = montecarlo::DEFAULT_BINS)]
    bins: usize,
    #[arg(long = "i", default_value_t = 1)]
    i: usize,
    #[arg(long = "j", default_value_t = 2)]
    j: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `lo:hi:n` into `n >= 2` evenly spaced points.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::InvalidGrid(format!("expected lo:hi:n, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = f64::from_str(parts[0].trim()).map_err(|_| bad())?;
    let hi = f64::from_str(parts[1].trim()).map_err(|_| bad())?;
    let n = usize::from_str(parts[2].trim()).map_err(|_| bad())?;
    if n < 2 {
        return Err(Error::InvalidGrid(format!(
            "grid needs at least 2 points, got {n}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidGrid(format!(
            "grid needs finite lo < hi, got {lo}:{hi}"
        )));
    }
    Ok(verify::linspace(lo, hi, n))
}

fn parse_shape(spec: &str) -> Result<Vec<usize>> {
    let shape = spec
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidLattice {
            field: "shape",
            reason: format!("cannot parse {spec:?}"),
        })?;
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidLattice {
            field: "shape",
            reason: "every extent must be positive".into(),
        });
    }
    Ok(shape)
}

/// Parses `args` (program name first) and runs one command, writing results
/// to `out` (or the `--output` file) and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => run_check(a, out),
        Command::Osdensity(a) => run_osdensity(a, out).map(|()| EXIT_PASS),
        Command::Verify(a) => run_verify(a, out),
        Command::Sample(a) => run_sample(a, out).map(|()| EXIT_PASS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn emit(path: &Option<PathBuf>, out: &mut dyn Write, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_check(a: CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let density = lattice::read_lattice(&a.input)?;
    let alpha = match &a.alpha {
        Some(s) => s.parse::<Direction>()?,
        None => Direction::ones(density.dim()),
    };
    let opts = CheckOptions::with_tol(a.tol)
        .log_domain(a.log_domain)
        .full_budget(a.full_budget);
    let report = positivity::check(&density, &alpha, a.mode.into(), &opts)?;
    let mut text = report.to_json();
    text.push('\n');
    emit(&a.output, out, &text)?;
    if a.output.is_some() {
        writeln!(out, "{}", report.verdict)?;
    }
    Ok(if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn run_osdensity(a: OsdensityArgs, out: &mut dyn Write) -> Result<()> {
    let model: DistributionModel = a.dist.parse()?;
    let grid = parse_grid(&a.grid)?;
    let density = match a.k {
        Some(k) => {
            if !(2 <= k && k <= a.d) {
                return Err(Error::InvalidRanks { d: a.d, i: 1, j: k });
            }
            discretize_first_k_density(&model, a.d, &vec![grid; k])?
        }
        None => {
            let ctx = OrderStatContext::new(a.d, a.i, a.j)?;
            discretize_pair_density(&model, &ctx, &grid, &grid)?
        }
    };
    let text = match a.format {
        DensityFormat::Lattice => {
            let mut t = lattice::to_json_string(&density);
            t.push('\n');
            t
        }
        DensityFormat::Csv => density_csv(&density),
    };
    emit(&a.output, out, &text)
}

/// One line per lattice point: coordinates then value. Two-axis lattices use
/// the header `x,y,value`; others `x1,...,xk,value`.
fn density_csv(density: &lattice::LatticeDensity) -> String {
    let d = density.dim();
    let mut text = if d == 2 {
        "x,y,value\n".to_string()
    } else {
        let names: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
        format!("{},value\n", names.join(","))
    };
    for (flat, &v) in density.values().iter().enumerate() {
        let idx = density.unravel(flat);
        for (k, &i) in idx.iter().enumerate() {
            text.push_str(&fmt_f64(density.axis(k)[i]));
            text.push(',');
        }
        text.push_str(&fmt_f64(v));
        text.push('\n');
    }
    text
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let property: Property = a.prop.parse()?;
    let ranks = match (a.d, a.i, a.j) {
        (None, None, None) => None,
        (Some(d), i, j) => {
            let (i, j) = (i.unwrap_or(1), j.unwrap_or(2));
            OrderStatContext::new(d, i, j)?;
            Some((d, i, j))
        }
        _ => {
            return Err(Error::Domain("--i and --j need --d".into()));
        }
    };
    let cfg = VerifyConfig {
        model: a.dist.as_deref().map(str::parse).transpose()?,
        ranks,
        trials: a.trials,
        shape: parse_shape(&a.shape)?,
        seed: a.seed,
        tol: a.tol,
        x_grid: a.grid.as_deref().map(parse_grid).transpose()?,
        y_grid: a.y.map(|y| vec![y]),
    };
    let summary = verify::run(property, &cfg)?;
    let mut text = summary.to_json();
    text.push('\n');
    emit(&a.output, out, &text)?;
    Ok(if summary.passed { EXIT_PASS } else { EXIT_FAIL })
}

fn run_sample(a: SampleArgs, out: &mut dyn Write) -> Result<()> {
    let model: DistributionModel = a.dist.parse()?;
    let batch = montecarlo::sample_order_stats(&model, a.d, a.n, a.seed)?;
    let mut buf = Vec::new();
    match a.y {
        Some(y) => {
            let bins = montecarlo::empirical_gap_survival(
                &batch,
                a.i,
                a.j,
                &BinSpec::EqualCount(a.bins),
                y,
            )?;
            montecarlo::write_bins_csv(&bins, &mut buf)?;
        }
        None => batch.write_csv(&mut buf)?,
    }
    let text = String::from_utf8(buf).expect("csv is utf-8");
    emit(&a.output, out, &text)
}
