//! `isocap`: capacities, quasilocal masses and weak inverse mean curvature
//! flow on rotationally symmetric 3-manifolds.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad configuration or
//! input, 3 numerical failure.

mod commands;
mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, Suite, VerifyOptions};
use config::{parse_assignments, FileConfig, Format, MetricSource};
use isocap::masses::default_radius_grid;
use isocap::Error;

#[derive(Parser, Debug)]
#[command(
    name = "isocap",
    version,
    about = "Capacities, masses and inverse mean curvature flow of rotationally symmetric metrics"
)]
struct Cli {
    /// Metric: flat, schwarzschild:m=1, cylinder:a=2, generated:total=..,center=..,width=..,a_min=..,
    /// expr:<gauge>:<expression> or table:<gauge>:<file.csv>
    #[arg(long, global = true)]
    metric: Option<String>,

    /// TOML file with [metric], [tolerances] and [output] sections
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Expression parameter, `name=value`; repeatable
    #[arg(long = "param", global = true)]
    params: Vec<String>,

    /// Domain start of an expression metric
    #[arg(long, global = true, allow_hyphen_values = true)]
    start: Option<f64>,

    /// Inner boundary of an expression or table metric: none or minimal
    #[arg(long, global = true)]
    boundary: Option<String>,

    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Area, volume, mean curvature, Hawking mass, Willmore energy and scalar curvature of a coordinate sphere
    Sphere {
        #[arg(long)]
        rho: f64,
    },
    /// Normalized p-capacity of a coordinate sphere (p = 1 gives the hull area over 4π)
    Capacity {
        #[arg(long)]
        rho0: f64,
        #[arg(long)]
        p: f64,
    },
    /// Weak inverse mean curvature flow from a coordinate sphere
    Flow {
        #[arg(long)]
        rho0: f64,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Quasilocal and total masses over a p grid, plus the isoperimetric mass
    Mass {
        #[arg(long, default_value = "1,1.5,2,2.5")]
        p_grid: String,
        /// Radii of the sphere exhaustion (default: doubling grid from 50 capacitary radii)
        #[arg(long)]
        r_grid: Option<String>,
    },
    /// Run a verification suite and print a per-check table
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        p_grid: Option<String>,
        #[arg(long)]
        r_grid: Option<String>,
        #[arg(long)]
        rho_grid: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        m_bound: Option<f64>,
        #[arg(long)]
        rho0: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Check curvature, minimal-sphere and isoperimetric hypotheses on the probe grid
    Hypotheses,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NonConvergence(_)
        | Error::NoBracket { .. }
        | Error::Eval(_)
        | Error::NonIntegrableThroat(_)
        | Error::ParabolicMetric(_)
        | Error::InsufficientData { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = file.tolerances;
    cfg.validate()?;

    let mut source = MetricSource {
        spec: file.metric.spec.clone().unwrap_or_default(),
        params: file.metric.params.clone(),
        start: file.metric.start,
        boundary: file.metric.boundary.clone(),
    };
    if let Some(spec) = &cli.metric {
        source = MetricSource { spec: spec.clone(), ..MetricSource::default() };
    }
    for p in &cli.params {
        source.params.extend(parse_assignments(p)?);
    }
    if cli.start.is_some() {
        source.start = cli.start;
    }
    if cli.boundary.is_some() {
        source.boundary = cli.boundary.clone();
    }
    if source.spec.is_empty() {
        return Err(Error::Config("no metric given: use --metric or a [metric] section with `spec`".into()));
    }
    let metric = source.build(&cfg)?;
    let format = cli.format.or(file.output.format).unwrap_or_default();

    let outcome = match cli.command {
        Command::Sphere { rho } => commands::sphere(&metric, rho, format, &cfg)?,
        Command::Capacity { rho0, p } => commands::capacity(&metric, rho0, p, format, &cfg)?,
        Command::Flow { rho0, tmax, samples } => commands::flow(&metric, rho0, tmax, samples, format, &cfg)?,
        Command::Mass { p_grid, r_grid } => {
            warn_if_small(&metric, &cfg);
            let r_grid = match r_grid {
                Some(g) => commands::parse_grid(&g)?,
                None => default_radius_grid(&metric, &cfg)?,
            };
            commands::mass(&metric, &commands::parse_grid(&p_grid)?, &r_grid, format, &cfg)?
        }
        Command::Verify { suite, p_grid, r_grid, rho_grid, tol, m_bound, rho0, tmax, samples } => {
            warn_if_small(&metric, &cfg);
            let grid = |g: Option<String>| g.map(|g| commands::parse_grid(&g)).transpose();
            let opts = VerifyOptions {
                p_grid: grid(p_grid)?,
                r_grid: grid(r_grid)?,
                rho_grid: grid(rho_grid)?,
                tol,
                m_bound,
                rho0,
                t_max: tmax,
                samples,
            };
            commands::verify(&metric, suite, &opts, format, &cfg)?
        }
        Command::Hypotheses => {
            let mut outcome = commands::hypotheses(&metric, format, &cfg)?;
            outcome.pass = true;
            outcome
        }
    };

    let mut outcome = outcome;
    if let Some(path) = cli.output.or(file.output.path) {
        std::fs::write(&path, &outcome.text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        outcome.text.clear();
    }
    Ok(outcome)
}

fn warn_if_small(metric: &isocap::geometry::RadialMetric, cfg: &isocap::ToleranceConfig) {
    if let Err(e) = metric.check_largeness(cfg) {
        eprintln!("warning: {e}; masses of this metric diverge");
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
