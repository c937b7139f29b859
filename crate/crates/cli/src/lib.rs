//! Command-line front end for the `mirror-dd` library.

pub mod args;
pub mod config;
pub mod output;

use std::fmt;
use std::io::Write;

use anyhow::Context;
use mirror_dd::dynamics::{
    build_generator, evolve_conditional, evolve_master, mc_trajectories_with,
};
use mirror_dd::experiments::{
    lifetime_curves, ratio_crossing_time, ratio_crossing_time_root, sweep_xi_with, Table,
};
use mirror_dd::rates::{
    collective_rates, gamma_ab, gamma_ab_angular, gamma_ab_closed, gamma_ab_quadrature,
    gamma_ab_series,
};
use mirror_dd::{ComplexRate, Execution};

pub use args::{parse_args, Command, Format, RunConfig};
pub use output::{render_csv, render_json, Output};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Malformed command line, including `--help` and `--version`.
    Clap(clap::Error),
    /// Well-formed but invalid parameters.
    Usage(String),
    /// Failure while computing or writing results.
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Clap(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Runtime(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<mirror_dd::Error> for CliError {
    fn from(e: mirror_dd::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

fn rates_table(xi: f64, g: ComplexRate) -> Result<Table, CliError> {
    let (gp, gm) = collective_rates(g)?;
    let mut t = Table::new(&[
        "xi",
        "re_gamma_ab",
        "delta_mir",
        "gamma_plus",
        "gamma_minus",
    ]);
    t.push(vec![xi, g.re, g.im, gp, gm]);
    Ok(t)
}

/// Runs a resolved command and returns its table.
pub fn execute(run: &RunConfig) -> Result<Output, CliError> {
    use args::Method;
    let out = match &run.command {
        Command::Rates(r) => {
            let cfg = &r.geometry;
            let g = match r.method {
                Method::Auto => gamma_ab(cfg)?,
                Method::Closed => gamma_ab_closed(cfg)?,
                Method::Series => gamma_ab_series(cfg)?,
                Method::Quadrature => gamma_ab_quadrature(cfg, r.tol)?,
                Method::Angular => gamma_ab_angular(cfg, r.tol)?,
            };
            Output::scalar(rates_table(cfg.xi, g)?)
        }
        Command::Sweep(s) => Output::rows(sweep_xi_with(
            &s.spec,
            s.rate_backend(),
            Execution::default(),
        )?),
        Command::Lifetime(spec) => Output::rows(lifetime_curves(spec)?),
        Command::Evolve {
            dynamics,
            conditional,
        } => {
            let gen = build_generator(ComplexRate::new(dynamics.re_gamma, dynamics.delta_mir))?;
            let rho0 = dynamics.initial_state().density_matrix()?;
            let grid = dynamics.grid();
            let series = if *conditional {
                evolve_conditional(&gen, &rho0, &grid)?
            } else {
                evolve_master(&gen, &rho0, &grid)?
            };
            Output::from_series(&series)
        }
        Command::Trajectories {
            dynamics,
            n,
            seed,
            execution,
        } => {
            let gen = build_generator(ComplexRate::new(dynamics.re_gamma, dynamics.delta_mir))?;
            let series = mc_trajectories_with(
                &gen,
                &dynamics.initial_state(),
                &dynamics.grid(),
                *n,
                *seed,
                *execution,
            )?;
            Output::from_series(&series)
        }
        Command::Crossing { re_gamma } => {
            let mut t = Table::new(&["re_gamma", "t_star", "t_star_root"]);
            t.push(vec![
                *re_gamma,
                ratio_crossing_time(*re_gamma)?,
                ratio_crossing_time_root(*re_gamma)?,
            ]);
            Output::scalar(t)
        }
    };
    Ok(out)
}

pub fn render(out: &Output, run: &RunConfig) -> String {
    match run.format {
        Format::Csv => render_csv(out),
        Format::Json => render_json(out, run),
    }
}

fn write_result(text: &str, run: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &run.output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(CliError::Runtime),
        None => stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .context("cannot write to stdout")
            .map_err(CliError::Runtime),
    }
}

/// Parses, runs and writes one invocation; returns the process exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(argv).and_then(|run| {
        let out = execute(&run)?;
        write_result(&render(&out, &run), &run, stdout)
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Clap(e)) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            e.exit_code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
