//! Command-line flags and their resolution against an optional config file
//! into a validated [`RunConfig`].

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use mirror_dd::dynamics::InitialState;
use mirror_dd::experiments::{LifetimeSpec, RateBackend, Spacing, SweepSpec};
use mirror_dd::rates::{DipoleOrientation, GeometryConfig, MirrorSpec, DEFAULT_QUAD_TOL};
use mirror_dd::{Execution, TimeGrid};
use serde_json::{json, Value};

use crate::config::ConfigMap;
use crate::CliError;

const RENORMALIZE_WARN: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "mirror-dd",
    version,
    about = "Mirror-mediated dipole-dipole coupling and two-atom dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file (or a JSON output of a previous run).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DynamicsArgs {
    /// Re Γ_mir^(ab) in units of Γ_free.
    #[arg(long)]
    pub re_gamma: Option<f64>,
    /// Level shift Δ_mir = Im Γ_mir^(ab).
    #[arg(long)]
    pub delta_mir: Option<f64>,
    /// plus, minus, doubly-excited, ground or mixture.
    #[arg(long)]
    pub initial: Option<InitialKind>,
    /// Excitation probability per atom for the mixture state.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of time steps (grid has steps + 1 points).
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Γ_mir^(ab), Δ_mir and Γ± for one geometry.
    #[command(allow_negative_numbers = true)]
    Rates {
        #[command(flatten)]
        common: CommonArgs,
        /// Effective distance k₀(x_a + x_b).
        #[arg(long)]
        xi: Option<f64>,
        /// Dipole direction of atom a as `d1,d2,d3` (d1 along the mirror normal).
        #[arg(long)]
        dipole_a: Option<Triple>,
        #[arg(long)]
        dipole_b: Option<Triple>,
        /// Transmission rate on side a.
        #[arg(long)]
        ta: Option<f64>,
        /// Reflection rate on side b.
        #[arg(long)]
        rb: Option<f64>,
        /// Sets t_a·r_b directly (t_a = coupling, r_b = 1).
        #[arg(long)]
        coupling: Option<f64>,
        /// auto, closed, series, quadrature or angular.
        #[arg(long)]
        method: Option<Method>,
        /// Tolerance for the quadrature methods.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Γ_mir^(ab) over a range of ξ and dipole orientations.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        xi_min: Option<f64>,
        #[arg(long)]
        xi_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// linear or log.
        #[arg(long)]
        spacing: Option<SpacingArg>,
        /// Comma-separated |d·x| values.
        #[arg(long)]
        orientations: Option<NumList>,
        #[arg(long)]
        coupling: Option<f64>,
        /// analytic, quadrature or angular.
        #[arg(long)]
        backend: Option<Backend>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Emission-rate curves I(t), I0(t) and their ratio.
    #[command(allow_negative_numbers = true)]
    Lifetime {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        re_gamma: Option<f64>,
        /// Comma-separated excitation probabilities.
        #[arg(long)]
        p: Option<NumList>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Master-equation (or conditional no-jump) evolution.
    #[command(allow_negative_numbers = true)]
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        dynamics: DynamicsArgs,
        /// Propagate conditioned on no emission instead.
        #[arg(long)]
        conditional: bool,
    },
    /// Quantum-jump Monte Carlo ensemble.
    #[command(allow_negative_numbers = true)]
    Trajectories {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        dynamics: DynamicsArgs,
        /// Number of trajectories.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Run on a single thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Time at which I/I0 returns to one.
    #[command(allow_negative_numbers = true)]
    Crossing {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        re_gamma: Option<f64>,
    },
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(
                        "unknown value `{other}` (expected one of: {})",
                        [$($text),+].join(", ")
                    )),
                }
            }
        }

        impl $name {
            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }
    };
}

keyword_enum!(Format { Csv => "csv", Json => "json" });
keyword_enum!(Method {
    Auto => "auto",
    Closed => "closed",
    Series => "series",
    Quadrature => "quadrature",
    Angular => "angular",
});
keyword_enum!(SpacingArg { Linear => "linear", Log => "log" });
keyword_enum!(Backend { Analytic => "analytic", Quadrature => "quadrature", Angular => "angular" });
keyword_enum!(InitialKind {
    Plus => "plus",
    Minus => "minus",
    DoublyExcited => "doubly-excited",
    Ground => "ground",
    Mixture => "mixture",
});

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple(pub [f64; 3]);

impl FromStr for Triple {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let list: NumList = s.parse()?;
        match list.0.as_slice() {
            [a, b, c] => Ok(Triple([*a, *b, *c])),
            _ => Err(format!("expected three comma-separated numbers, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

impl FromStr for NumList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{}` is not a number", t.trim()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(NumList)
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Flag value if given, else the config-file value, else `None`.
fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigMap, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.get(key) {
        None => Ok(None),
        Some(text) => text
            .parse::<T>()
            .map(Some)
            .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))),
    }
}

fn pick_or<T: FromStr>(
    flag: Option<T>,
    cfg: &ConfigMap,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    Ok(pick(flag, cfg, key)?.unwrap_or(default))
}

fn pick_flag(flag: bool, cfg: &ConfigMap, key: &str) -> Result<bool, CliError> {
    Ok(flag || pick::<bool>(None, cfg, key)?.unwrap_or(false))
}

fn usage<E: std::fmt::Display>(flag: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Usage(format!("--{flag}: {e}"))
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!("--tol: {tol} must be > 0")));
    }
    Ok(())
}

fn dipole(flag: &str, t: Triple) -> Result<DipoleOrientation, CliError> {
    let [a, b, c] = t.0;
    let norm = (a * a + b * b + c * c).sqrt();
    let d = DipoleOrientation::new(a, b, c).map_err(usage(flag))?;
    if (norm - 1.0).abs() > RENORMALIZE_WARN {
        eprintln!("warning: --{flag} ({a},{b},{c}) renormalised to unit length");
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatesParams {
    pub geometry: GeometryConfig,
    pub dipole_a: Triple,
    pub dipole_b: Triple,
    pub ta: f64,
    pub rb: f64,
    pub method: Method,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub spec: SweepSpec,
    pub backend: Backend,
    pub tol: f64,
}

impl SweepParams {
    pub fn rate_backend(&self) -> RateBackend {
        match self.backend {
            Backend::Analytic => RateBackend::Analytic,
            Backend::Quadrature => RateBackend::Quadrature { tol: self.tol },
            Backend::Angular => RateBackend::Angular { tol: self.tol },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsParams {
    pub re_gamma: f64,
    pub delta_mir: f64,
    pub initial: InitialKind,
    pub p: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl DynamicsParams {
    pub fn initial_state(&self) -> InitialState {
        match self.initial {
            InitialKind::Plus => InitialState::Plus,
            InitialKind::Minus => InitialState::Minus,
            InitialKind::DoublyExcited => InitialState::DoublyExcited,
            InitialKind::Ground => InitialState::Ground,
            InitialKind::Mixture => InitialState::ProductMixture(self.p),
        }
    }

    pub fn grid(&self) -> TimeGrid {
        TimeGrid::uniform(self.t_max, self.steps).expect("validated at parse time")
    }

    fn resolve(args: DynamicsArgs, cfg: &ConfigMap) -> Result<Self, CliError> {
        let params = Self {
            re_gamma: pick_or(args.re_gamma, cfg, "re-gamma", 0.05)?,
            delta_mir: pick_or(args.delta_mir, cfg, "delta-mir", 0.0)?,
            initial: pick_or(args.initial, cfg, "initial", InitialKind::Mixture)?,
            p: pick_or(args.p, cfg, "p", 0.1)?,
            t_max: pick_or(args.t_max, cfg, "t-max", 5.0)?,
            steps: pick_or(args.steps, cfg, "steps", 500)?,
        };
        if !params.delta_mir.is_finite() {
            return Err(CliError::Usage("--delta-mir must be finite".into()));
        }
        mirror_dd::dynamics::build_generator(mirror_dd::ComplexRate::new(
            params.re_gamma,
            params.delta_mir,
        ))
        .map_err(usage("re-gamma"))?;
        params.initial_state().validate().map_err(usage("p"))?;
        TimeGrid::uniform(params.t_max, params.steps).map_err(usage("t-max/--steps"))?;
        Ok(params)
    }

    fn echo(&self, out: &mut Vec<(&'static str, Value)>) {
        out.push(("re-gamma", json!(self.re_gamma)));
        out.push(("delta-mir", json!(self.delta_mir)));
        out.push(("initial", json!(self.initial.as_str())));
        out.push(("p", json!(self.p)));
        out.push(("t-max", json!(self.t_max)));
        out.push(("steps", json!(self.steps)));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Rates(RatesParams),
    Sweep(SweepParams),
    Lifetime(LifetimeSpec),
    Evolve {
        dynamics: DynamicsParams,
        conditional: bool,
    },
    Trajectories {
        dynamics: DynamicsParams,
        n: usize,
        seed: u64,
        execution: Execution,
    },
    Crossing {
        re_gamma: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rates(_) => "rates",
            Command::Sweep(_) => "sweep",
            Command::Lifetime(_) => "lifetime",
            Command::Evolve { .. } => "evolve",
            Command::Trajectories { .. } => "trajectories",
            Command::Crossing { .. } => "crossing",
        }
    }
}

/// A fully resolved and validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Resolved options as written to JSON output; feeding this object back
    /// through `--config` reproduces the run.
    pub fn echo(&self) -> Vec<(&'static str, Value)> {
        let mut out = Vec::new();
        match &self.command {
            Command::Rates(r) => {
                out.push(("xi", json!(r.geometry.xi)));
                out.push(("dipole-a", json!(join(&r.dipole_a.0))));
                out.push(("dipole-b", json!(join(&r.dipole_b.0))));
                out.push(("ta", json!(r.ta)));
                out.push(("rb", json!(r.rb)));
                out.push(("method", json!(r.method.as_str())));
                out.push(("tol", json!(r.tol)));
            }
            Command::Sweep(s) => {
                out.push(("xi-min", json!(s.spec.xi_min)));
                out.push(("xi-max", json!(s.spec.xi_max)));
                out.push(("points", json!(s.spec.n_points)));
                let spacing = match s.spec.spacing {
                    Spacing::Linear => "linear",
                    Spacing::Log => "log",
                };
                out.push(("spacing", json!(spacing)));
                out.push(("orientations", json!(join(&s.spec.orientations))));
                out.push(("coupling", json!(s.spec.coupling)));
                out.push(("backend", json!(s.backend.as_str())));
                out.push(("tol", json!(s.tol)));
            }
            Command::Lifetime(l) => {
                out.push(("re-gamma", json!(l.re_gamma)));
                out.push(("p", json!(join(&l.p_list))));
                out.push(("t-max", json!(l.t_max)));
                out.push(("steps", json!(l.n_steps)));
            }
            Command::Evolve {
                dynamics,
                conditional,
            } => {
                dynamics.echo(&mut out);
                out.push(("conditional", json!(conditional)));
            }
            Command::Trajectories {
                dynamics,
                n,
                seed,
                execution,
            } => {
                dynamics.echo(&mut out);
                out.push(("n", json!(n)));
                out.push(("seed", json!(seed)));
                out.push(("sequential", json!(*execution == Execution::Sequential)));
            }
            Command::Crossing { re_gamma } => out.push(("re-gamma", json!(re_gamma))),
        }
        out.push(("format", json!(self.format.as_str())));
        out
    }
}

/// Parses `argv` (including the program name) into a validated config.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    resolve(cli.command)
}

fn load_config(common: &CommonArgs) -> Result<ConfigMap, CliError> {
    match &common.config {
        None => Ok(ConfigMap::default()),
        Some(path) => ConfigMap::load(path).map_err(|e| CliError::Usage(format!("{e:#}"))),
    }
}

fn resolve(args: CommandArgs) -> Result<RunConfig, CliError> {
    let (common, cfg, command) = match args {
        CommandArgs::Rates {
            common,
            xi,
            dipole_a,
            dipole_b,
            ta,
            rb,
            coupling,
            method,
            tol,
        } => {
            let cfg = load_config(&common)?;
            let xi =
                pick(xi, &cfg, "xi")?.ok_or_else(|| CliError::Usage("--xi is required".into()))?;
            let da = pick_or(dipole_a, &cfg, "dipole-a", Triple([0.0, 1.0, 0.0]))?;
            let db = pick_or(dipole_b, &cfg, "dipole-b", Triple([0.0, 1.0, 0.0]))?;
            let (ta, rb) = match pick(coupling, &cfg, "coupling")? {
                Some(c) if ta.is_none() && rb.is_none() => (c, 1.0),
                Some(_) => {
                    return Err(CliError::Usage(
                        "--coupling cannot be combined with --ta/--rb".into(),
                    ))
                }
                None => (pick_or(ta, &cfg, "ta", 0.5)?, pick_or(rb, &cfg, "rb", 1.0)?),
            };
            let tol = pick_or(tol, &cfg, "tol", DEFAULT_QUAD_TOL)?;
            check_tol(tol)?;
            let mirror = MirrorSpec::from_ta_rb(ta, rb).map_err(usage("ta/--rb"))?;
            let geometry =
                GeometryConfig::new(xi, dipole("dipole-a", da)?, dipole("dipole-b", db)?, mirror)
                    .map_err(usage("xi"))?;
            let params = RatesParams {
                geometry,
                dipole_a: da,
                dipole_b: db,
                ta,
                rb,
                method: pick_or(method, &cfg, "method", Method::Auto)?,
                tol,
            };
            (common, cfg, Command::Rates(params))
        }
        CommandArgs::Sweep {
            common,
            xi_min,
            xi_max,
            points,
            spacing,
            orientations,
            coupling,
            backend,
            tol,
        } => {
            let cfg = load_config(&common)?;
            let d = SweepSpec::default();
            let spacing = match pick_or(spacing, &cfg, "spacing", SpacingArg::Log)? {
                SpacingArg::Linear => Spacing::Linear,
                SpacingArg::Log => Spacing::Log,
            };
            let spec = SweepSpec {
                xi_min: pick_or(xi_min, &cfg, "xi-min", d.xi_min)?,
                xi_max: pick_or(xi_max, &cfg, "xi-max", d.xi_max)?,
                n_points: pick_or(points, &cfg, "points", d.n_points)?,
                spacing,
                orientations: pick_or(orientations, &cfg, "orientations", NumList(d.orientations))?
                    .0,
                coupling: pick_or(coupling, &cfg, "coupling", d.coupling)?,
            };
            spec.validate().map_err(usage("sweep"))?;
            let tol = pick_or(tol, &cfg, "tol", DEFAULT_QUAD_TOL)?;
            check_tol(tol)?;
            let backend = pick_or(backend, &cfg, "backend", Backend::Analytic)?;
            (
                common,
                cfg,
                Command::Sweep(SweepParams { spec, backend, tol }),
            )
        }
        CommandArgs::Lifetime {
            common,
            re_gamma,
            p,
            t_max,
            steps,
        } => {
            let cfg = load_config(&common)?;
            let d = LifetimeSpec::default();
            let spec = LifetimeSpec {
                p_list: pick_or(p, &cfg, "p", NumList(d.p_list))?.0,
                re_gamma: pick_or(re_gamma, &cfg, "re-gamma", d.re_gamma)?,
                t_max: pick_or(t_max, &cfg, "t-max", d.t_max)?,
                n_steps: pick_or(steps, &cfg, "steps", d.n_steps)?,
            };
            spec.validate().map_err(usage("lifetime"))?;
            (common, cfg, Command::Lifetime(spec))
        }
        CommandArgs::Evolve {
            common,
            dynamics,
            conditional,
        } => {
            let cfg = load_config(&common)?;
            let dynamics = DynamicsParams::resolve(dynamics, &cfg)?;
            let conditional = pick_flag(conditional, &cfg, "conditional")?;
            (
                common,
                cfg,
                Command::Evolve {
                    dynamics,
                    conditional,
                },
            )
        }
        CommandArgs::Trajectories {
            common,
            dynamics,
            n,
            seed,
            sequential,
        } => {
            let cfg = load_config(&common)?;
            let dynamics = DynamicsParams::resolve(dynamics, &cfg)?;
            let n = pick_or(n, &cfg, "n", 10_000)?;
            if n == 0 {
                return Err(CliError::Usage("--n must be >= 1".into()));
            }
            let seed = pick_or(seed, &cfg, "seed", 0)?;
            let execution = if pick_flag(sequential, &cfg, "sequential")? {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            (
                common,
                cfg,
                Command::Trajectories {
                    dynamics,
                    n,
                    seed,
                    execution,
                },
            )
        }
        CommandArgs::Crossing { common, re_gamma } => {
            let cfg = load_config(&common)?;
            let re_gamma = pick_or(re_gamma, &cfg, "re-gamma", 0.05)?;
            mirror_dd::experiments::ratio_crossing_time(re_gamma).map_err(usage("re-gamma"))?;
            (common, cfg, Command::Crossing { re_gamma })
        }
    };
    let format = pick_or(common.format, &cfg, "format", Format::Csv)?;
    Ok(RunConfig {
        command,
        format,
        output: common.output,
    })
}
