//! Parameter sweeps and derived observables: Γ_mir^(ab) against ξ for a set
//! of dipole orientations, emission-rate curves I(t), I₀(t), their ratio and
//! the time at which the ratio returns to one.

use crate::dynamics::{emission_rate, emission_ratio};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::rates::{
    gamma_ab, gamma_ab_angular, gamma_ab_quadrature, ComplexRate, DipoleOrientation,
    GeometryConfig, MirrorSpec, DEFAULT_QUAD_TOL, GAMMA_FREE,
};
use crate::timeseries::TimeGrid;

/// Row-major numeric table with fixed column names.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Which evaluation route a sweep uses for Γ_mir^(ab).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RateBackend {
    /// Closed form, with the series branch at small ξ.
    #[default]
    Analytic,
    Quadrature {
        tol: f64,
    },
    Angular {
        tol: f64,
    },
}

impl RateBackend {
    pub fn evaluate(&self, cfg: &GeometryConfig) -> Result<ComplexRate> {
        match *self {
            RateBackend::Analytic => gamma_ab(cfg),
            RateBackend::Quadrature { tol } => gamma_ab_quadrature(cfg, tol),
            RateBackend::Angular { tol } => gamma_ab_angular(cfg, tol),
        }
    }

    pub fn quadrature() -> Self {
        RateBackend::Quadrature {
            tol: DEFAULT_QUAD_TOL,
        }
    }

    pub fn angular() -> Self {
        RateBackend::Angular {
            tol: DEFAULT_QUAD_TOL,
        }
    }
}

/// ξ sweep with identical dipoles on both atoms, `d̂ = (cos α, sin α, 0)`
/// and `cos α = |d̂·x̂|` taken from `orientations`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
    pub orientations: Vec<f64>,
    /// The product `t_a·r_b`.
    pub coupling: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            xi_min: 0.1,
            xi_max: 20.0,
            n_points: 400,
            spacing: Spacing::Log,
            orientations: vec![0.0, 0.5, 0.75, 1.0],
            coupling: 0.5,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.xi_min > 0.0 && self.xi_min < self.xi_max && self.xi_max.is_finite()) {
            return Err(Error::Domain(format!(
                "need 0 < xi_min < xi_max (got {} and {})",
                self.xi_min, self.xi_max
            )));
        }
        if self.n_points < 2 {
            return Err(Error::Domain(format!(
                "n_points = {} must be >= 2",
                self.n_points
            )));
        }
        if self.orientations.is_empty() {
            return Err(Error::Domain("orientation list is empty".into()));
        }
        if let Some(o) = self.orientations.iter().find(|o| !(0.0..=1.0).contains(*o)) {
            return Err(Error::Domain(format!(
                "orientation |d.x| = {o} must lie in [0, 1]"
            )));
        }
        MirrorSpec::from_coupling(self.coupling).map(|_| ())
    }

    pub fn xi_values(&self) -> Vec<f64> {
        let n = self.n_points;
        let mut xs: Vec<f64> = (0..n)
            .map(|k| {
                let f = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.xi_min + f * (self.xi_max - self.xi_min),
                    Spacing::Log => self.xi_min * (self.xi_max / self.xi_min).powf(f),
                }
            })
            .collect();
        xs[0] = self.xi_min;
        xs[n - 1] = self.xi_max;
        xs
    }
}

pub const SWEEP_COLUMNS: [&str; 4] = ["xi", "orientation", "re_gamma_ab", "delta_mir"];

/// One row per `(xi, orientation)`, ξ-major, with the analytic backend.
pub fn sweep_xi(spec: &SweepSpec) -> Result<Table> {
    sweep_xi_with(spec, RateBackend::Analytic, Execution::default())
}

pub fn sweep_xi_with(spec: &SweepSpec, backend: RateBackend, exec: Execution) -> Result<Table> {
    spec.validate()?;
    let mirror = MirrorSpec::from_coupling(spec.coupling)?;
    let dipoles = spec
        .orientations
        .iter()
        .map(|&o| DipoleOrientation::from_normal_component(o))
        .collect::<Result<Vec<_>>>()?;
    let xs = spec.xi_values();
    let n_orient = dipoles.len();

    let rows = map_indexed(exec, xs.len() * n_orient, |idx| {
        let xi = xs[idx / n_orient];
        let j = idx % n_orient;
        let d = dipoles[j];
        let g = backend.evaluate(&GeometryConfig::new(xi, d, d, mirror)?)?;
        Ok(vec![xi, spec.orientations[j], g.re, g.im])
    });

    let mut table = Table::new(&SWEEP_COLUMNS);
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeSpec {
    pub p_list: Vec<f64>,
    /// Re Γ_mir^(ab) in units of Γ_free.
    pub re_gamma: f64,
    pub t_max: f64,
    /// Number of time intervals; the grid has `n_steps + 1` points.
    pub n_steps: usize,
}

impl Default for LifetimeSpec {
    fn default() -> Self {
        Self {
            p_list: vec![0.05, 0.1, 0.2],
            re_gamma: 0.05,
            t_max: 5.0,
            n_steps: 500,
        }
    }
}

impl LifetimeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.p_list.is_empty() {
            return Err(Error::Domain("p list is empty".into()));
        }
        if let Some(p) = self.p_list.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(Error::Domain(format!("p = {p} must lie in (0, 1)")));
        }
        if !(self.re_gamma.abs() < GAMMA_FREE) {
            return Err(Error::UnphysicalRate(self.re_gamma.abs()));
        }
        TimeGrid::uniform(self.t_max, self.n_steps).map(|_| ())
    }
}

pub const LIFETIME_COLUMNS: [&str; 5] = ["t", "p", "I", "I0", "ratio"];

/// Emission-rate curves ordered by `(t, p)`.
pub fn lifetime_curves(spec: &LifetimeSpec) -> Result<Table> {
    spec.validate()?;
    let grid = TimeGrid::uniform(spec.t_max, spec.n_steps)?;
    let gamma = ComplexRate::new(spec.re_gamma, 0.0);
    let mut table = Table::new(&LIFETIME_COLUMNS);
    for &t in grid.times() {
        for &p in &spec.p_list {
            let i = emission_rate(p, gamma, t);
            let i0 = emission_rate(p, ComplexRate::ZERO, t);
            table.push(vec![t, p, i, i0, emission_ratio(spec.re_gamma, t)]);
        }
    }
    Ok(table)
}

fn check_crossing_rate(re_gamma: f64) -> Result<()> {
    if re_gamma == 0.0 {
        return Err(Error::NoCrossing);
    }
    if !(re_gamma.abs() < GAMMA_FREE) {
        return Err(Error::UnphysicalRate(re_gamma.abs()));
    }
    Ok(())
}

/// Time `t* > 0` where `I/I₀` returns to one: `2·artanh(R/Γ_free)/R`.
pub fn ratio_crossing_time(re_gamma: f64) -> Result<f64> {
    check_crossing_rate(re_gamma)?;
    Ok(2.0 * (re_gamma / GAMMA_FREE).atanh() / re_gamma)
}

/// The same crossing located by bisection on `I/I₀ − 1`.
pub fn ratio_crossing_time_root(re_gamma: f64) -> Result<f64> {
    check_crossing_rate(re_gamma)?;
    let f = |t: f64| emission_ratio(re_gamma, t) - 1.0;
    // The ratio dips below one (slope −R²) before recrossing; t* ≥ 2/Γ_free.
    let mut lo = 1.0 / GAMMA_FREE;
    let mut hi = 4.0 / GAMMA_FREE;
    while f(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoCrossing);
        }
    }
    if f(lo) >= 0.0 {
        return Err(Error::NoCrossing);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
