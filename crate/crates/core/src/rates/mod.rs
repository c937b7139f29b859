//! Mirror-mediated cross-coupling rate Γ_mir^(ab) between two atoms on
//! opposite sides of a partially transparent mirror.
//!
//! All rates are in units of the free-space decay rate Γ_free and distances in
//! units of 1/k₀. Three independent evaluation routes are provided:
//!
//! * [`gamma_ab_closed`] / [`gamma_ab_series`]: closed form, with a Maclaurin
//!   series below [`SERIES_THRESHOLD`] where the closed form cancels badly
//!   ([`gamma_ab`] picks the branch);
//! * [`gamma_ab_quadrature`]: adaptive quadrature of the one-dimensional
//!   integral over `u = −cos ϑ`;
//! * [`gamma_ab_angular`]: nested quadrature of the full angular integral with
//!   the explicit transverse polarisation vectors.

mod closed;
mod integral;
mod series;

pub use closed::gamma_ab_closed;
pub use integral::{gamma_ab_angular, gamma_ab_quadrature, polarisation_vectors};
pub use series::gamma_ab_series;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Free-space single-atom decay rate; the unit of every rate in this crate.
pub const GAMMA_FREE: f64 = 1.0;

/// Below or at this effective distance the series branch is used.
pub const SERIES_THRESHOLD: f64 = 0.5;

/// Default absolute and relative tolerance for the quadrature routes.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

const MIRROR_TOL: f64 = 1e-12;

/// Real unit vector along an atomic transition dipole. `d1` is the component
/// along the mirror normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleOrientation {
    d: [f64; 3],
}

impl DipoleOrientation {
    /// Normalises `(d1, d2, d3)`; fails for a zero or non-finite vector.
    pub fn new(d1: f64, d2: f64, d3: f64) -> Result<Self> {
        let norm = (d1 * d1 + d2 * d2 + d3 * d3).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Domain(format!(
                "dipole vector ({d1}, {d2}, {d3}) cannot be normalised"
            )));
        }
        Ok(Self {
            d: [d1 / norm, d2 / norm, d3 / norm],
        })
    }

    /// Dipole in the plane spanned by the mirror normal and ŷ with
    /// `|d̂·x̂| = normal_component`.
    pub fn from_normal_component(normal_component: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&normal_component) {
            return Err(Error::Domain(format!(
                "|d·x| = {normal_component} must lie in [0, 1]"
            )));
        }
        let transverse = (1.0 - normal_component * normal_component).max(0.0).sqrt();
        Self::new(normal_component, transverse, 0.0)
    }

    pub fn components(&self) -> [f64; 3] {
        self.d
    }

    pub fn normal(&self) -> f64 {
        self.d[0]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.d.iter().zip(&other.d).map(|(a, b)| a * b).sum()
    }
}

/// Reflection/transmission description of the mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MirrorSpec {
    /// Rough on one side: real averaged reflection rates with `t_i = 1 − r_i`.
    Asymmetric { r_a: f64, r_b: f64 },
    /// Smooth on both sides: complex amplitudes obeying the Stokes relations.
    Symmetric {
        r_a: Complex64,
        t_a: Complex64,
        r_b: Complex64,
        t_b: Complex64,
    },
}

impl MirrorSpec {
    /// Asymmetric mirror with the given `t_a·r_b` product (r_b = 1).
    pub fn from_coupling(coupling: f64) -> Result<Self> {
        let spec = MirrorSpec::Asymmetric {
            r_a: 1.0 - coupling,
            r_b: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Asymmetric mirror from the transmission of side a and reflection of side b.
    pub fn from_ta_rb(t_a: f64, r_b: f64) -> Result<Self> {
        let spec = MirrorSpec::Asymmetric {
            r_a: 1.0 - t_a,
            r_b,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MirrorSpec::Asymmetric { r_a, r_b } => {
                for (name, r) in [("r_a", r_a), ("r_b", r_b)] {
                    if !(0.0..=1.0).contains(&r) {
                        return Err(Error::Constraint(format!(
                            "0 <= {name} <= 1 (got {name} = {r})"
                        )));
                    }
                }
                Ok(())
            }
            MirrorSpec::Symmetric { r_a, t_a, r_b, t_b } => {
                for (side, r, t) in [("a", r_a, t_a), ("b", r_b, t_b)] {
                    let energy = r.norm_sqr() + t.norm_sqr();
                    if !energy.is_finite() || (energy - 1.0).abs() > MIRROR_TOL {
                        return Err(Error::Constraint(format!(
                            "|r_{side}|^2 + |t_{side}|^2 = 1 (got {energy})"
                        )));
                    }
                }
                let stokes = (r_a.conj() * t_b + t_a.conj() * r_b).norm();
                if stokes > MIRROR_TOL {
                    return Err(Error::Constraint(format!(
                        "r_a* t_b + t_a* r_b = 0 (got magnitude {stokes:e})"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Amplitude prefactor multiplying the mirror-mediated coupling.
///
/// `t_a·r_b` for an asymmetric mirror, `r_a*·t_b + t_a*·r_b` (zero by the
/// Stokes relations) for a symmetric one.
pub fn coupling_prefactor(mirror: &MirrorSpec) -> Result<Complex64> {
    mirror.validate()?;
    Ok(match *mirror {
        MirrorSpec::Asymmetric { r_a, r_b } => Complex64::new((1.0 - r_a) * r_b, 0.0),
        MirrorSpec::Symmetric { r_a, t_a, r_b, t_b } => r_a.conj() * t_b + t_a.conj() * r_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    /// Effective distance k₀(x_a + x_b) between atom a and the image of atom b.
    pub xi: f64,
    pub dipole_a: DipoleOrientation,
    pub dipole_b: DipoleOrientation,
    pub mirror: MirrorSpec,
}

impl GeometryConfig {
    pub fn new(
        xi: f64,
        dipole_a: DipoleOrientation,
        dipole_b: DipoleOrientation,
        mirror: MirrorSpec,
    ) -> Result<Self> {
        let cfg = Self {
            xi,
            dipole_a,
            dipole_b,
            mirror,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_xi(self.xi)?;
        self.mirror.validate()
    }

    /// `d1a·d1b` and `d2a·d2b + d3a·d3b`.
    pub(crate) fn dipole_products(&self) -> (f64, f64) {
        let a = self.dipole_a.components();
        let b = self.dipole_b.components();
        (a[0] * b[0], a[1] * b[1] + a[2] * b[2])
    }

    /// The overall factor `(3/16)·prefactor·Γ_free`.
    pub(crate) fn scale(&self) -> Result<Complex64> {
        Ok(coupling_prefactor(&self.mirror)? * (3.0 / 16.0 * GAMMA_FREE))
    }

    /// The same geometry with the dipoles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            dipole_a: self.dipole_b,
            dipole_b: self.dipole_a,
            ..*self
        }
    }
}

pub(crate) fn check_xi(xi: f64) -> Result<()> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi = {xi} must be finite and > 0")));
    }
    Ok(())
}

/// A complex rate in units of Γ_free. The real part modifies collective decay
/// rates; the imaginary part is the level shift Δ_mir.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexRate {
    pub re: f64,
    pub im: f64,
}

impl ComplexRate {
    pub const ZERO: ComplexRate = ComplexRate { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Γ_mir^(ba) given Γ_mir^(ab).
    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm(&self) -> f64 {
        self.as_complex().norm()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<Complex64> for ComplexRate {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

/// Γ_mir^(ab) via the series branch for `xi <= SERIES_THRESHOLD` and the
/// closed form above it.
pub fn gamma_ab(cfg: &GeometryConfig) -> Result<ComplexRate> {
    if cfg.xi <= SERIES_THRESHOLD {
        gamma_ab_series(cfg)
    } else {
        gamma_ab_closed(cfg)
    }
}

/// Collective decay rates `(Γ₊, Γ₋) = Γ_free ± Re(Γ_mir^(ab))`.
pub fn collective_rates(gamma_ab: ComplexRate) -> Result<(f64, f64)> {
    let r = gamma_ab.re;
    if !(r.abs() < GAMMA_FREE) {
        return Err(Error::UnphysicalRate(r.abs()));
    }
    Ok((GAMMA_FREE + r, GAMMA_FREE - r))
}

/// Level shift Δ_mir = Im(Γ_mir^(ab)).
pub fn level_shift(gamma_ab: ComplexRate) -> f64 {
    gamma_ab.im
}
