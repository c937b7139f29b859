use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use super::{ComplexRate, GeometryConfig};
use crate::error::{Error, Result};
use crate::quad::Quadrature;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!(
            "tolerance {tol} must be finite and > 0"
        )));
    }
    Ok(())
}

// One starting panel per half oscillation of e^{iξu} keeps the first
// Kronrod estimates meaningful at large ξ.
fn panels(xi: f64) -> usize {
    (xi / PI).ceil().max(1.0) as usize
}

/// Γ_mir^(ab) by adaptive quadrature of
/// `(3/16)·prefactor·∫₀¹ e^{iξu} [2 d1a d1b (1 − u²) + (d2a d2b + d3a d3b)(1 + u²)] du`,
/// integrating the real and imaginary parts separately.
pub fn gamma_ab_quadrature(cfg: &GeometryConfig, tol: f64) -> Result<ComplexRate> {
    cfg.validate()?;
    check_tol(tol)?;
    let xi = cfg.xi;
    let (normal, transverse) = cfg.dipole_products();
    let weight = |u: f64| 2.0 * normal * (1.0 - u * u) + transverse * (1.0 + u * u);

    let rule = Quadrature::with_tol(tol).initial_intervals(panels(xi));
    let re = rule.integrate(|u: f64| weight(u) * (xi * u).cos(), 0.0, 1.0)?;
    let im = rule.integrate(|u: f64| weight(u) * (xi * u).sin(), 0.0, 1.0)?;
    Ok((cfg.scale()? * Complex64::new(re.value, im.value)).into())
}

/// Propagation direction `s` and the two transverse polarisation vectors for
/// polar angle `theta` (from the mirror normal) and azimuth `phi`.
pub fn polarisation_vectors(theta: f64, phi: f64) -> [[f64; 3]; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [
        [ct, cp * st, sp * st],
        [0.0, sp, -cp],
        [st, -cp * ct, -sp * ct],
    ]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Γ_mir^(ab) from the full angular integral over the backward half-space,
/// `ϑ ∈ (π/2, π)`, `φ ∈ (0, 2π)`, summing explicitly over both polarisations.
///
/// Both integrals are done numerically (nested adaptive quadrature), so this
/// shares nothing with the closed form or [`gamma_ab_quadrature`] beyond the
/// geometry. Normalised by `3·prefactor/(16π)` so that the φ integral reduces
/// to the one-dimensional form.
pub fn gamma_ab_angular(cfg: &GeometryConfig, tol: f64) -> Result<ComplexRate> {
    cfg.validate()?;
    check_tol(tol)?;
    let xi = cfg.xi;
    let da = cfg.dipole_a.components();
    let db = cfg.dipole_b.components();

    let inner_rule = Quadrature::with_tol(tol * 0.1).initial_intervals(4);
    let outer_rule = Quadrature::with_tol(tol).initial_intervals(panels(xi));
    let failure: RefCell<Option<Error>> = RefCell::new(None);

    let azimuthal = |theta: f64| -> f64 {
        let integrand = |phi: f64| {
            let [_, e1, e2] = polarisation_vectors(theta, phi);
            dot(&da, &e1) * dot(&db, &e1) + dot(&da, &e2) * dot(&db, &e2)
        };
        match inner_rule.integrate(integrand, 0.0, TAU) {
            Ok(r) => r.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    let outer = outer_rule.integrate(
        |theta: f64| {
            let (st, ct) = theta.sin_cos();
            Complex64::from_polar(st * azimuthal(theta), -xi * ct)
        },
        FRAC_PI_2,
        PI,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let scale = cfg.scale()? / PI;
    Ok((scale * outer.value).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{gamma_ab_closed, DipoleOrientation, MirrorSpec};

    fn cfg(xi: f64, a: [f64; 3], b: [f64; 3], coupling: f64) -> GeometryConfig {
        GeometryConfig::new(
            xi,
            DipoleOrientation::new(a[0], a[1], a[2]).unwrap(),
            DipoleOrientation::new(b[0], b[1], b[2]).unwrap(),
            MirrorSpec::from_coupling(coupling).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn polarisation_basis_is_orthonormal() {
        for &(t, p) in &[(1.7, 0.3), (2.9, 4.1), (PI, 0.0), (FRAC_PI_2 + 0.01, 6.0)] {
            let [s, e1, e2] = polarisation_vectors(t, p);
            for v in [&s, &e1, &e2] {
                assert!((dot(v, v) - 1.0).abs() < 1e-14);
            }
            assert!(dot(&s, &e1).abs() < 1e-14);
            assert!(dot(&s, &e2).abs() < 1e-14);
            assert!(dot(&e1, &e2).abs() < 1e-14);
        }
    }

    #[test]
    fn quadrature_matches_closed_at_two_pi() {
        let c = cfg(TAU, [0.0, 1.0, 0.0], [0.0, 1.0, 0.0], 0.5);
        let q = gamma_ab_quadrature(&c, 1e-12).unwrap();
        let closed = gamma_ab_closed(&c).unwrap();
        assert!((q.as_complex() - closed.as_complex()).norm() < 1e-12);
        assert!((q.im + 0.014921).abs() < 1e-6);
    }

    #[test]
    fn angular_matches_closed_for_normal_dipoles() {
        let c = cfg(PI, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 0.8);
        let a = gamma_ab_angular(&c, 1e-11).unwrap();
        let closed = gamma_ab_closed(&c).unwrap();
        assert!((a.as_complex() - closed.as_complex()).norm() < 1e-10);
    }

    #[test]
    fn large_xi_is_bounded() {
        let c = cfg(50.0, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 0.6);
        let q = gamma_ab_quadrature(&c, 1e-10).unwrap();
        assert!(q.norm() <= 0.375 * 0.6);
    }

    #[test]
    fn zero_coupling_gives_zero() {
        let c = cfg(2.0, [0.2, 0.3, 0.4], [0.9, 0.0, 0.1], 0.0);
        assert_eq!(gamma_ab_quadrature(&c, 1e-10).unwrap().norm(), 0.0);
        assert_eq!(gamma_ab_angular(&c, 1e-10).unwrap().norm(), 0.0);
    }

    #[test]
    fn bad_tolerance() {
        let c = cfg(2.0, [0.0, 1.0, 0.0], [0.0, 1.0, 0.0], 0.5);
        assert!(matches!(
            gamma_ab_quadrature(&c, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(gamma_ab_angular(&c, f64::NAN).is_err());
    }
}
