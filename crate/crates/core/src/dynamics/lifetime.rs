//! Closed-form no-emission probability and emission rates for two atoms
//! prepared incoherently, each excited with probability `p`.

use crate::rates::{ComplexRate, GAMMA_FREE};

/// No-emission probability `P₀(t)`:
/// `(1−p)² + (1−p)p(e^{−Γ₊t} + e^{−Γ₋t}) + p² e^{−2Γ_free t}`.
pub fn survival_probability(p: f64, gamma_ab: ComplexRate, t: f64) -> f64 {
    let (gp, gm) = rates(gamma_ab);
    let q = 1.0 - p;
    q * q + q * p * ((-gp * t).exp() + (-gm * t).exp()) + p * p * (-2.0 * GAMMA_FREE * t).exp()
}

/// First-photon density `w₁(t) = −dP₀/dt`, exact.
pub fn first_emission_density(p: f64, gamma_ab: ComplexRate, t: f64) -> f64 {
    let (gp, gm) = rates(gamma_ab);
    (1.0 - p) * p * (gp * (-gp * t).exp() + gm * (-gm * t).exp())
        + 2.0 * p * p * GAMMA_FREE * (-2.0 * GAMMA_FREE * t).exp()
}

/// Photon emission rate to first order in `p`:
/// `I(t) = 2p[Γ_free cosh(Rt) − R sinh(Rt)] e^{−Γ_free t}` with `R = Re Γ_mir^(ab)`.
pub fn emission_rate(p: f64, gamma_ab: ComplexRate, t: f64) -> f64 {
    let r = gamma_ab.re;
    2.0 * p * (GAMMA_FREE * (r * t).cosh() - r * (r * t).sinh()) * (-GAMMA_FREE * t).exp()
}

/// `I(t)/I₀(t) = cosh(Rt) − (R/Γ_free) sinh(Rt)`, independent of `p`.
pub fn emission_ratio(re_gamma: f64, t: f64) -> f64 {
    (re_gamma * t).cosh() - re_gamma / GAMMA_FREE * (re_gamma * t).sinh()
}

fn rates(gamma_ab: ComplexRate) -> (f64, f64) {
    (GAMMA_FREE + gamma_ab.re, GAMMA_FREE - gamma_ab.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: ComplexRate = ComplexRate { re: 0.05, im: 0.0 };

    #[test]
    fn survival_edge_values() {
        for p in [0.0, 0.1, 0.5, 1.0] {
            assert!((survival_probability(p, R, 0.0) - 1.0).abs() < 1e-15);
        }
        for t in [0.0, 1.0, 10.0] {
            assert_eq!(survival_probability(0.0, R, t), 1.0);
        }
        let v = survival_probability(1.0, ComplexRate::new(0.3, 0.2), 1.0);
        assert!((v - (-2.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.13534).abs() < 1e-5);
    }

    #[test]
    fn density_is_derivative_of_survival() {
        // centred finite differences, h = 1e-4: truncation ~ h²·|P₀'''|/6
        let h = 1e-4;
        for p in [0.05, 0.3, 0.9] {
            for k in 1..40 {
                let t = 0.25 * k as f64;
                let fd = -(survival_probability(p, R, t + h) - survival_probability(p, R, t - h))
                    / (2.0 * h);
                assert!(
                    (fd - first_emission_density(p, R, t)).abs() < 1e-8,
                    "p={p} t={t}"
                );
            }
        }
        assert_eq!(first_emission_density(0.0, R, 1.0), 0.0);
    }

    #[test]
    fn emission_rate_limits() {
        assert!((emission_rate(0.1, R, 0.0) - 0.2).abs() < 1e-16);
        let free = ComplexRate::ZERO;
        for t in [0.5, 2.0, 7.0] {
            assert!((emission_rate(0.1, free, t) - 0.2 * (-t).exp()).abs() < 1e-16);
        }
    }

    #[test]
    fn first_order_remainder_bound() {
        let p = 0.01;
        let sup = (0..=2000)
            .map(|k| {
                let t = 0.01 * k as f64;
                (emission_rate(p, R, t) - first_emission_density(p, R, t)).abs()
            })
            .fold(0.0, f64::max);
        assert!(sup <= 4.0 * p * p);
    }

    #[test]
    fn ratio_is_i_over_i0() {
        for t in [0.0, 0.7, 3.0] {
            let ratio = emission_rate(0.2, R, t) / emission_rate(0.2, ComplexRate::ZERO, t);
            assert!((ratio - emission_ratio(0.05, t)).abs() < 1e-14);
        }
    }
}
