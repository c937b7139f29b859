mod common;

use common::{geometry, unit};
use mirror_dd::dynamics::{
    build_generator, emission_rate, evolve_master_states, survival_probability, DensityMatrix4,
    InitialState,
};
use mirror_dd::rates::{coupling_prefactor, gamma_ab, MirrorSpec};
use mirror_dd::{ComplexRate, TimeGrid};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn direction() -> impl Strategy<Value = [f64; 3]> {
    (0.0..PI, 0.0..2.0 * PI)
        .prop_map(|(th, ph)| unit([th.cos(), th.sin() * ph.cos(), th.sin() * ph.sin()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn swapping_atoms_leaves_rate_unchanged(xi in 1e-3..300.0f64, da in direction(), db in direction(), c in 0.0..=1.0f64) {
        let cfg = geometry(xi, da, db, c);
        let g = gamma_ab(&cfg).unwrap();
        let s = gamma_ab(&cfg.swapped()).unwrap();
        prop_assert!((g.as_complex() - s.as_complex()).norm() < 1e-15);
    }

    #[test]
    fn rate_is_bounded_and_decays(xi in 1e-3..500.0f64, da in direction(), db in direction(), c in 0.0..=1.0f64) {
        let g = gamma_ab(&geometry(xi, da, db, c)).unwrap().norm();
        prop_assert!(g <= 0.25 * c + 1e-12);
        prop_assert!(g <= 0.75 * c / xi + 1e-12);
    }

    #[test]
    fn rate_is_linear_in_coupling(xi in 1e-3..50.0f64, da in direction(), db in direction(), c in 0.01..=1.0f64) {
        let full = gamma_ab(&geometry(xi, da, db, 1.0)).unwrap().as_complex();
        let part = gamma_ab(&geometry(xi, da, db, c)).unwrap().as_complex();
        prop_assert!((part - full * c).norm() < 1e-14);
    }

    #[test]
    fn symmetric_mirror_has_no_cross_coupling(
        r in 0.0..=1.0f64, alpha in 0.0..2.0 * PI, beta in 0.0..2.0 * PI, gamma in 0.0..2.0 * PI,
    ) {
        let t = (1.0 - r * r).sqrt();
        let delta = gamma + beta - alpha + PI;
        let spec = MirrorSpec::Symmetric {
            r_a: Complex64::from_polar(r, alpha),
            t_a: Complex64::from_polar(t, beta),
            r_b: Complex64::from_polar(r, delta),
            t_b: Complex64::from_polar(t, gamma),
        };
        prop_assert!(coupling_prefactor(&spec).unwrap().norm() < 1e-12);
    }

    #[test]
    fn master_evolution_stays_physical(re in -0.99..0.99f64, delta in -2.0..2.0f64, p in 0.0..=1.0f64) {
        let gen = build_generator(ComplexRate::new(re, delta)).unwrap();
        let rho0 = InitialState::ProductMixture(p).density_matrix().unwrap();
        let grid = TimeGrid::uniform(6.0, 12).unwrap();
        for rho in evolve_master_states(&gen, &rho0, &grid).unwrap() {
            prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            let m = DensityMatrix4::new(rho);
            prop_assert!(m.is_ok(), "{:?}", m.err());
        }
    }

    #[test]
    fn survival_is_monotone_and_rate_nonnegative(re in -0.99..0.99f64, p in 0.0..=1.0f64, t in 0.0..20.0f64) {
        let g = ComplexRate::new(re, 0.0);
        prop_assert!(emission_rate(p, g, t) >= -1e-15);
        prop_assert!(survival_probability(p, g, t + 0.1) <= survival_probability(p, g, t) + 1e-15);
    }
}
