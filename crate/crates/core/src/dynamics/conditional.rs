use num_complex::Complex64;

use super::generator::LindbladGenerator;
use super::state::{collective_basis, collective_populations, DensityMatrix4, Matrix4c};
use crate::error::Result;
use crate::timeseries::{TimeGrid, TimeSeries};

/// No-jump propagator `U_cond(t) = exp(−i H_cond t)`, evaluated from the
/// diagonal form of `H_cond` in the collective basis.
pub fn conditional_propagator(gen: &LindbladGenerator, t: f64) -> Matrix4c {
    let b = collective_basis();
    let ev = gen.collective_eigenvalues();
    let diag = Matrix4c::from_diagonal(&nalgebra::Vector4::from_fn(|k, _| {
        (ev[k] * Complex64::new(0.0, -t)).exp()
    }));
    b * diag * b.adjoint()
}

/// Unnormalised conditional states `U ρ₀ U†` on the grid.
pub fn evolve_conditional_states(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix4,
    grid: &TimeGrid,
) -> Vec<Matrix4c> {
    grid.times()
        .iter()
        .map(|&t| {
            let u = conditional_propagator(gen, t);
            u * rho0.matrix() * u.adjoint()
        })
        .collect()
}

/// Evolution conditioned on no photon emission. Channel `p0` is the squared
/// norm (trace) of the conditional state, the no-emission probability; the
/// `pop_*` channels are the unnormalised collective populations.
pub fn evolve_conditional(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix4,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let states = evolve_conditional_states(gen, rho0, grid);
    let mut p0 = Vec::with_capacity(states.len());
    let mut pops: [Vec<f64>; 4] = Default::default();
    for m in &states {
        p0.push(m.trace().re);
        let p = collective_populations(m);
        for k in 0..4 {
            pops[k].push(p[k]);
        }
    }
    let [p11, pp, pm, p22] = pops;
    let mut ts = TimeSeries::new(grid.times().to_vec());
    ts.push("p0", p0, None);
    ts.push("pop_11", p11, None);
    ts.push("pop_plus", pp, None);
    ts.push("pop_minus", pm, None);
    ts.push("pop_22", p22, None);
    Ok(ts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_generator, InitialState};
    use crate::expm::expm;
    use crate::rates::ComplexRate;
    use nalgebra::DMatrix;

    #[test]
    fn propagator_matches_matrix_exponential() {
        let g = build_generator(ComplexRate::new(0.07, -0.2)).unwrap();
        let t = 1.7;
        let h = DMatrix::from_column_slice(4, 4, g.h_cond().as_slice());
        let e = expm(&(h * Complex64::new(0.0, -t))).unwrap();
        let u = conditional_propagator(&g, t);
        let diff = (DMatrix::from_column_slice(4, 4, u.as_slice()) - e).norm();
        assert!(diff < 1e-14);
    }

    #[test]
    fn ground_norm_is_one() {
        let g = build_generator(ComplexRate::new(0.05, 0.0)).unwrap();
        let rho0 = InitialState::Ground.density_matrix().unwrap();
        let ts = evolve_conditional(&g, &rho0, &TimeGrid::uniform(10.0, 10).unwrap()).unwrap();
        assert!(ts.values("p0").unwrap().iter().all(|&p| p == 1.0));
    }

    #[test]
    fn minus_norm_decays_at_gamma_minus() {
        let g = build_generator(ComplexRate::new(0.05, 0.0)).unwrap();
        let rho0 = InitialState::Minus.density_matrix().unwrap();
        let ts = evolve_conditional(&g, &rho0, &TimeGrid::uniform(5.0, 25).unwrap()).unwrap();
        for (t, p) in ts.times.iter().zip(ts.values("p0").unwrap()) {
            assert!((p - (-0.95 * t).exp()).abs() < 1e-14);
        }
    }
}
