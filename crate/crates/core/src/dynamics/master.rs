use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::generator::{unvectorize, vectorize, LindbladGenerator};
use super::state::{collective_populations, plus_minus_coherence, DensityMatrix4, Matrix4c};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::timeseries::{TimeGrid, TimeSeries};

/// Density matrices on the grid, propagated with the exact exponential of
/// the superoperator (one exponential per distinct step length).
pub fn evolve_master_states(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix4,
    grid: &TimeGrid,
) -> Result<Vec<Matrix4c>> {
    let times = grid.times();
    let mut cache: HashMap<u64, DMatrix<Complex64>> = HashMap::new();
    let mut v = vectorize(rho0.matrix());
    let mut out = Vec::with_capacity(times.len());
    out.push(*rho0.matrix());
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        let step = match cache.get(&dt.to_bits()) {
            Some(p) => p,
            None => {
                let p = expm(&(gen.superoperator() * Complex64::new(dt, 0.0)))?;
                cache.entry(dt.to_bits()).or_insert(p)
            }
        };
        v = step * v;
        let rho = unvectorize(&v);
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Integration(format!(
                "non-finite state at t = {}",
                w[1]
            )));
        }
        out.push(rho);
    }
    Ok(out)
}

/// Master-equation evolution with channels `pop_11`, `pop_plus`,
/// `pop_minus`, `pop_22`, `coh_pm_re`, `coh_pm_im` (⟨+|ρ|−⟩) and `trace`.
pub fn evolve_master(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix4,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let states = evolve_master_states(gen, rho0, grid)?;
    let mut pops: [Vec<f64>; 4] = Default::default();
    let mut coh_re = Vec::with_capacity(states.len());
    let mut coh_im = Vec::with_capacity(states.len());
    let mut trace = Vec::with_capacity(states.len());
    for rho in &states {
        let p = collective_populations(rho);
        for k in 0..4 {
            pops[k].push(p[k]);
        }
        let coh = plus_minus_coherence(rho);
        coh_re.push(coh.re);
        coh_im.push(coh.im);
        trace.push(rho.trace().re);
    }
    let [p11, pp, pm, p22] = pops;
    let mut ts = TimeSeries::new(grid.times().to_vec());
    ts.push("pop_11", p11, None);
    ts.push("pop_plus", pp, None);
    ts.push("pop_minus", pm, None);
    ts.push("pop_22", p22, None);
    ts.push("coh_pm_re", coh_re, None);
    ts.push("coh_pm_im", coh_im, None);
    ts.push("trace", trace, None);
    Ok(ts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_generator, InitialState};
    use crate::rates::ComplexRate;

    #[test]
    fn ground_state_is_stationary() {
        let g = build_generator(ComplexRate::new(0.05, 0.01)).unwrap();
        let rho0 = InitialState::Ground.density_matrix().unwrap();
        let grid = TimeGrid::uniform(5.0, 20).unwrap();
        for rho in evolve_master_states(&g, &rho0, &grid).unwrap() {
            assert!((rho - rho0.matrix()).norm() < 1e-15);
        }
    }

    #[test]
    fn plus_state_decays_at_gamma_plus() {
        let g = build_generator(ComplexRate::new(0.05, 0.0)).unwrap();
        let rho0 = InitialState::Plus.density_matrix().unwrap();
        let grid = TimeGrid::uniform(5.0, 50).unwrap();
        let ts = evolve_master(&g, &rho0, &grid).unwrap();
        for (t, p) in ts.times.iter().zip(ts.values("pop_plus").unwrap()) {
            assert!((p - (-1.05 * t).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn doubly_excited_decays_at_twice_gamma_free() {
        let g = build_generator(ComplexRate::new(0.2, -0.1)).unwrap();
        let rho0 = InitialState::DoublyExcited.density_matrix().unwrap();
        let grid = TimeGrid::uniform(3.0, 30).unwrap();
        let ts = evolve_master(&g, &rho0, &grid).unwrap();
        for (t, p) in ts.times.iter().zip(ts.values("pop_22").unwrap()) {
            assert!((p - (-2.0 * t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn level_shift_rotates_coherence() {
        // ⟨+|ρ|−⟩ = ½ e^{−(Γ₊+Γ₋)t/2} e^{−iΔt} for ρ₀ = |12⟩⟨12|
        let delta = 0.3;
        let g = build_generator(ComplexRate::new(0.05, delta)).unwrap();
        let mut m = Matrix4c::zeros();
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        let rho0 = DensityMatrix4::new(m).unwrap();
        let grid = TimeGrid::uniform(4.0, 40).unwrap();
        let ts = evolve_master(&g, &rho0, &grid).unwrap();
        let re = ts.values("coh_pm_re").unwrap();
        let im = ts.values("coh_pm_im").unwrap();
        for (k, t) in ts.times.iter().enumerate() {
            let expect = Complex64::from_polar(0.5 * (-t).exp(), -delta * t);
            assert!(
                (Complex64::new(re[k], im[k]) - expect).norm() < 1e-12,
                "t={t}"
            );
        }
    }

    #[test]
    fn irregular_grid() {
        let g = build_generator(ComplexRate::new(-0.1, 0.0)).unwrap();
        let rho0 = InitialState::Minus.density_matrix().unwrap();
        let grid = TimeGrid::new(vec![0.0, 0.01, 0.5, 0.51, 3.0]).unwrap();
        let ts = evolve_master(&g, &rho0, &grid).unwrap();
        for (t, p) in ts.times.iter().zip(ts.values("pop_minus").unwrap()) {
            assert!((p - (-1.1 * t).exp()).abs() < 1e-12);
        }
    }
}
