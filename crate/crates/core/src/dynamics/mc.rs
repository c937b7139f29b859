//! Quantum-jump Monte Carlo unravelling of the two-atom master equation.
//!
//! Each trajectory is a pure state in the collective basis, where `H_cond`
//! is diagonal, so no-jump propagation is a product of exponentials. Jump
//! times come from inverting the squared-norm decay (bisection), the channel
//! from `Γ± ‖L± ψ‖²`.
//!
//! Trajectory `i` draws from its own ChaCha8 stream `(seed, i)`, and
//! trajectories are reduced in fixed-size blocks combined in index order, so
//! output is bit-identical for any number of worker threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generator::LindbladGenerator;
use super::state::{collective_basis, InitialState, Matrix4c, Vector4c};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::timeseries::{TimeGrid, TimeSeries};

/// Trajectories per reduction block. Fixed so the summation order does not
/// depend on the scheduler.
const BLOCK: usize = 64;
const BISECTION_STEPS: usize = 200;

/// Channels in output order; each is reported with its standard error.
pub const MC_CHANNELS: [&str; 5] = ["pop_11", "pop_plus", "pop_minus", "pop_22", "p0"];
const N_CH: usize = MC_CHANNELS.len();

/// Random stream of trajectory `index` under `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

struct Propagation {
    /// `i·λ_k`: amplitude k evolves as `e^{−i λ_k t}`.
    exponents: [Complex64; 4],
    jumps: [(f64, Matrix4c); 2],
}

impl Propagation {
    fn new(gen: &LindbladGenerator) -> Self {
        let b = collective_basis();
        let ev = gen.collective_eigenvalues();
        let jumps = gen
            .jump_channels()
            .map(|(rate, l)| (rate, b.adjoint() * l * b));
        Self {
            exponents: ev.map(|e| e * Complex64::i()),
            jumps,
        }
    }

    fn evolve(&self, psi: &Vector4c, dt: f64) -> Vector4c {
        Vector4c::from_fn(|k, _| psi[k] * (-self.exponents[k] * dt).exp())
    }

    fn norm_sqr_after(&self, psi: &Vector4c, dt: f64) -> f64 {
        (0..4)
            .map(|k| psi[k].norm_sqr() * (-2.0 * self.exponents[k].re * dt).exp())
            .sum()
    }

    /// Time `τ ∈ (0, horizon]` at which the squared norm reaches `target`.
    fn jump_time(&self, psi: &Vector4c, target: f64, horizon: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, horizon);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.norm_sqr_after(psi, mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

fn normalized(psi: Vector4c) -> Vector4c {
    let n = psi.norm();
    psi / Complex64::new(n, 0.0)
}

/// Per-grid-point sums and sums of squares for every channel.
#[derive(Clone)]
struct Accumulator {
    sum: Vec<[f64; N_CH]>,
    sum_sq: Vec<[f64; N_CH]>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Self {
            sum: vec![[0.0; N_CH]; n],
            sum_sq: vec![[0.0; N_CH]; n],
        }
    }

    fn add(&mut self, k: usize, sample: &[f64; N_CH]) {
        for (c, &x) in sample.iter().enumerate() {
            self.sum[k][c] += x;
            self.sum_sq[k][c] += x * x;
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        for k in 0..self.sum.len() {
            for c in 0..N_CH {
                self.sum[k][c] += other.sum[k][c];
                self.sum_sq[k][c] += other.sum_sq[k][c];
            }
        }
    }
}

fn sample_initial(
    components: &[(f64, Vector4c)],
    b_adj: &Matrix4c,
    rng: &mut ChaCha8Rng,
) -> Vector4c {
    let psi = if components.len() == 1 {
        components[0].1
    } else {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = components[components.len() - 1].1;
        for (w, psi) in components {
            acc += w;
            if u < acc {
                chosen = *psi;
                break;
            }
        }
        chosen
    };
    normalized(b_adj * psi)
}

fn run_trajectory(
    prop: &Propagation,
    psi0: Vector4c,
    times: &[f64],
    rng: &mut ChaCha8Rng,
    acc: &mut Accumulator,
) {
    let mut psi = psi0;
    let mut t_ref = 0.0;
    let mut target: f64 = rng.random();
    let mut jumped = false;

    for (k, &t) in times.iter().enumerate() {
        loop {
            if prop.norm_sqr_after(&psi, t - t_ref) > target {
                break;
            }
            let tau = prop.jump_time(&psi, target, t - t_ref);
            let before = normalized(prop.evolve(&psi, tau));
            let weights = prop
                .jumps
                .map(|(rate, l)| rate * (l * before).norm_squared());
            let total = weights[0] + weights[1];
            if !(total > 0.0) {
                // No decay channel open: the norm cannot have dropped.
                break;
            }
            let pick: f64 = rng.random::<f64>() * total;
            let channel = if pick < weights[0] { 0 } else { 1 };
            psi = normalized(prop.jumps[channel].1 * before);
            t_ref += tau;
            target = rng.random();
            jumped = true;
        }
        let now = normalized(prop.evolve(&psi, t - t_ref));
        let mut sample = [0.0; N_CH];
        for c in 0..4 {
            sample[c] = now[c].norm_sqr();
        }
        sample[4] = if jumped { 0.0 } else { 1.0 };
        acc.add(k, &sample);
    }
}

/// Ensemble of `n_traj` quantum-jump trajectories.
///
/// Output channels are `pop_11`, `pop_plus`, `pop_minus`, `pop_22` (collective
/// populations) and `p0` (fraction of trajectories with no jump yet), each
/// with the standard error of the mean. Mixed initial states are sampled per
/// trajectory from their pure-state decomposition.
pub fn mc_trajectories(
    gen: &LindbladGenerator,
    initial: &InitialState,
    grid: &TimeGrid,
    n_traj: usize,
    seed: u64,
) -> Result<TimeSeries> {
    mc_trajectories_with(gen, initial, grid, n_traj, seed, Execution::default())
}

pub fn mc_trajectories_with(
    gen: &LindbladGenerator,
    initial: &InitialState,
    grid: &TimeGrid,
    n_traj: usize,
    seed: u64,
    exec: Execution,
) -> Result<TimeSeries> {
    if n_traj == 0 {
        return Err(Error::Domain("n_traj must be >= 1".into()));
    }
    let components = initial.pure_components()?;
    let prop = Propagation::new(gen);
    let b_adj = collective_basis().adjoint();
    let times = grid.times();
    let n_blocks = n_traj.div_ceil(BLOCK);

    let blocks = map_indexed(exec, n_blocks, |block| {
        let mut acc = Accumulator::new(times.len());
        let start = block * BLOCK;
        let end = (start + BLOCK).min(n_traj);
        for index in start..end {
            let mut rng = trajectory_rng(seed, index as u64);
            let psi0 = sample_initial(&components, &b_adj, &mut rng);
            run_trajectory(&prop, psi0, times, &mut rng, &mut acc);
        }
        acc
    });

    let mut total = Accumulator::new(times.len());
    for b in &blocks {
        total.merge(b);
    }

    let n = n_traj as f64;
    let mut ts = TimeSeries::new(times.to_vec());
    for (c, name) in MC_CHANNELS.iter().enumerate() {
        let mut mean = Vec::with_capacity(times.len());
        let mut se = Vec::with_capacity(times.len());
        for k in 0..times.len() {
            let m = total.sum[k][c] / n;
            mean.push(m);
            if n_traj > 1 {
                let var = ((total.sum_sq[k][c] - n * m * m) / (n - 1.0)).max(0.0);
                se.push((var / n).sqrt());
            } else {
                se.push(0.0);
            }
        }
        ts.push(name, mean, Some(se));
    }
    Ok(ts)
}
