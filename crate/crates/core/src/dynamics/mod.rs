//! Two-atom open-system dynamics: Lindblad generator, master-equation and
//! conditional evolution, closed-form lifetime observables and quantum-jump
//! Monte Carlo.

mod conditional;
mod generator;
mod lifetime;
mod master;
mod mc;
mod state;

pub use conditional::{conditional_propagator, evolve_conditional, evolve_conditional_states};
pub use generator::{build_generator, LindbladGenerator};
pub use lifetime::{emission_rate, emission_ratio, first_emission_density, survival_probability};
pub use master::{evolve_master, evolve_master_states};
pub use mc::{mc_trajectories, mc_trajectories_with, trajectory_rng, MC_CHANNELS};
pub use state::{
    basis_state, collective_basis, collective_populations, collective_state, plus_minus_coherence,
    sigma_a, sigma_b, DensityMatrix4, InitialState, Matrix4c, Vector4c, COLLECTIVE_11,
    COLLECTIVE_22, COLLECTIVE_MINUS, COLLECTIVE_PLUS, STATE_11, STATE_12, STATE_21, STATE_22,
};
