use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical constraint on the input is violated.
    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e} after {intervals} subintervals")]
    Convergence {
        estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("unphysical rate: |Re(gamma_ab)| = {0} must be < 1 (units of gamma_free)")]
    UnphysicalRate(f64),

    #[error("integration failure: {0}")]
    Integration(String),

    #[error("ratio I/I0 never crosses 1 when Re(gamma_ab) = 0")]
    NoCrossing,
}
