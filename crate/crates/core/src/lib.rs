//! Mirror-mediated dipole-dipole coupling between two two-level atoms on
//! opposite sides of a partially transparent asymmetric mirror, and the
//! resulting two-atom open-system dynamics.
//!
//! * [`rates`]: the complex coupling Γ_mir^(ab) (closed form, series and two
//!   quadrature routes), collective decay rates and level shift.
//! * [`dynamics`]: master equation, conditional no-jump evolution, analytic
//!   lifetime formulas and quantum-jump Monte Carlo.
//! * [`experiments`]: ξ sweeps, lifetime curves and the I/I₀ crossing time.
//!
//! Units: Γ_free = 1, k₀ = 1.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod expm;
pub mod quad;
pub mod rates;
pub mod timeseries;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rates::{ComplexRate, DipoleOrientation, GeometryConfig, MirrorSpec};
pub use timeseries::{Channel, TimeGrid, TimeSeries};
