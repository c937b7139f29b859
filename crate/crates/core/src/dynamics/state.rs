use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix4c = Matrix4<Complex64>;
pub type Vector4c = Vector4<Complex64>;

/// Product-basis indices: `|ij⟩` has atom a in `|i⟩` and atom b in `|j⟩`,
/// with `|1⟩` the ground and `|2⟩` the excited state.
pub const STATE_11: usize = 0;
pub const STATE_12: usize = 1;
pub const STATE_21: usize = 2;
pub const STATE_22: usize = 3;

/// Collective-basis indices, ordered `|11⟩, |+⟩, |−⟩, |22⟩`.
pub const COLLECTIVE_11: usize = 0;
pub const COLLECTIVE_PLUS: usize = 1;
pub const COLLECTIVE_MINUS: usize = 2;
pub const COLLECTIVE_22: usize = 3;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Lowering operator of atom a, `|1⟩⟨2| ⊗ 1`.
pub fn sigma_a() -> Matrix4c {
    let mut m = Matrix4c::zeros();
    m[(STATE_11, STATE_21)] = c(1.0);
    m[(STATE_12, STATE_22)] = c(1.0);
    m
}

/// Lowering operator of atom b, `1 ⊗ |1⟩⟨2|`.
pub fn sigma_b() -> Matrix4c {
    let mut m = Matrix4c::zeros();
    m[(STATE_11, STATE_12)] = c(1.0);
    m[(STATE_21, STATE_22)] = c(1.0);
    m
}

/// Unitary whose columns are `|11⟩, |+⟩, |−⟩, |22⟩` in the product basis,
/// with `|±⟩ = (|12⟩ ± |21⟩)/√2`.
#[rustfmt::skip]
pub fn collective_basis() -> Matrix4c {
    let h = FRAC_1_SQRT_2;
    Matrix4c::new(
        c(1.0), c(0.0), c(0.0), c(0.0),
        c(0.0), c(h), c(h), c(0.0),
        c(0.0), c(h), c(-h), c(0.0),
        c(0.0), c(0.0), c(0.0), c(1.0),
    )
}

/// Product-basis vector of the `k`-th collective state.
pub fn collective_state(k: usize) -> Vector4c {
    collective_basis().column(k).into_owned()
}

pub fn basis_state(k: usize) -> Vector4c {
    let mut v = Vector4c::zeros();
    v[k] = c(1.0);
    v
}

/// Two-atom density matrix over `|11⟩, |12⟩, |21⟩, |22⟩`: Hermitian, unit
/// trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    m: Matrix4c,
}

impl DensityMatrix4 {
    pub fn new(m: Matrix4c) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain(
                "density matrix has a non-finite entry".into(),
            ));
        }
        let asym = (m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > HERMITIAN_TOL {
            return Err(Error::Constraint(format!(
                "density matrix must be Hermitian (deviation {asym:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Constraint(format!(
                "density matrix trace must be 1 (got {tr})"
            )));
        }
        let rho = Self { m };
        let lowest = rho.min_eigenvalue();
        if lowest < -POSITIVITY_TOL {
            return Err(Error::Constraint(format!(
                "density matrix must be positive semidefinite (eigenvalue {lowest:e})"
            )));
        }
        Ok(rho)
    }

    pub fn from_pure(psi: &Vector4c) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("state vector cannot be normalised".into()));
        }
        let psi = psi / c(norm);
        Self::new(psi * psi.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.m)
    }

    /// Populations of `|11⟩, |+⟩, |−⟩, |22⟩`.
    pub fn collective_populations(&self) -> [f64; 4] {
        collective_populations(&self.m)
    }
}

/// Diagonal of `B† m B` in the collective basis (real parts).
pub fn collective_populations(m: &Matrix4c) -> [f64; 4] {
    let b = collective_basis();
    let t = b.adjoint() * m * b;
    [t[(0, 0)].re, t[(1, 1)].re, t[(2, 2)].re, t[(3, 3)].re]
}

/// `⟨+| m |−⟩`.
pub fn plus_minus_coherence(m: &Matrix4c) -> Complex64 {
    let b = collective_basis();
    (b.adjoint() * m * b)[(COLLECTIVE_PLUS, COLLECTIVE_MINUS)]
}

pub(crate) fn min_hermitian_eigenvalue(m: &Matrix4c) -> f64 {
    let herm = (m + m.adjoint()) * c(0.5);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Initial preparations of the atom pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Plus,
    Minus,
    DoublyExcited,
    Ground,
    /// Each atom independently excited with probability `p`.
    ProductMixture(f64),
}

impl InitialState {
    pub fn validate(&self) -> Result<()> {
        if let InitialState::ProductMixture(p) = *self {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!(
                    "excitation probability p = {p} must lie in [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Incoherent decomposition into pure states with their weights.
    pub fn pure_components(&self) -> Result<Vec<(f64, Vector4c)>> {
        self.validate()?;
        Ok(match *self {
            InitialState::Plus => vec![(1.0, collective_state(COLLECTIVE_PLUS))],
            InitialState::Minus => vec![(1.0, collective_state(COLLECTIVE_MINUS))],
            InitialState::DoublyExcited => vec![(1.0, basis_state(STATE_22))],
            InitialState::Ground => vec![(1.0, basis_state(STATE_11))],
            InitialState::ProductMixture(p) => vec![
                ((1.0 - p) * (1.0 - p), basis_state(STATE_11)),
                ((1.0 - p) * p, basis_state(STATE_12)),
                (p * (1.0 - p), basis_state(STATE_21)),
                (p * p, basis_state(STATE_22)),
            ],
        })
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix4> {
        let m = self
            .pure_components()?
            .into_iter()
            .fold(Matrix4c::zeros(), |acc, (w, psi)| {
                acc + psi * psi.adjoint() * c(w)
            });
        DensityMatrix4::new(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collective_basis_is_unitary() {
        let b = collective_basis();
        let id = b.adjoint() * b;
        assert!((id - Matrix4c::identity()).norm() < 1e-15);
    }

    #[test]
    fn product_mixture_diagonal() {
        let p = 0.3;
        let rho = InitialState::ProductMixture(p).density_matrix().unwrap();
        let m = rho.matrix();
        let expect = [(1.0 - p) * (1.0 - p), p * (1.0 - p), p * (1.0 - p), p * p];
        for k in 0..4 {
            assert!((m[(k, k)].re - expect[k]).abs() < 1e-15);
        }
        assert!(InitialState::ProductMixture(1.5).density_matrix().is_err());
        assert!(InitialState::ProductMixture(-0.1).density_matrix().is_err());
    }

    #[test]
    fn collective_populations_of_plus() {
        let rho = InitialState::Plus.density_matrix().unwrap();
        let pops = rho.collective_populations();
        assert!((pops[COLLECTIVE_PLUS] - 1.0).abs() < 1e-15);
        assert!(pops[COLLECTIVE_MINUS].abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = Matrix4c::zeros();
        m[(0, 0)] = c(0.5);
        assert!(DensityMatrix4::new(m).is_err());
        m[(1, 1)] = c(0.5);
        m[(0, 1)] = Complex64::new(0.0, 0.2);
        assert!(DensityMatrix4::new(m).is_err());
        m[(1, 0)] = Complex64::new(0.0, -0.2);
        assert!(DensityMatrix4::new(m).is_ok());
        // off-diagonal too large for positivity
        m[(0, 1)] = c(0.9);
        m[(1, 0)] = c(0.9);
        assert!(DensityMatrix4::new(m).is_err());
    }
}
