use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{collective_basis, sigma_a, sigma_b, Matrix4c};
use crate::error::Result;
use crate::rates::{collective_rates, ComplexRate, GAMMA_FREE};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Generator of the two-atom master equation in the frame rotating at the
/// atomic transition frequency:
///
/// `ρ̇ = −i(H_cond ρ − ρ H_cond†) + Γ₊ L₊ρL₊† + Γ₋ L₋ρL₋†`
///
/// with `L± = (σ_a⁻ ± σ_b⁻)/√2`, `Γ± = Γ_free ± Re Γ_mir^(ab)` and
/// `H_cond = (Δ_mir/2)(σ_a⁺σ_b⁻ + σ_b⁺σ_a⁻) − (i/2)(Γ₊L₊†L₊ + Γ₋L₋†L₋)`.
/// The jump terms carry the `|22⟩ → |±⟩ → |11⟩` cascade.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    gamma_ab: ComplexRate,
    gamma_plus: f64,
    gamma_minus: f64,
    l_plus: Matrix4c,
    l_minus: Matrix4c,
    h_cond: Matrix4c,
    collective_eigenvalues: [Complex64; 4],
    superop: DMatrix<Complex64>,
}

/// Builds the generator for a given cross-coupling rate.
pub fn build_generator(gamma_ab: ComplexRate) -> Result<LindbladGenerator> {
    let (gamma_plus, gamma_minus) = collective_rates(gamma_ab)?;
    let sa = sigma_a();
    let sb = sigma_b();
    let l_plus = (sa + sb) * c(FRAC_1_SQRT_2);
    let l_minus = (sa - sb) * c(FRAC_1_SQRT_2);

    let exchange = sa.adjoint() * sb + sb.adjoint() * sa;
    let shift = exchange * c(0.5 * gamma_ab.im);
    let damping = (l_plus.adjoint() * l_plus) * c(gamma_plus)
        + (l_minus.adjoint() * l_minus) * c(gamma_minus);
    let h_cond = shift - damping * Complex64::new(0.0, 0.5);

    let b = collective_basis();
    let diag = b.adjoint() * h_cond * b;
    let collective_eigenvalues = [diag[(0, 0)], diag[(1, 1)], diag[(2, 2)], diag[(3, 3)]];

    let superop = superoperator(&h_cond, &[(gamma_plus, l_plus), (gamma_minus, l_minus)]);

    Ok(LindbladGenerator {
        gamma_ab,
        gamma_plus,
        gamma_minus,
        l_plus,
        l_minus,
        h_cond,
        collective_eigenvalues,
        superop,
    })
}

fn to_dynamic(m: &Matrix4c) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(4, 4, m.as_slice())
}

/// Column-stacking superoperator: `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
fn superoperator(h: &Matrix4c, jumps: &[(f64, Matrix4c)]) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(4, 4);
    let h = to_dynamic(h);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut s = id.kronecker(&h) * minus_i - h.map(|z| z.conj()).kronecker(&id) * minus_i;
    for (rate, l) in jumps {
        let l = to_dynamic(l);
        s += l.map(|z| z.conj()).kronecker(&l) * c(*rate);
    }
    s
}

pub(crate) fn vectorize(m: &Matrix4c) -> DVector<Complex64> {
    DVector::from_column_slice(m.as_slice())
}

pub(crate) fn unvectorize(v: &DVector<Complex64>) -> Matrix4c {
    Matrix4c::from_column_slice(v.as_slice())
}

impl LindbladGenerator {
    pub fn gamma_ab(&self) -> ComplexRate {
        self.gamma_ab
    }

    /// `(Γ₊, Γ₋)`.
    pub fn collective_rates(&self) -> (f64, f64) {
        (self.gamma_plus, self.gamma_minus)
    }

    /// Decay rate of `|22⟩`.
    pub fn doubly_excited_rate(&self) -> f64 {
        2.0 * GAMMA_FREE
    }

    pub fn level_shift(&self) -> f64 {
        self.gamma_ab.im
    }

    pub fn h_cond(&self) -> &Matrix4c {
        &self.h_cond
    }

    /// Jump channels `(rate, operator)` for `L₊` and `L₋`.
    pub fn jump_channels(&self) -> [(f64, Matrix4c); 2] {
        [
            (self.gamma_plus, self.l_plus),
            (self.gamma_minus, self.l_minus),
        ]
    }

    /// Eigenvalues of `H_cond` on `|11⟩, |+⟩, |−⟩, |22⟩`; `H_cond` is diagonal
    /// in that basis.
    pub fn collective_eigenvalues(&self) -> [Complex64; 4] {
        self.collective_eigenvalues
    }

    /// 16×16 column-stacking superoperator.
    pub fn superoperator(&self) -> &DMatrix<Complex64> {
        &self.superop
    }

    /// Applies the generator to an arbitrary 4×4 matrix.
    pub fn apply(&self, rho: &Matrix4c) -> Matrix4c {
        let i = Complex64::i();
        let mut out = (self.h_cond * rho - rho * self.h_cond.adjoint()) * (-i);
        for (rate, l) in self.jump_channels() {
            out += l * rho * l.adjoint() * c(rate);
        }
        out
    }
}
