use num_complex::Complex64;

use super::{ComplexRate, GeometryConfig};
use crate::error::Result;

/// Closed-form Γ_mir^(ab).
///
/// Exact for every `xi > 0`, but the `1/ξ`, `1/ξ²` and `1/ξ³` terms cancel
/// against each other as `xi → 0`; below [`super::SERIES_THRESHOLD`] prefer
/// [`super::gamma_ab`], which switches to the series branch.
pub fn gamma_ab_closed(cfg: &GeometryConfig) -> Result<ComplexRate> {
    cfg.validate()?;
    let xi = cfg.xi;
    let (normal, transverse) = cfg.dipole_products();

    let i = Complex64::i();
    let inv_ixi = 1.0 / (i * xi);
    let inv_xi2 = Complex64::new(1.0 / (xi * xi), 0.0);
    let inv_ixi3 = 1.0 / (i * xi * xi * xi);
    let phase = Complex64::from_polar(1.0, xi);

    let transverse_part = 2.0 * phase * (inv_ixi + inv_xi2 - inv_ixi3) - inv_ixi + 2.0 * inv_ixi3;
    let normal_part = 2.0 * phase * (inv_xi2 - inv_ixi3) + inv_ixi + 2.0 * inv_ixi3;

    let value = cfg.scale()? * (transverse * transverse_part - 2.0 * normal * normal_part);
    Ok(value.into())
}
