#![allow(dead_code)]

use mirror_dd::rates::{DipoleOrientation, GeometryConfig, MirrorSpec};
use num_complex::Complex64;

/// Composite Simpson evaluation of the one-dimensional coupling integral,
/// written independently of the library's quadrature.
pub fn simpson_oracle(xi: f64, da: [f64; 3], db: [f64; 3], coupling: f64) -> Complex64 {
    let p1 = da[0] * db[0];
    let p23 = da[1] * db[1] + da[2] * db[2];
    let f = |u: f64| {
        let amp = 2.0 * p1 * (1.0 - u * u) + p23 * (1.0 + u * u);
        Complex64::new(0.0, xi * u).exp() * amp
    };
    let n = 2 * ((200.0 * xi).ceil() as usize).max(2000);
    let h = 1.0 / n as f64;
    let mut sum = f(0.0) + f(1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(k as f64 * h) * w;
    }
    sum * (h / 3.0) * (3.0 * coupling / 16.0)
}

pub fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub fn geometry(xi: f64, da: [f64; 3], db: [f64; 3], coupling: f64) -> GeometryConfig {
    GeometryConfig::new(
        xi,
        DipoleOrientation::new(da[0], da[1], da[2]).unwrap(),
        DipoleOrientation::new(db[0], db[1], db[2]).unwrap(),
        MirrorSpec::from_coupling(coupling).unwrap(),
    )
    .unwrap()
}

/// Twelve dipole pairs covering parallel, perpendicular, mixed and
/// non-planar orientations.
pub fn orientation_pairs() -> Vec<([f64; 3], [f64; 3])> {
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 1.0, 0.0];
    let z = [0.0, 0.0, 1.0];
    let d45 = unit([1.0, 1.0, 0.0]);
    let d3 = unit([1.0, 1.0, 1.0]);
    let dm = unit([-0.3, 0.8, 0.5]);
    vec![
        (x, x),
        (y, y),
        (z, z),
        (x, y),
        (y, z),
        (d45, d45),
        (d45, x),
        (d3, d3),
        (d3, y),
        (dm, d3),
        (dm, dm),
        (unit([0.9, 0.1, -0.4]), unit([0.2, -0.7, 0.6])),
    ]
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
