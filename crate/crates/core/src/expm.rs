//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! of order 3, 5, 7, 9 or 13, selected from the 1-norm of the input.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

type CMat = DMatrix<Complex64>;

#[allow(clippy::excessive_precision)]
const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
    (13, 5.371_920_351_148_152),
];

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const PADE9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm(a: &CMat) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(a: &CMat, s: f64) -> CMat {
    a.map(|z| z * s)
}

/// (U, V) for the low-order approximants: U odd part times A, V even part.
fn low_order(a: &CMat, b: &[f64]) -> (CMat, CMat) {
    let n = a.nrows();
    let a2 = a * a;
    let mut power = CMat::identity(n, n);
    let mut odd = scaled(&power, b[1]);
    let mut even = scaled(&power, b[0]);
    let mut k = 2;
    while k < b.len() {
        power = &power * &a2;
        even += scaled(&power, b[k]);
        if k + 1 < b.len() {
            odd += scaled(&power, b[k + 1]);
        }
        k += 2;
    }
    (a * odd, even)
}

fn order13(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let b = &PADE13;
    let id = CMat::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]));
    let u = a
        * (inner_u + scaled(&a6, b[7]) + scaled(&a4, b[5]) + scaled(&a2, b[3]) + scaled(&id, b[1]));
    let inner_v = &a6 * (scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]));
    let v = inner_v + scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]) + scaled(&id, b[0]);
    (u, v)
}

fn pade_ratio(u: CMat, v: CMat) -> Result<CMat> {
    let numer = &v + &u;
    let denom = v - u;
    denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::Integration("singular Padé denominator in matrix exponential".into()))
}

/// `exp(a)` for a square complex matrix.
pub fn expm(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Domain(
            "matrix exponential needs a square matrix".into(),
        ));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Integration(
            "non-finite entry in matrix exponential input".into(),
        ));
    }
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }

    let norm = one_norm(a);
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let (u, v) = low_order(a, coeffs);
            return pade_ratio(u, v);
        }
    }

    let theta13 = THETA[4].1;
    let squarings = if norm > theta13 {
        (norm / theta13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a_scaled = scaled(a, 0.5f64.powi(squarings));
    let (u, v) = order13(&a_scaled);
    let mut result = pade_ratio(u, v)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    if result
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Integration("matrix exponential overflowed".into()));
    }
    Ok(result)
}
