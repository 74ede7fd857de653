//! Euler Gamma function for positive real arguments.
//!
//! Lanczos approximation with `g = 7` and nine coefficients, applied to
//! `z >= 1/2`. Arguments in `(0, 1/2)` are lifted with `Gamma(z) = Gamma(z + 1) / z`.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sqrt(2 * pi)`
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// `Gamma(z)` for finite `z > 0`.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!(
            "Gamma is evaluated for z > 0 only, got {z}"
        )));
    }
    Ok(gamma_positive(z))
}

pub(crate) fn gamma_positive(z: f64) -> f64 {
    if z < 0.5 {
        return lanczos(z + 1.0) / z;
    }
    lanczos(z)
}

fn lanczos(z: f64) -> f64 {
    let z = z - 1.0;
    let series = LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, &c)| {
            acc + c / (z + (i + 1) as f64)
        });
    let t = z + LANCZOS_G + 0.5;
    // split the power so Gamma(50) ~ 6e62 does not lose range in t^(z + 1/2)
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_TWO_PI * half * (-t).exp() * half * series
}
