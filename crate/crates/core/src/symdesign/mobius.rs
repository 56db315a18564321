//! Rational maps of the Riemann sphere used to move between the unit circle,
//! the imaginary axis and the all-pass parameter.

use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

fn guarded(map: &'static str, z: Complex64, num: Complex64, den: Complex64, scale: f64) -> Result<Complex64> {
    if den.norm() <= f64::EPSILON * scale {
        return Err(Error::Pole { map, at: z });
    }
    Ok(num / den)
}

/// Bilinear transform `(1 - z) / (1 + z)`; an involution.
pub fn beta(z: Complex64) -> Result<Complex64> {
    guarded("beta", z, 1.0 - z, 1.0 + z, 1.0 + z.norm())
}

/// `(z + 1/z) / 2`.
pub fn eta(z: Complex64) -> Result<Complex64> {
    guarded("eta", z, z * z + 1.0, 2.0 * z, f64::MIN_POSITIVE)
}

/// `(z - 1/z) / 2`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    guarded("gamma", z, z * z - 1.0, 2.0 * z, f64::MIN_POSITIVE)
}

/// `(1 + sqrt2 z) / (1 + sqrt2 z + z^2)`.
pub fn nu(z: Complex64) -> Result<Complex64> {
    let num = 1.0 + SQRT_2 * z;
    guarded("nu", z, num, num + z * z, 1.0 + z.norm_sqr())
}
