use num_complex::Complex64;

use super::RealPoly;
use crate::error::{Error, Result};

/// Finite Laurent series `sum_k coeffs[k] z^(low + k)`, e.g. a filter's
/// impulse response indexed from a possibly negative time.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<f64>,
}

impl LaurentPoly {
    /// Strips exact zeros from both ends, shifting `low` accordingly.
    pub fn new(low: i64, coeffs: Vec<f64>) -> Self {
        let first = coeffs.iter().position(|&c| c != 0.0);
        match first {
            None => Self::zero(),
            Some(first) => {
                let last = coeffs.iter().rposition(|&c| c != 0.0).unwrap();
                Self {
                    low: low + first as i64,
                    coeffs: coeffs[first..=last].to_vec(),
                }
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: vec![0.0],
        }
    }

    pub fn from_poly(p: &RealPoly, shift: i64) -> Self {
        Self::new(shift, p.coeffs().to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero outside the support.
    pub fn coeff(&self, k: i64) -> f64 {
        let i = k - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0.0
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.low < 0 && z == Complex64::new(0.0, 0.0) && !self.is_zero() {
            return Err(Error::Pole {
                map: "Laurent polynomial",
                at: z,
            });
        }
        let body = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        Ok(body * z.powi(self.low as i32))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.low + rhs.low, out)
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// True iff the coefficient sequence is symmetric within `tol * ||.||_inf`.
    pub fn is_palindromic(&self, tol: f64) -> bool {
        let n = self.coeffs.len();
        let cut = tol * self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        (0..n / 2).all(|k| (self.coeffs[k] - self.coeffs[n - 1 - k]).abs() <= cut)
    }
}
