use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use super::mobius::beta;
use crate::error::{Error, Result, SpecViolation};
use crate::polyrat::{ComplexRootSet, RationalFilter, RealPoly, SymmetryClass};

/// Maximally flat filter of order `4n`; `delta` selects `H(i) = (-1)^delta / sqrt2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxflatId {
    pub n: i64,
    pub delta: i64,
}

impl MaxflatId {
    fn checked(self) -> Result<(usize, usize)> {
        if self.n < 1 {
            return Err(SpecViolation::ZeroMultiplicity(self.n).into());
        }
        if self.delta != 0 && self.delta != 1 {
            return Err(Error::InvalidInput(format!(
                "delta must be 0 or 1, got {}",
                self.delta
            )));
        }
        Ok((self.n as usize, self.delta as usize))
    }

    /// `(-1)^(delta + n)`.
    fn sign(self) -> f64 {
        if (self.n + self.delta) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

pub fn maxflat(id: MaxflatId) -> Result<RationalFilter> {
    let (n, _) = id.checked()?;
    let c = id.sign() * SQRT_2;
    let plus = RealPoly::binomial_power(1.0, 1.0, 2 * n);
    let minus = RealPoly::binomial_power(1.0, -1.0, 2 * n);
    let reduced = &plus + &minus.scale(c);
    let den = &(&plus.pow(2) + &minus.pow(2)) + &(&plus * &minus).scale(c);
    Ok(RationalFilter::from_factored(2 * n, reduced, den)?.with_symmetry(SymmetryClass::ZeroSym))
}

/// Closed-form zeros: `-1` with multiplicity `2n` and
/// `beta(2^(-1/(4n)) e^(i pi (2j + n + delta - 1) / (2n)))` for `-n < j <= n`.
pub fn maxflat_zeros(id: MaxflatId) -> Result<ComplexRootSet> {
    let (n, delta) = id.checked()?;
    let radius = 2f64.powf(-1.0 / (4 * n) as f64);
    let mut roots = vec![(Complex64::new(-1.0, 0.0), 2 * n)];
    for j in -(n as i64) + 1..=n as i64 {
        let angle = PI * (2 * j + (n + delta) as i64 - 1) as f64 / (2 * n) as f64;
        roots.push((beta(Complex64::from_polar(radius, angle))?, 1));
    }
    Ok(ComplexRootSet::new(roots))
}

/// Closed-form poles `+-i tan(pi (5 + 8j + 4 delta + 4n) / (16 n))` for `-n < j <= n`.
pub fn maxflat_poles(id: MaxflatId) -> Result<ComplexRootSet> {
    let (n, delta) = id.checked()?;
    let mut roots = Vec::with_capacity(4 * n);
    for j in -(n as i64) + 1..=n as i64 {
        let t = (PI * (5 + 8 * j + 4 * (delta + n) as i64) as f64 / (16 * n) as f64).tan();
        roots.push((Complex64::new(0.0, t), 1));
        roots.push((Complex64::new(0.0, -t), 1));
    }
    Ok(ComplexRootSet::new(roots))
}
