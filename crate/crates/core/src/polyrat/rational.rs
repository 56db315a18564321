use num_complex::Complex64;

use super::poly::MULTIPLICITY_TOL;
use super::{poly_roots, ComplexRootSet, RealPoly};
use crate::error::{Error, Result};

/// Denominator values below this fraction of `sum |d_k| |z|^k` count as a pole.
const POLE_REL_TOL: f64 = 1e-14;
/// Poles within this distance of the unit circle make a filter unrealizable.
const CIRCLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryClass {
    Unclassified,
    /// `H(z) = H(1/z)` and `H(z)^2 + H(-z)^2 = 1`.
    ZeroSym,
}

/// `H(z) = P(z) / Q(z)` with the factor `(1+z)^k` of the numerator kept apart,
/// so responses near `z = -1` are evaluated without cancellation.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFilter {
    num: RealPoly,
    den: RealPoly,
    minus_one_order: usize,
    num_reduced: RealPoly,
    symmetry: SymmetryClass,
}

impl RationalFilter {
    /// Builds a filter from expanded coefficients; the order of `-1` as a zero
    /// of the numerator is detected and split off.
    pub fn new(num: RealPoly, den: RealPoly) -> Result<Self> {
        let k = if num.is_zero() {
            0
        } else {
            num.multiplicity_at(Complex64::new(-1.0, 0.0), MULTIPLICITY_TOL)
        };
        let mut reduced = num.clone();
        for _ in 0..k {
            reduced = reduced.deflate_real(-1.0).0;
        }
        Self::assemble(num, den, k, reduced)
    }

    /// Numerator given as `(1+z)^order * reduced`.
    pub fn from_factored(order: usize, reduced: RealPoly, den: RealPoly) -> Result<Self> {
        let num = &RealPoly::binomial_power(1.0, 1.0, order) * &reduced;
        Self::assemble(num, den, order, reduced)
    }

    /// FIR filter (denominator 1).
    pub fn from_poly(p: RealPoly) -> Result<Self> {
        Self::new(p, RealPoly::one())
    }

    fn assemble(num: RealPoly, den: RealPoly, k: usize, reduced: RealPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("denominator is the zero polynomial".into()));
        }
        let at_one = den.eval_real(1.0);
        if at_one.abs() <= POLE_REL_TOL * den.coeffs().iter().map(|c| c.abs()).sum::<f64>() {
            return Err(Error::Realizability("denominator vanishes at z = 1".into()));
        }
        Ok(Self {
            num,
            den,
            minus_one_order: k,
            num_reduced: reduced,
            symmetry: SymmetryClass::Unclassified,
        })
    }

    pub fn with_symmetry(mut self, symmetry: SymmetryClass) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn symmetry(&self) -> SymmetryClass {
        self.symmetry
    }

    pub fn num(&self) -> &RealPoly {
        &self.num
    }

    pub fn den(&self) -> &RealPoly {
        &self.den
    }

    /// Multiplicity of `-1` as a zero of the numerator.
    pub fn minus_one_order(&self) -> usize {
        self.minus_one_order
    }

    /// Numerator with the `(1+z)^k` factor removed.
    pub fn num_reduced(&self) -> &RealPoly {
        &self.num_reduced
    }

    /// Maximum of numerator and denominator degrees.
    pub fn order(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    /// `H(z)`; infinite or NaN at a pole.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let head = (z + 1.0).powi(self.minus_one_order as i32);
        head * self.num_reduced.eval(z) / self.den.eval(z)
    }

    /// `H(z)`, failing when `z` is (numerically) a pole.
    pub fn try_eval(&self, z: Complex64) -> Result<Complex64> {
        let d = self.den.eval(z);
        let scale: f64 = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * z.norm().powi(k as i32))
            .sum();
        if d.norm() <= POLE_REL_TOL * scale {
            return Err(Error::Pole { map: "filter", at: z });
        }
        let head = (z + 1.0).powi(self.minus_one_order as i32);
        Ok(head * self.num_reduced.eval(z) / d)
    }

    /// Zeros of the numerator.
    pub fn zeros(&self) -> Result<ComplexRootSet> {
        let mut roots = if self.num_reduced.degree() == 0 {
            Vec::new()
        } else {
            poly_roots(&self.num_reduced)?.roots().to_vec()
        };
        if self.minus_one_order > 0 {
            let minus_one = Complex64::new(-1.0, 0.0);
            match roots.iter_mut().find(|(r, _)| *r == minus_one) {
                Some(entry) => entry.1 += self.minus_one_order,
                None => roots.push((minus_one, self.minus_one_order)),
            }
        }
        Ok(ComplexRootSet::new(roots))
    }

    /// Zeros of the denominator.
    pub fn poles(&self) -> Result<ComplexRootSet> {
        if self.den.degree() == 0 {
            return Ok(ComplexRootSet::default());
        }
        poly_roots(&self.den)
    }

    /// Fails when a pole lies on the unit circle.
    pub fn check_realizable(&self) -> Result<()> {
        for (p, _) in self.poles()?.roots() {
            if (p.norm() - 1.0).abs() <= CIRCLE_TOL {
                return Err(Error::Realizability(format!("pole {p} lies on the unit circle")));
            }
        }
        Ok(())
    }

    /// Fails when numerator and denominator share a root.
    pub fn check_coprime(&self) -> Result<()> {
        for (p, _) in self.poles()?.roots() {
            let scale: f64 = self
                .num
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.abs() * p.norm().powi(k as i32))
                .sum();
            if self.num.eval(*p).norm() <= 1e-9 * scale {
                return Err(Error::InvalidInput(format!(
                    "numerator and denominator share the root {p}"
                )));
            }
        }
        Ok(())
    }

    /// Realizability and coprimality together.
    pub fn validate(&self) -> Result<()> {
        self.check_realizable()?;
        self.check_coprime()
    }
}
