//! Polynomial, Laurent polynomial and rational-function arithmetic with root
//! finding. Every filter construction in the crate is expressed with these.

mod laurent;
mod poly;
mod rational;
mod roots;

pub use laurent::LaurentPoly;
pub use poly::{RealPoly, CANONICAL_REL_TOL, MULTIPLICITY_TOL, ZERO_ORDER_TOL};
pub use rational::{RationalFilter, SymmetryClass};
pub use roots::{poly_gcd, poly_roots, reexpansion_residual, ComplexRootSet};

use num_complex::Complex64;

/// Points on the unit circle `exp(2 pi i k / n)`, `k = 0..n`.
pub fn unit_circle(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
}
