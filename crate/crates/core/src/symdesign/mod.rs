//! Constructors for 0-SYM filters: from even all-pass functions, from
//! preimages of one, from prescribed stopband zeros, and the maximally flat
//! family. Also the companion high-pass filter.

mod allpass;
mod maxflat;
pub mod mobius;
mod preimage;

pub use allpass::{build_from_allpass, extract_allpass, AllPass};
pub use maxflat::{maxflat, maxflat_poles, maxflat_zeros, MaxflatId};
pub use mobius::{beta, eta, gamma, nu};
pub use preimage::{build_from_preimages, design_stopband, transition_slope, PreimageSpec};

use std::f64::consts::SQRT_2;

use crate::error::Result;
use crate::polyrat::{RationalFilter, RealPoly, SymmetryClass};

/// `H = A (A + c sqrt2 A~) / (A^2 + A~^2 + c sqrt2 A A~)` with
/// `A = (1+z)^(2m) A_r` and `A~(z) = A(-z)`.
pub(crate) fn assemble_filter(m: usize, a_r: &RealPoly, c: f64) -> Result<RationalFilter> {
    let a = &RealPoly::binomial_power(1.0, 1.0, 2 * m) * a_r;
    let at = a.reflect();
    let cross = at.scale(c * SQRT_2);
    let reduced = a_r * &(&a + &cross);
    let den = &(&(&a * &a) + &(&at * &at)) + &(&a * &cross);
    Ok(RationalFilter::from_factored(2 * m, reduced, den)?.with_symmetry(SymmetryClass::ZeroSym))
}

/// `z^d p(-1/z)` for `d >= deg p`.
fn reflect_invert(p: &RealPoly, d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d + 1];
    for (k, &c) in p.coeffs().iter().enumerate() {
        out[d - k] = if k % 2 == 0 { c } else { -c };
    }
    out
}

/// High-pass companion `G(z) = -z H(-1/z)`.
pub fn highpass(h: &RationalFilter) -> Result<RationalFilter> {
    let d = h.order();
    let mut num = vec![0.0];
    num.extend(reflect_invert(h.num(), d).into_iter().map(|c| -c));
    let den = reflect_invert(h.den(), d);
    let lead_zeros = |c: &[f64]| c.iter().take_while(|&&x| x == 0.0).count();
    let shift = lead_zeros(&num).min(lead_zeros(&den));
    RationalFilter::new(
        RealPoly::new(num[shift..].to_vec()),
        RealPoly::new(den[shift..].to_vec()),
    )
}
