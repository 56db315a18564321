//! Sampled outputs: frequency responses and cascade-algorithm samples of
//! the scaling function and wavelet.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::cascade::FirCascade;
use crate::error::{Error, Result};
use crate::polyrat::RationalFilter;

pub const DEFAULT_LEVELS: usize = 8;
const IMAG_TOL: f64 = 1e-10;

/// Values on the uniform grid `x0 + i dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGrid {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
}

impl SampledGrid {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("grid has no values".into()));
        }
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "invalid grid origin {x0} or spacing {dx}"
            )));
        }
        Ok(Self { x0, dx, values })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.x(i), v))
    }
}

/// `H(e^{-i xi})` at `xi = -pi + 2 pi i / points`; fails if a value is not real.
pub fn freq_response(h: &RationalFilter, points: usize) -> Result<SampledGrid> {
    if points < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 points, got {points}"
        )));
    }
    let dx = TAU / points as f64;
    let mut values = Vec::with_capacity(points);
    for i in 0..points {
        let xi = -PI + dx * i as f64;
        let z = Complex64::from_polar(1.0, -xi);
        let v = h
            .try_eval(z)
            .map_err(|_| Error::Realizability(format!("pole on the unit circle at xi = {xi}")))?;
        if v.im.abs() > IMAG_TOL * v.norm().max(1.0) {
            return Err(Error::SymmetryViolation {
                identity: "H(z) = H(1/z)",
                deviation: v.im.abs(),
            });
        }
        values.push(v.re);
    }
    SampledGrid::new(-PI, dx, values)
}

/// Centered taps `(j, h_j)` of the flattened cascade, with `j = 0` on (or just
/// below) the symmetry axis.
fn centered_taps(f: &FirCascade) -> Result<Vec<(i64, f64)>> {
    let h = f.flatten();
    let sum = h.sum();
    if !((sum - 1.0).abs() <= 5.0 * f.epsilon() + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "cascade is not normalized: coefficient sum {sum}"
        )));
    }
    let shift = (h.low() + h.high()).div_euclid(2);
    Ok((h.low()..=h.high()).map(|e| (e - shift, h.coeff(e))).collect())
}

/// `out(z) = a(z) * 2 T(z^step)` for taps `T`.
fn refine(a: &[f64], a_low: i64, taps: &[(i64, f64)], step: i64) -> (Vec<f64>, i64) {
    let t_low = taps.first().map_or(0, |t| t.0);
    let t_high = taps.last().map_or(0, |t| t.0);
    let low = a_low + step * t_low;
    let mut out = vec![0.0; a.len() + (step * (t_high - t_low)) as usize];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for &(j, c) in taps {
            out[i + (step * (j - t_low)) as usize] += 2.0 * c * x;
        }
    }
    (out, low)
}

/// Coefficients of `2^L prod_{k<L} H(z^(2^k))` and their lowest exponent.
fn scaling_coeffs(taps: &[(i64, f64)], levels: usize) -> (Vec<f64>, i64) {
    let mut acc = (vec![1.0], 0i64);
    for k in 0..levels {
        acc = refine(&acc.0, acc.1, taps, 1 << k);
    }
    acc
}

fn check_levels(levels: usize) -> Result<()> {
    if !(1..=20).contains(&levels) {
        return Err(Error::InvalidInput(format!(
            "levels must be in 1..=20, got {levels}"
        )));
    }
    Ok(())
}

/// Scaling function samples at `i / 2^levels`, even about 0 for a
/// linear-phase cascade.
pub fn scaling_samples(f: &FirCascade, levels: usize) -> Result<SampledGrid> {
    check_levels(levels)?;
    let taps = centered_taps(f)?;
    let (c, low) = scaling_coeffs(&taps, levels);
    let dx = 1.0 / (1u64 << levels) as f64;
    SampledGrid::new(low as f64 * dx, dx, c)
}

/// Wavelet samples at `i / 2^levels`, even about 1/2 for a linear-phase
/// cascade, using `g_j = (-1)^j h_(1-j)`.
pub fn wavelet_samples(f: &FirCascade, levels: usize) -> Result<SampledGrid> {
    check_levels(levels)?;
    let taps = centered_taps(f)?;
    let mut gtaps: Vec<(i64, f64)> = taps
        .iter()
        .map(|&(j, c)| (1 - j, if (1 - j) % 2 == 0 { c } else { -c }))
        .collect();
    gtaps.reverse();
    let (c, low) = scaling_coeffs(&taps, levels - 1);
    let (e, low) = refine(&c, low, &gtaps, 1 << (levels - 1));
    let dx = 1.0 / (1u64 << levels) as f64;
    SampledGrid::new(low as f64 * dx, dx, e)
}

/// Midpoint sum `sum_i x_i^k v_i dx`.
pub fn moment_sums(g: &SampledGrid, k: u32) -> f64 {
    g.points().map(|(x, v)| x.powi(k as i32) * v).sum::<f64>() * g.dx()
}
