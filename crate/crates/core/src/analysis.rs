//! Numerical verification of the identities a 0-SYM filter must satisfy.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::polyrat::{unit_circle, RationalFilter, ZERO_ORDER_TOL};

/// Classification threshold for [`check_sym`].
pub const SYM_TOL: f64 = 1e-9;
/// Acceptance threshold for [`qmf_residual`] in reports.
pub const QMF_TOL: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_MAX_CYCLE: usize = 16;

const CIRCLE_TOL: f64 = 1e-7;
const ANGLE_TOL: f64 = 1e-7;

fn eval_on_circle(h: &RationalFilter, z: Complex64) -> Result<Complex64> {
    h.try_eval(z)
        .map_err(|_| Error::Realizability(format!("pole of the filter on the unit circle near {z}")))
}

/// `max |H(z)H(1/z) + H(-z)H(-1/z) - 1|` over `grid` points of the unit circle.
pub fn qmf_residual(h: &RationalFilter, grid: usize) -> Result<f64> {
    if grid < 16 {
        return Err(Error::InvalidInput(format!(
            "grid must have at least 16 points, got {grid}"
        )));
    }
    let mut worst = 0.0f64;
    for z in unit_circle(grid) {
        let zi = z.inv();
        let v = eval_on_circle(h, z)? * eval_on_circle(h, zi)?
            + eval_on_circle(h, -z)? * eval_on_circle(h, -zi)?
            - 1.0;
        worst = worst.max(v.norm());
    }
    Ok(worst)
}

/// Worst deviations from `H(z) = H(1/z)` and `H(z)^2 + H(-z)^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymDeviations {
    pub reflection: f64,
    pub power_complement: f64,
}

/// 128 points on the unit circle and 128 on a spiral with radii in `[0.5, 2]`.
fn sym_grid() -> impl Iterator<Item = (Complex64, bool)> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let circle = (0..128).map(|k| (Complex64::from_polar(1.0, TAU * (k as f64 + 0.5) / 128.0), true));
    let spiral = (0..128).map(move |k| {
        let r = 0.5 * 4f64.powf(k as f64 / 127.0);
        (Complex64::from_polar(r, golden * k as f64 + 0.1), false)
    });
    circle.chain(spiral)
}

/// Deviations on the mixed grid; off the circle they are relative to the
/// size of the values involved. Points at numerical poles are skipped.
pub fn sym_deviations(h: &RationalFilter) -> SymDeviations {
    let mut out = SymDeviations {
        reflection: 0.0,
        power_complement: 0.0,
    };
    for (z, on_circle) in sym_grid() {
        let (Ok(a), Ok(b), Ok(c)) = (h.try_eval(z), h.try_eval(z.inv()), h.try_eval(-z)) else {
            continue;
        };
        let (s1, s2) = if on_circle {
            (1.0, 1.0)
        } else {
            (1.0 + a.norm().max(b.norm()), 1.0 + a.norm_sqr() + c.norm_sqr())
        };
        out.reflection = out.reflection.max((a - b).norm() / s1);
        out.power_complement = out.power_complement.max((a * a + c * c - 1.0).norm() / s2);
    }
    out
}

/// Largest deviation from the two 0-SYM identities; the filter is 0-SYM iff
/// this is at most [`SYM_TOL`].
pub fn check_sym(h: &RationalFilter) -> f64 {
    let d = sym_deviations(h);
    d.reflection.max(d.power_complement)
}

pub fn is_zero_sym(h: &RationalFilter) -> bool {
    check_sym(h) <= SYM_TOL
}

/// `(M, N)`: multiplicity of `-1` as a zero of `H` and of `1` as a zero of `1 - H`.
pub fn vanishing_moments(h: &RationalFilter) -> Result<(usize, usize)> {
    let at_one = h.eval(Complex64::new(1.0, 0.0));
    if !((at_one - 1.0).norm() <= 1e-10) {
        return Err(Error::InvalidInput(format!(
            "filter is not normalized: H(1) = {at_one}"
        )));
    }
    let rest = h.den() - h.num();
    if rest.is_zero() {
        return Err(Error::InvalidInput("filter is identically one".into()));
    }
    let envelope = &h.den().abs() + &h.num().abs();
    let n = rest.zero_order_against(Complex64::new(1.0, 0.0), &envelope, ZERO_ORDER_TOL);
    Ok((h.minus_one_order(), n))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CohenResult {
    pub passed: bool,
    /// Angles of a nontrivial invariant cycle of the doubling map, in orbit order.
    pub witness: Option<Vec<f64>>,
    /// Longest cycle length that was searched.
    pub max_cycle: usize,
}

fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Unit-circle zero angles of `H`, in `[0, 2 pi)`, one per distinct zero.
fn circle_zero_angles(h: &RationalFilter) -> Result<Vec<f64>> {
    Ok(h.zeros()?
        .roots()
        .iter()
        .filter(|(z, _)| (z.norm() - 1.0).abs() <= CIRCLE_TOL)
        .map(|(z, _)| z.arg().rem_euclid(TAU))
        .collect())
}

/// Searches the set `W = {w : H(e^{i(w + pi)}) = 0}` for a cycle of
/// `w -> 2w mod 2 pi` other than the fixed point 0.
pub fn cohen_check(h: &RationalFilter, max_cycle: usize) -> Result<CohenResult> {
    if max_cycle < 2 {
        return Err(Error::InvalidInput(format!(
            "max_cycle must be at least 2, got {max_cycle}"
        )));
    }
    let mut w: Vec<f64> = Vec::new();
    for phi in circle_zero_angles(h)? {
        let omega = (phi + PI).rem_euclid(TAU);
        if angle_dist(omega, 0.0) > ANGLE_TOL && w.iter().all(|&x| angle_dist(x, omega) > ANGLE_TOL) {
            w.push(omega);
        }
    }
    w.sort_by(f64::total_cmp);
    let next: Vec<Option<usize>> = w
        .iter()
        .map(|&x| {
            let y = (2.0 * x).rem_euclid(TAU);
            w.iter().position(|&v| angle_dist(v, y) <= ANGLE_TOL)
        })
        .collect();
    for start in 0..w.len() {
        let mut cycle = vec![start];
        let mut cur = start;
        while cycle.len() <= max_cycle {
            match next[cur] {
                Some(n) if n == start => {
                    return Ok(CohenResult {
                        passed: false,
                        witness: Some(cycle.iter().map(|&i| w[i]).collect()),
                        max_cycle,
                    });
                }
                Some(n) if !cycle.contains(&n) => {
                    cycle.push(n);
                    cur = n;
                }
                _ => break,
            }
        }
    }
    Ok(CohenResult {
        passed: true,
        witness: None,
        max_cycle,
    })
}

/// Minimum of the frequency response over `grid - 1` interior points of `(-pi, pi)`.
pub fn positivity_check(h: &RationalFilter, grid: usize) -> f64 {
    (1..grid.max(2))
        .map(|k| {
            let xi = -PI + TAU * k as f64 / grid.max(2) as f64;
            h.eval(Complex64::from_polar(1.0, -xi)).re
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Geometry {
    pub poles_imaginary: bool,
    /// Angles in `(pi/2, pi]` of the zeros on the unit circle.
    pub stopband_zeros: Vec<f64>,
}

pub fn geometry_report(h: &RationalFilter) -> Result<Geometry> {
    let poles_imaginary = h
        .poles()?
        .roots()
        .iter()
        .all(|(p, _)| p.re.abs() <= 1e-8 * (1.0 + p.norm()));
    let mut stopband_zeros: Vec<f64> = circle_zero_angles(h)?
        .into_iter()
        .map(|a| if a > PI + ANGLE_TOL { TAU - a } else { a.min(PI) })
        .filter(|&a| a > FRAC_PI_2)
        .collect();
    stopband_zeros.sort_by(f64::total_cmp);
    stopband_zeros.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_TOL);
    Ok(Geometry {
        poles_imaginary,
        stopband_zeros,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterReport {
    pub qmf_residual: f64,
    pub sym_residual: f64,
    pub wavelet_moments: usize,
    pub scaling_moments: usize,
    pub cohen: CohenResult,
    pub min_response: f64,
    pub poles_imaginary: bool,
    pub stopband_zeros: Vec<f64>,
}

impl FilterReport {
    /// QMF identity, 0-SYM classification and Cohen's condition all hold.
    pub fn passed(&self) -> bool {
        self.qmf_residual <= QMF_TOL && self.sym_residual <= SYM_TOL && self.cohen.passed
    }
}

pub fn filter_report(h: &RationalFilter, grid: usize, max_cycle: usize) -> Result<FilterReport> {
    let (wavelet_moments, scaling_moments) = vanishing_moments(h)?;
    let geometry = geometry_report(h)?;
    Ok(FilterReport {
        qmf_residual: qmf_residual(h, grid)?,
        sym_residual: check_sym(h),
        wavelet_moments,
        scaling_moments,
        cohen: cohen_check(h, max_cycle)?,
        min_response: positivity_check(h, grid),
        poles_imaginary: geometry.poles_imaginary,
        stopband_zeros: geometry.stopband_zeros,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::RealPoly;
    use crate::symdesign::{maxflat, MaxflatId};

    fn fir(c: &[f64]) -> RationalFilter {
        RationalFilter::from_poly(RealPoly::new(c.to_vec())).unwrap()
    }

    #[test]
    fn qmf_examples() {
        assert!(qmf_residual(&fir(&[0.5, 0.5]), 64).unwrap() < 1e-15);
        let r = qmf_residual(&fir(&[0.5, 0.0, 0.5]), 64).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let e = maxflat(MaxflatId { n: 3, delta: 0 }).unwrap();
        assert!(qmf_residual(&e, 4096).unwrap() < 1e-11);
        assert!(qmf_residual(&e, 8).is_err());
    }

    #[test]
    fn pole_on_grid_is_reported() {
        let h = RationalFilter::new(RealPoly::one(), RealPoly::new(vec![1.0, 0.0, 1.0])).unwrap();
        assert!(matches!(qmf_residual(&h, 16), Err(Error::Realizability(_))));
    }

    #[test]
    fn symmetry_classification() {
        assert!(check_sym(&maxflat(MaxflatId { n: 2, delta: 1 }).unwrap()) < 1e-11);
        let haar = check_sym(&fir(&[0.5, 0.5]));
        assert!(haar > 0.99 && !is_zero_sym(&fir(&[0.5, 0.5])));
    }

    #[test]
    fn moments() {
        for n in 1..=6 {
            for delta in 0..=1 {
                let h = maxflat(MaxflatId { n, delta }).unwrap();
                let n = n as usize;
                assert_eq!(vanishing_moments(&h).unwrap(), (2 * n, 4 * n));
            }
        }
        assert_eq!(vanishing_moments(&fir(&[0.5, 0.5])).unwrap(), (1, 1));
        assert!(vanishing_moments(&fir(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn cohen_on_maxflat() {
        for n in 1..=6 {
            for delta in 0..=1 {
                let h = maxflat(MaxflatId { n, delta }).unwrap();
                let c = cohen_check(&h, DEFAULT_MAX_CYCLE).unwrap();
                assert!(c.passed && c.witness.is_none(), "n={n} delta={delta}");
            }
        }
        assert!(cohen_check(&fir(&[0.5, 0.5]), 1).is_err());
    }

    #[test]
    fn positivity_of_maxflat() {
        let h = maxflat(MaxflatId { n: 3, delta: 0 }).unwrap();
        assert!(positivity_check(&h, 4096) > 0.0);
        let h = maxflat(MaxflatId { n: 3, delta: 1 }).unwrap();
        assert!(positivity_check(&h, 4096) < 0.0);
    }

    #[test]
    fn maxflat_geometry() {
        let g = geometry_report(&maxflat(MaxflatId { n: 2, delta: 0 }).unwrap()).unwrap();
        assert!(g.poles_imaginary);
        assert_eq!(g.stopband_zeros.len(), 1);
        assert!((g.stopband_zeros[0] - PI).abs() < 1e-12);
    }
}
