//! FIR approximation of IIR 0-SYM filters as a cascade of dilated
//! palindromic factors, and a two-channel filter bank built on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyrat::{poly_roots, unit_circle, LaurentPoly, RationalFilter, RealPoly};

pub const ACCURACY_GRID: usize = 8192;
const PALINDROME_TOL: f64 = 1e-10;
const MAX_LEVELS: usize = 64;
const MAX_PRODUCT_DEGREE: usize = 1 << 20;

/// `F(z) = z^-N P(z) prod_k F_k(z^(2^k))`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirCascade {
    shift_n: usize,
    p: RealPoly,
    factors: Vec<(usize, RealPoly)>,
    epsilon: f64,
    achieved: f64,
}

impl FirCascade {
    /// Checks that levels are distinct and at least 1, factors palindromic,
    /// and `0 <= achieved <= epsilon`.
    pub fn new(
        shift_n: usize,
        p: RealPoly,
        factors: Vec<(usize, RealPoly)>,
        epsilon: f64,
        achieved: f64,
    ) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidInput(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if !(achieved >= 0.0 && achieved <= epsilon) {
            return Err(Error::InvalidInput(format!(
                "achieved error {achieved} exceeds epsilon {epsilon}"
            )));
        }
        let mut last = 0;
        for (level, f) in &factors {
            if *level <= last {
                return Err(Error::InvalidInput(format!(
                    "factor levels must be increasing and at least 1, got {level}"
                )));
            }
            if *level >= MAX_LEVELS {
                return Err(Error::InvalidInput(format!("factor level {level} is too large")));
            }
            if !f.is_palindromic(PALINDROME_TOL) {
                return Err(Error::InvalidInput(format!(
                    "factor at level {level} is not palindromic"
                )));
            }
            last = *level;
        }
        Ok(Self {
            shift_n,
            p,
            factors,
            epsilon,
            achieved,
        })
    }

    pub fn shift_n(&self) -> usize {
        self.shift_n
    }

    pub fn p(&self) -> &RealPoly {
        &self.p
    }

    pub fn factors(&self) -> &[(usize, RealPoly)] {
        &self.factors
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn achieved(&self) -> f64 {
        self.achieved
    }

    /// Highest level present, 0 when there are no factors.
    pub fn top_level(&self) -> usize {
        self.factors.last().map_or(0, |(k, _)| *k)
    }

    /// Degree of `P prod_k F_k(z^(2^k))`.
    pub fn product_degree(&self) -> usize {
        self.p.degree() + self.factors.iter().map(|(k, f)| f.degree() << k).sum::<usize>()
    }

    /// Exponent of the symmetry axis of the flattened coefficients.
    pub fn center(&self) -> f64 {
        self.product_degree() as f64 / 2.0 - self.shift_n as f64
    }

    /// Evaluates the cascade in factored form.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut v = self.p.eval(z) * z.powi(-(self.shift_n as i32));
        for (k, f) in &self.factors {
            v *= f.eval(z.powu(1 << k));
        }
        v
    }

    /// Expanded coefficient sequence.
    pub fn flatten(&self) -> LaurentPoly {
        let mut out = LaurentPoly::from_poly(&self.p, -(self.shift_n as i64));
        for (k, f) in &self.factors {
            out = out.mul(&LaurentPoly::from_poly(&f.upsample(1 << k), 0));
        }
        out
    }
}

/// Real signal for the filter bank.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("signal is empty".into()));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("signal contains non-finite samples".into()));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn norm_inf(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Roots `q`, `|q| < 1`, of `C` with `den(z) = C(z^2)`.
fn inner_roots(den: &RealPoly) -> Result<Vec<Complex64>> {
    let c = den.coeffs();
    let odd = c.iter().skip(1).step_by(2).fold(0.0f64, |m, x| m.max(x.abs()));
    if odd > 1e-12 * den.norm_inf() {
        return Err(Error::Precondition(
            "denominator is not an even polynomial".into(),
        ));
    }
    let even = RealPoly::new(c.iter().step_by(2).copied().collect());
    let mut out = Vec::new();
    for (q, mult) in poly_roots(&even)?.roots() {
        if (q.norm() - 1.0).abs() <= 1e-9 {
            return Err(Error::Realizability(format!(
                "pole on the unit circle near sqrt({q})"
            )));
        }
        if q.norm() < 1.0 {
            out.extend(std::iter::repeat_n(*q, *mult));
        }
    }
    if 2 * out.len() != even.degree() {
        return Err(Error::Precondition(
            "denominator roots are not paired under w -> 1/w".into(),
        ));
    }
    Ok(out)
}

/// Factors at `w`-levels `0..=top`, each the product over retained `q` of
/// `q^(2^k) + (1 + q^(2^(k+1))) v + q^(2^k) v^2`, scaled to unit sum.
fn level_factors(qs: &[Complex64], top: usize, drop: f64) -> Vec<(usize, RealPoly)> {
    let mut out = Vec::new();
    for k in 0..=top {
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for &q in qs {
            let qk = q.powu(1 << k);
            if qk.norm() <= drop {
                continue;
            }
            let quad = [qk, 1.0 + qk * qk, qk];
            let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 2];
            for (i, a) in prod.iter().enumerate() {
                for (j, b) in quad.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            prod = next;
        }
        if prod.len() == 1 {
            continue;
        }
        let re: Vec<f64> = prod.iter().map(|c| c.re).collect();
        let sum: f64 = re.iter().sum();
        let f = RealPoly::exact(re.iter().map(|c| c / sum).collect());
        out.push((k + 1, f));
    }
    out
}

/// `sup |1 - den(z) G(z) z^-c / den(1)|` on the circle, where `G` is the
/// factor product and `c` its linear-phase center. This equals the relative
/// error of the cascade against the delayed filter.
fn relative_error(den: &RealPoly, factors: &[(usize, RealPoly)], grid: usize) -> f64 {
    let d1 = den.eval_real(1.0);
    let deg: usize = den.degree() + factors.iter().map(|(k, f)| f.degree() << k).sum::<usize>();
    let c = (deg / 2) as i32;
    let mut worst = 0.0f64;
    for z in unit_circle(grid) {
        let mut v = den.eval(z) / d1 * z.powi(-c);
        for (k, f) in factors {
            v *= f.eval(z.powu(1 << k));
        }
        worst = worst.max((1.0 - v).norm());
    }
    worst
}

/// Cascade whose response matches `H` delayed to linear phase within
/// relative error `epsilon` on the unit circle.
pub fn fir_approximate(h: &RationalFilter, epsilon: f64) -> Result<FirCascade> {
    let den = h.den();
    let d1 = den.eval_real(1.0);
    let p = h.num().scale(1.0 / d1);
    if den.degree() == 0 {
        if !(epsilon > 0.0) {
            return Err(Error::Precondition(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        return FirCascade::new(0, p, Vec::new(), epsilon, 0.0);
    }
    let bound = 1.0 / (2.0 * den.degree() as f64);
    if !(epsilon > 0.0 && epsilon < bound) {
        return Err(Error::Precondition(format!(
            "epsilon must lie in (0, {bound}), got {epsilon}"
        )));
    }
    let qs = inner_roots(den)?;
    let pairs = qs.len() as f64;
    let too_long = |top: usize| (2 * qs.len()) << (top + 1) > MAX_PRODUCT_DEGREE;
    let mut top = 0;
    while qs
        .iter()
        .map(|q| q.norm().powf(2f64.powi(top as i32 + 1)))
        .sum::<f64>()
        > epsilon / 2.0
    {
        top += 1;
        if too_long(top) {
            return Err(Error::Precondition(format!(
                "poles too close to the unit circle for accuracy {epsilon}"
            )));
        }
    }
    let mut drop = epsilon / (4.0 * pairs);
    while top < MAX_LEVELS - 1 && !too_long(top) {
        let factors = level_factors(&qs, top, drop);
        let achieved = relative_error(den, &factors, ACCURACY_GRID);
        if achieved <= epsilon {
            return FirCascade::new(0, p, factors, epsilon, achieved);
        }
        top += 1;
        drop /= 4.0;
    }
    Err(Error::Precondition(format!("accuracy {epsilon} not reached")))
}

/// `sup |F(w)F(1/w) + F(-w)F(-1/w) - 1|` over `grid` points of the circle.
pub fn qmf_defect(f: &FirCascade, grid: usize) -> f64 {
    unit_circle(grid.max(1))
        .map(|w| {
            let wi = w.inv();
            (f.eval(w) * f.eval(wi) + f.eval(-w) * f.eval(-wi) - 1.0).norm()
        })
        .fold(0.0, f64::max)
}

/// Periodic two-channel analysis followed by its transpose; returns the
/// maximal absolute reconstruction error.
pub fn filterbank_roundtrip(f: &FirCascade, x: &Signal) -> Result<f64> {
    let n = x.len();
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "signal length must be even and at least 4, got {n}"
        )));
    }
    let h = f.flatten();
    let taps: Vec<(i64, f64)> = (h.low()..=h.high()).map(|j| (j, h.coeff(j))).collect();
    // g_j = (-1)^j h_(1-j)
    let gtaps: Vec<(i64, f64)> = taps
        .iter()
        .map(|&(j, c)| (1 - j, if (1 - j) % 2 == 0 { c } else { -c }))
        .collect();
    let s = std::f64::consts::SQRT_2;
    let len = n as i64;
    let xs = x.samples();
    let analyse = |taps: &[(i64, f64)]| -> Vec<f64> {
        (0..n / 2)
            .map(|k| {
                s * taps
                    .iter()
                    .map(|&(j, c)| c * xs[(2 * k as i64 + j).rem_euclid(len) as usize])
                    .sum::<f64>()
            })
            .collect()
    };
    let low = analyse(&taps);
    let high = analyse(&gtaps);
    let mut y = vec![0.0; n];
    for (band, taps) in [(&low, &taps), (&high, &gtaps)] {
        for (k, &b) in band.iter().enumerate() {
            for &(j, c) in taps.iter() {
                y[(2 * k as i64 + j).rem_euclid(len) as usize] += s * c * b;
            }
        }
    }
    Ok(y.iter().zip(xs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}
