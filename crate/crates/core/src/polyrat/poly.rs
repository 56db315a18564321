use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Trailing coefficients smaller than this (relative to the largest one) are
/// treated as rounding residue and removed.
pub const CANONICAL_REL_TOL: f64 = 1e-13;

/// Default relative tolerance for multiplicity detection.
pub const MULTIPLICITY_TOL: f64 = 1e-7;
/// Relative tolerance for [`RealPoly::zero_order_at`].
pub const ZERO_ORDER_TOL: f64 = 1e-12;

/// Real polynomial, `coeffs[k]` is the coefficient of `z^k`.
///
/// Always stored in canonical form: the last coefficient is nonzero, or the
/// polynomial is exactly `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    /// Builds a polynomial, dropping negligible high-order coefficients.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let cut = scale * CANONICAL_REL_TOL;
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        if coeffs.is_empty() || (coeffs.len() == 1 && coeffs[0].abs() <= cut) {
            return Self::zero();
        }
        Self { coeffs }
    }

    /// Builds a polynomial keeping every coefficient except exact trailing zeros.
    pub fn exact(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::exact(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self { coeffs: c }
    }

    /// `(a + b z)^n` expanded with binomial coefficients.
    pub fn binomial_power(a: f64, b: f64, n: usize) -> Self {
        let mut out = Vec::with_capacity(n + 1);
        let mut binom = 1.0f64;
        for k in 0..=n {
            out.push(binom * a.powi((n - k) as i32) * b.powi(k as i32));
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        Self::exact(out)
    }

    /// Monic polynomial with the given roots. Imaginary residue of the
    /// expansion is discarded, so the roots should be conjugation closed.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (k, c) in acc.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            acc = next;
        }
        Self::exact(acc.into_iter().map(|c| c.re).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value and first derivative at `z`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::exact(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `p(-z)`.
    pub fn reflect(&self) -> Self {
        Self::exact(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 0 { c } else { -c })
                .collect(),
        )
    }

    /// The reciprocal `z^d p(1/z)`.
    pub fn reciprocal(&self) -> Self {
        Self::exact(self.coeffs.iter().rev().copied().collect())
    }

    /// `p(z^k)`.
    pub fn upsample(&self, k: usize) -> Self {
        if k <= 1 || self.degree() == 0 {
            return self.clone();
        }
        let mut out = vec![0.0; self.degree() * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * k] = c;
        }
        Self::exact(out)
    }

    /// Coefficients of even powers, i.e. `q` with `p(z) = q(z^2)` when `p` is even.
    pub fn even_part(&self) -> Self {
        Self::exact(self.coeffs.iter().step_by(2).copied().collect())
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        Self::exact(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division, returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        if self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
            rem[k + dd] = 0.0;
        }
        rem.truncate(dd.max(1));
        (Self::exact(quot), Self::exact(rem))
    }

    /// Divides by `(z - root)` and returns the quotient and the remainder `p(root)`.
    pub fn deflate_real(&self, root: f64) -> (Self, f64) {
        if self.degree() == 0 {
            return (Self::zero(), self.coeffs[0]);
        }
        let d = self.degree();
        let mut q = vec![0.0; d];
        let mut acc = 0.0;
        for k in (1..=d).rev() {
            acc = acc * root + self.coeffs[k];
            q[k - 1] = acc;
        }
        let rem = acc * root + self.coeffs[0];
        (Self::exact(q), rem)
    }

    /// Taylor coefficients `p^(k)(z0)/k!` for `k = 0..=deg`, by repeated
    /// synthetic division.
    pub fn taylor_at(&self, z0: Complex64) -> Vec<Complex64> {
        let mut work: Vec<Complex64> = self.coeffs.iter().map(|&c| c.into()).collect();
        let mut out = Vec::with_capacity(work.len());
        while !work.is_empty() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in (0..work.len()).rev() {
                acc = acc * z0 + work[k];
                work[k] = acc;
            }
            // work[0] holds the remainder, work[1..] the quotient
            out.push(work[0]);
            work.remove(0);
        }
        out
    }

    /// Order of `z0` as a zero of `p`: the number of leading Taylor
    /// coefficients at `z0` below `tol * ||p||_inf`. Never exceeds the degree.
    pub fn multiplicity_at(&self, z0: Complex64, tol: f64) -> usize {
        if self.is_zero() {
            return 0;
        }
        let cut = tol * self.norm_inf();
        self.taylor_at(z0)
            .iter()
            .take(self.degree())
            .take_while(|t| t.norm() <= cut)
            .count()
    }

    /// Coefficientwise absolute value.
    pub fn abs(&self) -> Self {
        Self::exact(self.coeffs.iter().map(|c| c.abs()).collect())
    }

    /// Order of `z0` as a zero of `p`, judging each Taylor coefficient against
    /// the same coefficient of `|p|` expanded at `|z0|`, which bounds its
    /// rounding error. Never exceeds the degree.
    pub fn zero_order_at(&self, z0: Complex64, tol: f64) -> usize {
        self.zero_order_against(z0, self, tol)
    }

    /// As [`RealPoly::zero_order_at`], with the error envelope taken from
    /// `|envelope|` instead, e.g. the summands `p` was computed from.
    pub fn zero_order_against(&self, z0: Complex64, envelope: &RealPoly, tol: f64) -> usize {
        if self.is_zero() {
            return 0;
        }
        let bounds = envelope.abs().taylor_at(Complex64::new(z0.norm(), 0.0));
        self.taylor_at(z0)
            .iter()
            .zip(bounds.iter().chain(std::iter::repeat(&Complex64::new(0.0, 0.0))))
            .take(self.degree())
            .take_while(|(t, b)| t.norm() <= tol * b.re)
            .count()
    }

    /// True iff `coeffs[k] = coeffs[d-k]` within `tol * ||p||_inf`.
    pub fn is_palindromic(&self, tol: f64) -> bool {
        let cut = tol * self.norm_inf().max(f64::MIN_POSITIVE);
        let n = self.coeffs.len();
        (0..n / 2).all(|k| (self.coeffs[k] - self.coeffs[n - 1 - k]).abs() <= cut)
    }

    /// Monic copy (leading coefficient 1).
    pub fn monic(&self) -> Self {
        self.scale(1.0 / self.leading())
    }

    /// Coefficients of `(1+y)^d p((1-y)/(1+y))` for `d = deg p`.
    pub fn bilinear_transform(&self) -> Self {
        let d = self.degree();
        let mut out = Self::zero();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let term = &RealPoly::binomial_power(1.0, -1.0, k) * &RealPoly::binomial_power(1.0, 1.0, d - k);
            out = &out + &term.scale(c);
        }
        out
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &RealPoly {
    type Output = RealPoly;
    fn add(self, rhs: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        RealPoly::new(c)
    }
}

impl Sub for &RealPoly {
    type Output = RealPoly;
    fn sub(self, rhs: &RealPoly) -> RealPoly {
        self + &-rhs
    }
}

impl Neg for &RealPoly {
    type Output = RealPoly;
    fn neg(self) -> RealPoly {
        self.scale(-1.0)
    }
}

impl Mul for &RealPoly {
    type Output = RealPoly;
    fn mul(self, rhs: &RealPoly) -> RealPoly {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly::exact(out)
    }
}
