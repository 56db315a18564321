use num_complex::Complex64;

use super::assemble_filter;
use crate::analysis::sym_deviations;
use crate::error::{Error, Result};
use crate::polyrat::{poly_gcd, RationalFilter, RealPoly};

const SYM_TOL: f64 = 1e-9;

/// Even all-pass function
/// `a(z) = s (-1)^(m+r) B(z^2) / (z^(2m) B_rev(z^2))`, where `B` has degree
/// `r`, `B_rev(w) = w^r B(1/w)` and `s = a(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AllPass {
    sign_at_i: i64,
    m: usize,
    b: RealPoly,
}

fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl AllPass {
    pub fn new(sign_at_i: i64, m: usize, b: RealPoly) -> Result<Self> {
        if sign_at_i != 1 && sign_at_i != -1 {
            return Err(Error::InvalidAllPass(format!(
                "sign at i must be +1 or -1, got {sign_at_i}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidAllPass(
                "the pole at 0 must have multiplicity at least 2".into(),
            ));
        }
        if b.is_zero() || b.coeffs()[0] == 0.0 {
            return Err(Error::InvalidAllPass("B must satisfy B(0) != 0".into()));
        }
        if b.degree() > 0 && poly_gcd(&b, &b.reciprocal())?.degree() > 0 {
            return Err(Error::InvalidAllPass(
                "B shares a root with its reciprocal".into(),
            ));
        }
        Ok(Self { sign_at_i, m, b })
    }

    /// Reads `a = num / den`, checking that it is even, all-pass and has a
    /// pole of order at least 2 at the origin.
    pub fn from_rational(num: &RealPoly, den: &RealPoly) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::InvalidAllPass("zero numerator or denominator".into()));
        }
        let (b, alpha) = even_body(num)?;
        let (q, kappa) = even_body(den)?;
        if kappa < alpha + 2 {
            return Err(Error::InvalidAllPass(
                "the pole at 0 must have multiplicity at least 2".into(),
            ));
        }
        let m = (kappa - alpha) / 2;
        let r = b.degree();
        if q.degree() != r {
            return Err(Error::InvalidAllPass("not all-pass: degree mismatch".into()));
        }
        let rev = b.reciprocal();
        let k = q.coeffs()[0] / rev.coeffs()[0];
        let misfit = rev
            .coeffs()
            .iter()
            .zip(q.coeffs())
            .map(|(x, y)| (k * x - y).abs())
            .fold(0.0, f64::max);
        if misfit > 1e-10 * q.norm_inf() || (k.abs() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidAllPass(
                "not all-pass: |a| != 1 on the unit circle".into(),
            ));
        }
        let s = k.signum() * parity(m + r);
        Self::new(s as i64, m, b)
    }

    pub fn sign_at_i(&self) -> i64 {
        self.sign_at_i
    }

    /// Half the multiplicity of the pole at 0.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.b.degree()
    }

    pub fn b(&self) -> &RealPoly {
        &self.b
    }

    pub fn pole_order_at_zero(&self) -> usize {
        2 * self.m
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z * z;
        let lead = self.sign_at_i as f64 * parity(self.m + self.r());
        lead * self.b.eval(w) / (w.powi(self.m as i32) * self.b.reciprocal().eval(w))
    }

    /// `A_r(z) = sum_j b_j (1-z)^(2j) (1+z)^(2r-2j)`, i.e. `A(z) / (1+z)^(2m)`.
    fn reduced_a(&self) -> RealPoly {
        let r = self.r();
        let mut out = RealPoly::zero();
        for (j, &bj) in self.b.coeffs().iter().enumerate() {
            let term = &RealPoly::binomial_power(1.0, -1.0, 2 * j)
                * &RealPoly::binomial_power(1.0, 1.0, 2 * r - 2 * j);
            out = &out + &term.scale(bj);
        }
        out
    }
}

/// Strips the power of `z` dividing `p` and returns the remaining even
/// polynomial as a polynomial in `w = z^2`.
fn even_body(p: &RealPoly) -> Result<(RealPoly, usize)> {
    let cut = 1e-13 * p.norm_inf();
    let c = p.coeffs();
    if c.iter().skip(1).step_by(2).any(|x| x.abs() > cut) {
        return Err(Error::InvalidAllPass("not an even function".into()));
    }
    let low = c.iter().position(|x| x.abs() > cut).unwrap_or(0);
    let body: Vec<f64> = c[low..].iter().step_by(2).copied().collect();
    Ok((RealPoly::new(body), low))
}

/// 0-SYM filter attached to an even all-pass function.
pub fn build_from_allpass(a: &AllPass) -> Result<RationalFilter> {
    let c = a.sign_at_i as f64 * parity(a.m + a.r());
    assemble_filter(a.m, &a.reduced_a(), c)
}

/// Inverse of [`build_from_allpass`].
pub fn extract_allpass(h: &RationalFilter) -> Result<AllPass> {
    let dev = sym_deviations(h);
    if dev.reflection > SYM_TOL {
        return Err(Error::SymmetryViolation {
            identity: "H(z) = H(1/z)",
            deviation: dev.reflection,
        });
    }
    if dev.power_complement > SYM_TOL {
        return Err(Error::SymmetryViolation {
            identity: "H(z)^2 + H(-z)^2 = 1",
            deviation: dev.power_complement,
        });
    }
    let at_one = h.eval(Complex64::new(1.0, 0.0));
    if (at_one - 1.0).norm() > 1e-10 {
        return Err(Error::InvalidInput(format!(
            "filter is not normalized: H(1) = {at_one}"
        )));
    }
    let k = h.minus_one_order();
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidAllPass(format!("zero of odd order {k} at -1")));
    }
    let m = k / 2;
    let order = h.order();
    if !order.is_multiple_of(4) || order / 4 < m {
        return Err(Error::InvalidAllPass(format!(
            "order {order} incompatible with m = {m}"
        )));
    }
    let r = order / 4 - m;

    // den - num = A(-z)^2 up to a constant
    let mut w = h.den() - h.num();
    for _ in 0..4 * m {
        w = w.deflate_real(1.0).0;
    }
    if w.leading() < 0.0 {
        w = -&w;
    }
    let a_r = sqrt_palindromic(&w, 2 * r).reflect();

    let bil = a_r.bilinear_transform();
    let scale = 4f64.powi(r as i32);
    let b: Vec<f64> = (0..=r)
        .map(|j| bil.coeffs().get(2 * j).copied().unwrap_or(0.0) / scale)
        .collect();
    let s = h.eval(Complex64::i()).re.signum() as i64;
    AllPass::new(s, m, RealPoly::new(b))
}

/// Square root of degree `d` of a square of a palindromic polynomial,
/// computed from the top coefficients and mirrored.
fn sqrt_palindromic(w: &RealPoly, d: usize) -> RealPoly {
    let c = w.coeffs();
    let top = 2 * d;
    let mut s = vec![0.0; d + 1];
    s[d] = c.get(top).copied().unwrap_or(0.0).max(0.0).sqrt();
    for k in 1..=d / 2 {
        let cross: f64 = (1..k).map(|j| s[d - j] * s[d - k + j]).sum();
        s[d - k] = (c.get(top - k).copied().unwrap_or(0.0) - cross) / (2.0 * s[d]);
    }
    for i in 0..d / 2 {
        s[i] = s[d - i];
    }
    RealPoly::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symdesign::{maxflat, MaxflatId};

    fn poly(c: &[f64]) -> RealPoly {
        RealPoly::new(c.to_vec())
    }

    fn assert_same_filter(a: &RationalFilter, b: &RationalFilter, tol: f64) {
        let sa = a.den().eval_real(1.0);
        let sb = b.den().eval_real(1.0);
        for (x, y) in [(a.num(), b.num()), (a.den(), b.den())] {
            assert_eq!(x.degree(), y.degree());
            for (p, q) in x.coeffs().iter().zip(y.coeffs()) {
                assert!((p / sa - q / sb).abs() <= tol, "{p} vs {q}");
            }
        }
    }

    #[test]
    fn minus_inverse_square_gives_first_maxflat() {
        let a = AllPass::from_rational(&poly(&[-1.0]), &poly(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(a.sign_at_i(), 1);
        let h = build_from_allpass(&a).unwrap();
        let e = maxflat(MaxflatId { n: 1, delta: 0 }).unwrap();
        assert_same_filter(&h, &e, 1e-12);

        let a = AllPass::from_rational(&poly(&[1.0]), &poly(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(a.sign_at_i(), -1);
        let e = maxflat(MaxflatId { n: 1, delta: 1 }).unwrap();
        assert_same_filter(&build_from_allpass(&a).unwrap(), &e, 1e-12);
    }

    #[test]
    fn pole_at_infinity_is_rejected() {
        let r = AllPass::from_rational(&poly(&[0.0, 0.0, 1.0]), &poly(&[1.0]));
        assert!(matches!(r, Err(Error::InvalidAllPass(_))));
    }

    #[test]
    fn odd_or_non_allpass_input_is_rejected() {
        assert!(AllPass::from_rational(&poly(&[0.0, 1.0]), &poly(&[0.0, 0.0, 0.0, 1.0])).is_err());
        assert!(AllPass::from_rational(&poly(&[2.0]), &poly(&[0.0, 0.0, 1.0])).is_err());
        assert!(AllPass::from_rational(&poly(&[1.0, 0.0, 3.0]), &poly(&[0.0, 0.0, 1.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn extraction_of_maxflat() {
        let a = extract_allpass(&maxflat(MaxflatId { n: 1, delta: 0 }).unwrap()).unwrap();
        assert_eq!(a.pole_order_at_zero(), 2);
        assert!(a.eval(Complex64::i()).re > 0.0);
        let a = extract_allpass(&maxflat(MaxflatId { n: 3, delta: 1 }).unwrap()).unwrap();
        assert_eq!(a.pole_order_at_zero(), 6);
        assert_eq!(a.r(), 0);
        let z = Complex64::new(0.4, 0.9);
        assert!((a.eval(z) - z.powi(-6)).norm() < 1e-12);
    }

    #[test]
    fn haar_is_not_zero_symmetric() {
        let h = RationalFilter::from_poly(poly(&[0.5, 0.5])).unwrap();
        assert!(matches!(
            extract_allpass(&h),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn round_trip_with_nontrivial_b() {
        let b = poly(&[1.0, -0.3, 0.5]);
        let a = AllPass::new(-1, 2, b).unwrap();
        let h = build_from_allpass(&a).unwrap();
        let back = extract_allpass(&h).unwrap();
        assert_eq!((back.m(), back.r(), back.sign_at_i()), (2, 2, -1));
        for k in 0..64 {
            let z = Complex64::from_polar(1.0 + 0.01 * k as f64, 0.3 + 0.1 * k as f64);
            assert!((back.eval(z) - a.eval(z)).norm() < 1e-10 * (1.0 + a.eval(z).norm()));
            assert!((a.eval(z) * a.eval(z.inv()) - 1.0).norm() < 1e-10);
            assert!((a.eval(z) - a.eval(-z)).norm() < 1e-10 * (1.0 + a.eval(z).norm()));
        }
        assert_same_filter(&build_from_allpass(&back).unwrap(), &h, 1e-10);
    }
}
