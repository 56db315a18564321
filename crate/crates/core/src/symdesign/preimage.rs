use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use super::assemble_filter;
use super::mobius::eta;
use crate::error::{Error, Result, SpecViolation};
use crate::polyrat::{RationalFilter, RealPoly};

const SPEC_TOL: f64 = 1e-10;

/// Parameters identifying one 0-SYM filter: half the order of the zero at
/// `-1`, the sign of `H(i)`, and the preimages of one `Lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreimageSpec {
    pub m: i64,
    pub sign_at_i: i64,
    pub lambdas: Vec<Complex64>,
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= SPEC_TOL * (1.0 + a.norm().max(b.norm()))
}

fn is_real(z: Complex64) -> bool {
    z.im.abs() <= SPEC_TOL * (1.0 + z.norm())
}

/// Representative of `{lambda, 1/lambda}` with `|lambda| >= 1`, and
/// `Im >= 0` on the unit circle.
fn canonical_lambda(l: Complex64) -> Complex64 {
    let r = l.norm();
    let flip = if (r - 1.0).abs() <= SPEC_TOL {
        l.im < 0.0
    } else {
        r < 1.0
    };
    let v = if flip { l.inv() } else { l };
    if (v.norm() - 1.0).abs() <= SPEC_TOL && v.im.abs() <= SPEC_TOL {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

impl PreimageSpec {
    pub fn new(m: i64, sign_at_i: i64, lambdas: Vec<Complex64>) -> Self {
        Self {
            m,
            sign_at_i,
            lambdas,
        }
    }

    pub fn r(&self) -> usize {
        self.lambdas.len()
    }

    /// Checks every constraint on `(m, sign, Lambda)`.
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(SpecViolation::ZeroMultiplicity(self.m).into());
        }
        if self.sign_at_i != 1 && self.sign_at_i != -1 {
            return Err(SpecViolation::BadSign(self.sign_at_i).into());
        }
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        for &l in &self.lambdas {
            if !l.re.is_finite() || !l.im.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite preimage {l}")));
            }
            if l.norm() <= SPEC_TOL || [one, -one, i, -i].iter().any(|&f| close(l, f)) {
                return Err(SpecViolation::ForbiddenValue(l).into());
            }
        }
        for (a, &la) in self.lambdas.iter().enumerate() {
            for &lb in &self.lambdas[a + 1..] {
                if close(la, -lb) || close(la * lb, -one) {
                    return Err(SpecViolation::NegationPair(la, lb).into());
                }
                if close(la * lb, one) && !close(la, lb) {
                    return Err(SpecViolation::ReciprocalPair(la, lb).into());
                }
            }
        }
        let etas: Vec<Complex64> = self.lambdas.iter().map(|&l| eta(l)).collect::<Result<_>>()?;
        let mut used = vec![false; etas.len()];
        for a in 0..etas.len() {
            if used[a] || is_real(etas[a]) {
                continue;
            }
            let partner = (0..etas.len()).find(|&b| b != a && !used[b] && close(etas[b], etas[a].conj()));
            match partner {
                Some(b) => {
                    used[a] = true;
                    used[b] = true;
                }
                None => return Err(SpecViolation::ConjugateClosure(self.lambdas[a]).into()),
            }
        }
        Ok(())
    }

    /// Validated copy with each `lambda` replaced by its canonical
    /// representative and the multiset sorted.
    pub fn canonical(&self) -> Result<Self> {
        self.validate()?;
        let mut lambdas: Vec<Complex64> = self.lambdas.iter().map(|&l| canonical_lambda(l)).collect();
        lambdas.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(Self {
            m: self.m,
            sign_at_i: self.sign_at_i,
            lambdas,
        })
    }

    /// `prod_j (z^2 + 2 eta(lambda_j) z + 1)`, conjugate pairs combined first.
    pub(crate) fn quadratic_product(&self) -> Result<RealPoly> {
        let etas: Vec<Complex64> = self.lambdas.iter().map(|&l| eta(l)).collect::<Result<_>>()?;
        let mut used = vec![false; etas.len()];
        let mut out = RealPoly::one();
        for a in 0..etas.len() {
            if used[a] {
                continue;
            }
            used[a] = true;
            let e = etas[a];
            let factor = if is_real(e) {
                RealPoly::exact(vec![1.0, 2.0 * e.re, 1.0])
            } else {
                let b = (0..etas.len())
                    .find(|&b| !used[b] && close(etas[b], e.conj()))
                    .ok_or(SpecViolation::ConjugateClosure(self.lambdas[a]))?;
                used[b] = true;
                let s = 4.0 * e.re;
                RealPoly::exact(vec![1.0, s, 2.0 + 4.0 * e.norm_sqr(), s, 1.0])
            };
            out = &out * &factor;
        }
        Ok(out)
    }
}

/// Filter with `2m` zeros at `-1`, prescribed preimages of one and sign at `i`.
pub fn build_from_preimages(spec: &PreimageSpec) -> Result<RationalFilter> {
    let spec = spec.canonical()?;
    let a_r = spec.quadratic_product()?;
    let m = spec.m as usize;
    let c = (spec.sign_at_i * if (m + spec.r()).is_multiple_of(2) { 1 } else { -1 }) as f64;
    assemble_filter(m, &a_r, c)
}

/// Filter vanishing in the stopband at `e^{+-i theta}` for each `theta`, plus
/// the preimages in `extra`, which must lie off the circle in `Re > 0`.
pub fn design_stopband(
    m: i64,
    sign_at_i: i64,
    thetas: &[f64],
    extra: &[Complex64],
) -> Result<RationalFilter> {
    for &t in thetas {
        if !(t > FRAC_PI_2 && t < PI) {
            return Err(SpecViolation::ThetaOutOfStopband(t).into());
        }
    }
    for &l in extra {
        if !(l.re > 0.0) || (l.norm() - 1.0).abs() <= SPEC_TOL {
            return Err(SpecViolation::ExtraOutsideHalfPlane(l).into());
        }
    }
    let mut lambdas: Vec<Complex64> = thetas.iter().map(|&t| -Complex64::from_polar(1.0, t)).collect();
    lambdas.extend_from_slice(extra);
    build_from_preimages(&PreimageSpec::new(m, sign_at_i, lambdas))
}

/// Derivative of the frequency response at `xi = pi/2`.
pub fn transition_slope(spec: &PreimageSpec) -> Result<f64> {
    spec.validate()?;
    let mut sum = Complex64::new(spec.m as f64, 0.0);
    for &l in &spec.lambdas {
        sum += eta(l)?.inv();
    }
    Ok(-(2.0 - SQRT_2 * spec.sign_at_i as f64) * sum.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, PI * t)
    }

    #[test]
    fn validation_names_each_violation() {
        let bad = |l: Vec<Complex64>| PreimageSpec::new(1, 1, l).validate().unwrap_err();
        assert!(matches!(
            bad(vec![circ(1.0)]),
            Error::Spec(SpecViolation::ForbiddenValue(_))
        ));
        assert!(matches!(
            bad(vec![circ(0.5)]),
            Error::Spec(SpecViolation::ForbiddenValue(_))
        ));
        assert!(matches!(
            bad(vec![Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)]),
            Error::Spec(SpecViolation::NegationPair(..))
        ));
        assert!(matches!(
            bad(vec![Complex64::new(2.0, 0.0), Complex64::new(-0.5, 0.0)]),
            Error::Spec(SpecViolation::NegationPair(..))
        ));
        assert!(matches!(
            bad(vec![Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)]),
            Error::Spec(SpecViolation::ReciprocalPair(..))
        ));
        assert!(matches!(
            bad(vec![Complex64::new(2.0, 1.0)]),
            Error::Spec(SpecViolation::ConjugateClosure(_))
        ));
        assert!(matches!(
            PreimageSpec::new(0, 1, vec![]).validate(),
            Err(Error::Spec(SpecViolation::ZeroMultiplicity(0)))
        ));
        assert!(matches!(
            PreimageSpec::new(1, 2, vec![]).validate(),
            Err(Error::Spec(SpecViolation::BadSign(2)))
        ));
    }

    #[test]
    fn repeated_and_conjugate_entries_are_accepted() {
        let l = Complex64::new(2.0, 1.0);
        PreimageSpec::new(1, 1, vec![l, l.conj()]).validate().unwrap();
        PreimageSpec::new(1, 1, vec![circ(0.3), circ(0.3)])
            .validate()
            .unwrap();
    }

    #[test]
    fn canonical_form_picks_outer_upper_representative() {
        let a = PreimageSpec::new(1, 1, vec![circ(-0.3), Complex64::new(0.25, 0.0)]);
        let c = a.canonical().unwrap();
        assert!((c.lambdas[0] - circ(0.3)).norm() < 1e-15);
        assert!((c.lambdas[1] - Complex64::new(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn stopband_angle_outside_range_is_rejected() {
        assert!(matches!(
            design_stopband(1, 1, &[PI / 4.0], &[]),
            Err(Error::Spec(SpecViolation::ThetaOutOfStopband(_)))
        ));
        assert!(matches!(
            design_stopband(1, 1, &[], &[Complex64::new(-2.0, 0.0)]),
            Err(Error::Spec(SpecViolation::ExtraOutsideHalfPlane(_)))
        ));
    }

    #[test]
    fn slope_examples() {
        let s = transition_slope(&PreimageSpec::new(1, 1, vec![])).unwrap();
        assert!((s + (2.0 - SQRT_2)).abs() < 1e-15);
        let spec = PreimageSpec::new(1, 1, vec![circ(0.21), circ(0.31)]);
        let expect = -(2.0 - SQRT_2) * (1.0 + 1.0 / (0.21 * PI).cos() + 1.0 / (0.31 * PI).cos());
        assert!((transition_slope(&spec).unwrap() - expect).abs() < 1e-12);
        let flipped = transition_slope(&PreimageSpec::new(1, -1, vec![])).unwrap();
        assert!((flipped / s - (2.0 + SQRT_2) / (2.0 - SQRT_2)).abs() < 1e-12);
    }
}
