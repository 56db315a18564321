use nalgebra::{linalg::Schur, DMatrix};
use num_complex::Complex64;

use super::RealPoly;
use crate::error::{Error, Result};

/// Roots at exactly representable points (0, +1, -1) are split off when the
/// Taylor coefficients there vanish to this relative level.
const SNAP_TOL: f64 = 1e-10;
/// Eigenvalues closer than this (relative) are candidates for one multiple root.
const CLUSTER_REL: f64 = 1e-6;
/// Verification tolerance for a merged cluster.
const CLUSTER_CHECK_TOL: f64 = 1e-7;
/// Imaginary parts below this (relative) are treated as rounding residue.
const REAL_SNAP_REL: f64 = 1e-10;
/// Conjugate partners must agree to this (relative) before they are averaged.
const PAIR_REL: f64 = 1e-6;

/// Roots of a real polynomial with their multiplicities.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexRootSet {
    roots: Vec<(Complex64, usize)>,
}

impl ComplexRootSet {
    pub fn new(roots: Vec<(Complex64, usize)>) -> Self {
        Self { roots }
    }

    pub fn roots(&self) -> &[(Complex64, usize)] {
        &self.roots
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// Every root repeated according to its multiplicity.
    pub fn values(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|&(r, m)| std::iter::repeat_n(r, m))
            .collect()
    }

    /// Total multiplicity of roots within `tol` of `z`.
    pub fn multiplicity_near(&self, z: Complex64, tol: f64) -> usize {
        self.roots
            .iter()
            .filter(|(r, _)| (r - z).norm() <= tol)
            .map(|(_, m)| m)
            .sum()
    }

    /// `lead * prod (z - r)^m`.
    pub fn expand(&self, lead: f64) -> RealPoly {
        RealPoly::from_roots(&self.values()).scale(lead)
    }

    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        self.roots
            .iter()
            .all(|&(r, m)| self.multiplicity_near(r.conj(), tol * (1.0 + r.norm())) >= m)
    }
}

/// Companion-matrix eigenvalues, Newton polished, with multiple roots grouped.
///
/// Exact factors at 0, 1 and -1 are split off first by synthetic division so
/// the binomial factors that dominate filter numerators do not smear into
/// clusters.
pub fn poly_roots(p: &RealPoly) -> Result<ComplexRootSet> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no root set".into()));
    }
    let mut found: Vec<(Complex64, usize)> = Vec::new();

    let zeros = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    let mut work = RealPoly::exact(p.coeffs()[zeros..].to_vec());
    if zeros > 0 {
        found.push((Complex64::new(0.0, 0.0), zeros));
    }
    for point in [1.0, -1.0] {
        let k = work.multiplicity_at(Complex64::new(point, 0.0), SNAP_TOL);
        if k > 0 {
            for _ in 0..k {
                work = work.deflate_real(point).0;
            }
            found.push((Complex64::new(point, 0.0), k));
        }
    }

    let mut simple = match work.degree() {
        0 => Vec::new(),
        1 => vec![Complex64::new(-work.coeffs()[0] / work.coeffs()[1], 0.0)],
        2 => quadratic_roots(work.coeffs()),
        _ => companion_eigenvalues(&work)?,
    };
    for r in simple.iter_mut() {
        *r = newton_polish(&work, *r);
    }
    let clustered = cluster(&work, simple);
    found.extend(enforce_conjugate_pairs(clustered));
    Ok(ComplexRootSet::new(found))
}

fn quadratic_roots(c: &[f64]) -> Vec<Complex64> {
    let (a, b, cc) = (c[2], c[1], c[0]);
    let disc = b * b - 4.0 * a * cc;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return vec![Complex64::new(0.0, 0.0); 2];
        }
        vec![Complex64::new(q / a, 0.0), Complex64::new(cc / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn companion_eigenvalues(p: &RealPoly) -> Result<Vec<Complex64>> {
    let d = p.degree();
    let lead = p.leading();
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            m[(i + 1, i)] = 1.0;
        }
        m[(i, d - 1)] = -p.coeffs()[i] / lead;
    }
    balance(&mut m);
    match Schur::try_new(m, f64::EPSILON, 5_000) {
        Some(schur) => Ok(schur.complex_eigenvalues().iter().copied().collect()),
        None => aberth(p),
    }
}

/// Aberth-Ehrlich simultaneous iteration, used when the QR iteration stalls
/// (it can cycle on root sets with several equal-modulus symmetric roots).
fn aberth(p: &RealPoly) -> Result<Vec<Complex64>> {
    let d = p.degree();
    let c = p.coeffs();
    let radius = (c[0].abs() / c[d].abs())
        .powf(1.0 / d as f64)
        .max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..1_000 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (v, dv) = p.eval_with_derivative(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved <= 4.0 * f64::EPSILON {
            break;
        }
    }
    if z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(Error::RootFinding(format!("root iteration diverged, degree {d}")));
    }
    Ok(z)
}

/// Parlett-Reinsch diagonal similarity scaling with radix 2.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += m[(j, i)].abs();
                    row += m[(i, j)].abs();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / 2.0;
            while col < g {
                f *= 2.0;
                col *= 4.0;
            }
            g = row * 2.0;
            while col > g {
                f /= 2.0;
                col /= 4.0;
            }
            if (col + row) / f < 0.95 * total {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

fn newton_polish(p: &RealPoly, mut z: Complex64) -> Complex64 {
    let mut best = p.eval(z).norm();
    for _ in 0..8 {
        let (v, dv) = p.eval_with_derivative(z);
        if dv.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        let val = p.eval(next).norm();
        if !(val < best) {
            break;
        }
        best = val;
        z = next;
    }
    z
}

/// Merges eigenvalues that represent one multiple root. A cluster is only
/// accepted when the polynomial really vanishes to that order at its centroid.
fn cluster(p: &RealPoly, mut roots: Vec<Complex64>) -> Vec<(Complex64, usize)> {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let radius = CLUSTER_REL * roots[i].norm().max(1.0);
        let members: Vec<usize> = (i..roots.len())
            .filter(|&j| !used[j] && (roots[j] - roots[i]).norm() <= radius)
            .collect();
        if members.len() > 1 {
            let centroid = members.iter().map(|&j| roots[j]).sum::<Complex64>() / members.len() as f64;
            if p.multiplicity_at(centroid, CLUSTER_CHECK_TOL) >= members.len() {
                for &j in &members {
                    used[j] = true;
                }
                out.push((centroid, members.len()));
                continue;
            }
        }
        used[i] = true;
        out.push((roots[i], 1));
    }
    out
}

fn enforce_conjugate_pairs(roots: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize)> {
    let mut roots: Vec<(Complex64, usize)> = roots
        .into_iter()
        .map(|(r, m)| {
            if r.im.abs() <= REAL_SNAP_REL * (1.0 + r.norm()) {
                (Complex64::new(r.re, 0.0), m)
            } else {
                (r, m)
            }
        })
        .collect();
    let n = roots.len();
    let mut paired = vec![false; n];
    for i in 0..n {
        if paired[i] || roots[i].0.im <= 0.0 {
            continue;
        }
        let target = roots[i].0.conj();
        let partner = (0..n)
            .filter(|&j| !paired[j] && roots[j].0.im < 0.0 && roots[j].1 == roots[i].1)
            .min_by(|&a, &b| {
                (roots[a].0 - target)
                    .norm()
                    .total_cmp(&(roots[b].0 - target).norm())
            });
        if let Some(j) = partner {
            if (roots[j].0 - target).norm() <= PAIR_REL * (1.0 + target.norm()) {
                let mid = (roots[i].0 + roots[j].0.conj()) / 2.0;
                roots[i].0 = mid;
                roots[j].0 = mid.conj();
                paired[i] = true;
                paired[j] = true;
            }
        }
    }
    roots
}

/// Monic approximate GCD by the Euclidean algorithm; remainders below
/// `1e-8` of the current dividend (after normalization) count as zero.
pub fn poly_gcd(a: &RealPoly, b: &RealPoly) -> Result<RealPoly> {
    const GCD_TOL: f64 = 1e-8;
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("gcd of two zero polynomials".into()));
    }
    if a.is_zero() {
        return Ok(b.monic());
    }
    if b.is_zero() {
        return Ok(a.monic());
    }
    let normalize = |p: &RealPoly| p.scale(1.0 / p.norm_inf());
    let (mut x, mut y) = if a.degree() >= b.degree() {
        (normalize(a), normalize(b))
    } else {
        (normalize(b), normalize(a))
    };
    loop {
        if y.degree() == 0 {
            return Ok(RealPoly::one());
        }
        let (_, r) = x.div_rem(&y);
        if r.norm_inf() <= GCD_TOL * x.norm_inf().max(y.norm_inf()) {
            return Ok(y.monic());
        }
        x = y;
        y = normalize(&r);
    }
}

/// Largest coefficientwise deviation of `lead * prod (z - r)` from `p`,
/// relative to `||p||_inf`.
pub fn reexpansion_residual(p: &RealPoly, roots: &ComplexRootSet) -> f64 {
    let back = roots.expand(p.leading());
    let n = back.coeffs().len().max(p.coeffs().len());
    let diff = (0..n)
        .map(|k| (back.coeffs().get(k).unwrap_or(&0.0) - p.coeffs().get(k).unwrap_or(&0.0)).abs())
        .fold(0.0, f64::max);
    diff / p.norm_inf()
}
