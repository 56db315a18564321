use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use symqmf::analysis::{qmf_residual, vanishing_moments};
use symqmf::cascade::{fir_approximate, qmf_defect};
use symqmf::polyrat::{
    poly_roots, reexpansion_residual, unit_circle, RationalFilter, RealPoly, ZERO_ORDER_TOL,
};
use symqmf::symdesign::{
    beta, build_from_allpass, build_from_preimages, eta, extract_allpass, maxflat, nu, MaxflatId,
    PreimageSpec,
};
use symqmf::synthesis::freq_response;

#[derive(Clone, Debug)]
enum Atom {
    Circle(f64),
    Real(f64),
    Pair(f64, f64),
}

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (0.1f64..0.45).prop_map(Atom::Circle),
        (1.5f64..4.0, any::<bool>()).prop_map(|(x, neg)| Atom::Real(if neg { -x } else { x })),
        (1.3f64..3.0, 0.1f64..0.45).prop_map(|(r, t)| Atom::Pair(r, t)),
    ]
}

fn spec() -> impl Strategy<Value = PreimageSpec> {
    (1i64..=3, any::<bool>(), prop::collection::vec(atom(), 0..=2))
        .prop_map(|(m, plus, atoms)| {
            let mut lambdas = Vec::new();
            for a in atoms {
                match a {
                    Atom::Circle(t) => lambdas.push(Complex64::from_polar(1.0, PI * t)),
                    Atom::Real(x) => lambdas.push(Complex64::new(x, 0.0)),
                    Atom::Pair(r, t) => {
                        let l = Complex64::from_polar(r, PI * t);
                        lambdas.push(l);
                        lambdas.push(l.conj());
                    }
                }
            }
            PreimageSpec::new(m, if plus { 1 } else { -1 }, lambdas)
        })
        .prop_filter("valid spec", |s| s.validate().is_ok())
}

fn point() -> impl Strategy<Value = Complex64> {
    (0.5f64..2.0, any::<bool>(), -PI..PI)
        .prop_map(|(r, on, t)| Complex64::from_polar(if on { 1.0 } else { r }, t))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_grid_diff(a: &RationalFilter, b: &RationalFilter, n: usize) -> f64 {
    unit_circle(n)
        .map(|z| (a.eval(z) - b.eval(z)).norm())
        .fold(0.0, f64::max)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn built_filters_satisfy_both_identities(s in spec(), z in point()) {
        let h = build_from_preimages(&s).unwrap();
        let (a, b) = (h.eval(z), h.eval(-z));
        let scale = 1.0 + a.norm_sqr() + b.norm_sqr();
        prop_assert!((a * a + b * b - 1.0).norm() <= 1e-10 * scale);
        prop_assert!((a - h.eval(z.inv())).norm() <= 1e-10 * (1.0 + a.norm()));
    }

    #[test]
    fn built_filters_are_qmf_and_realizable(s in spec()) {
        let h = build_from_preimages(&s).unwrap();
        prop_assert!(qmf_residual(&h, 4096).unwrap() <= 1e-10);
        h.validate().unwrap();
        for (p, _) in h.poles().unwrap().roots() {
            prop_assert!((p.norm() - 1.0).abs() > 1e-9);
            prop_assert!(p.im.abs() > 1e-9);
        }
    }

    #[test]
    fn values_at_zero_and_i(s in spec()) {
        let h = build_from_preimages(&s).unwrap();
        // rounding in the expanded coefficients scales with sum |d_k| / |den(i)|
        let i = Complex64::i();
        let cond = h.den().coeffs().iter().map(|d| d.abs()).sum::<f64>() / h.den().eval(i).norm();
        let at_i = h.eval(i);
        prop_assert!((at_i - s.sign_at_i as f64 / SQRT_2).norm() <= 1e-12 * cond.max(1.0));
        prop_assert!((h.eval(c(0.0, 0.0)).norm() - 1.0 / SQRT_2).abs() <= 1e-12);
        prop_assert!((h.eval(c(1.0, 0.0)) - 1.0).norm() <= 1e-12);
    }

    #[test]
    fn moment_counts_follow_m(s in spec()) {
        let h = build_from_preimages(&s).unwrap();
        let m = s.m as usize;
        let (wavelet, scaling) = vanishing_moments(&h).unwrap();
        prop_assert_eq!(wavelet, 2 * m);
        prop_assert_eq!(h.minus_one_order(), 2 * m);
        // 1 - H = A(-z)^2 / den, whose leading Taylor coefficient at 1 is A_r(-1)^2
        let lead: f64 = s.lambdas.iter().map(|&l| 2.0 - 2.0 * eta(l).unwrap()).product::<Complex64>().norm_sqr();
        let one_minus = h.den() - h.num();
        let abs = RealPoly::new(one_minus.coeffs().iter().map(|x| x.abs()).collect());
        let bound = abs.taylor_at(c(1.0, 0.0))[4 * m].re;
        if lead > 1e3 * ZERO_ORDER_TOL * bound {
            prop_assert_eq!(scaling, 4 * m);
        } else {
            prop_assert!(scaling >= 4 * m);
        }
    }

    #[test]
    fn numerator_roots_reexpand(s in spec()) {
        let h = build_from_preimages(&s).unwrap();
        let roots = poly_roots(h.num()).unwrap();
        prop_assert_eq!(roots.total_multiplicity(), h.num().degree());
        prop_assert!(roots.is_conjugate_closed(1e-8));
        prop_assert!(reexpansion_residual(h.num(), &roots) <= 1e-9);
        let zeros = h.zeros().unwrap();
        prop_assert_eq!(zeros.total_multiplicity(), h.num().degree());
    }

    #[test]
    fn allpass_round_trip(s in spec()) {
        let h = build_from_preimages(&s).unwrap();
        let a = extract_allpass(&h).unwrap();
        prop_assert_eq!(a.m(), s.m as usize);
        prop_assert_eq!(a.r(), s.r());
        prop_assert_eq!(a.sign_at_i(), s.sign_at_i);
        let back = build_from_allpass(&a).unwrap();
        prop_assert!(max_grid_diff(&h, &back, 512) <= 1e-10);
        let again = extract_allpass(&back).unwrap();
        for (x, y) in a.b().coeffs().iter().zip(again.b().coeffs()) {
            prop_assert!((x - y).abs() <= 1e-8 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn response_bands_follow_allpass_values(s in spec()) {
        let h = build_from_preimages(&s).unwrap();
        let a = extract_allpass(&h).unwrap();
        for k in 1..128 {
            let xi = PI * k as f64 / 128.0;
            let w = c(0.0, -(xi / 2.0).tan());
            let x = a.eval(w);
            if !x.re.is_finite() || x.norm() > 1e8 {
                continue;
            }
            prop_assert!(x.im.abs() <= 1e-8 * (1.0 + x.norm()));
            let x = x.re;
            let v = h.eval(Complex64::from_polar(1.0, xi)).re;
            let inside = !(-SQRT_2 - 1e-8..=1e-8).contains(&x);
            let outside = x > -SQRT_2 + 1e-8 && x < -1e-8;
            if inside {
                prop_assert!(v > -1e-8 && v < 1.0 + 1e-8, "xi = {}, a = {}, H = {}", xi, x, v);
            }
            if outside {
                prop_assert!(v < 1e-8, "xi = {}, a = {}, H = {}", xi, x, v);
            }
            if v > 1e-8 && v < 1.0 - 1e-8 {
                prop_assert!(!(-SQRT_2 + 1e-8..=-1e-8).contains(&x));
            }
            if (x + SQRT_2).abs() <= 1e-12 || x.abs() <= 1e-12 {
                prop_assert!(v.abs() <= 1e-8);
            }
            let expect = nu(c(1.0 / x, 0.0)).unwrap().re;
            prop_assert!((v - expect).abs() <= 1e-8);
        }
    }

    #[test]
    fn distinct_specs_give_distinct_filters(s in spec(), t in spec()) {
        let (cs, ct) = (s.canonical().unwrap(), t.canonical().unwrap());
        let same = cs.m == ct.m
            && cs.sign_at_i == ct.sign_at_i
            && cs.lambdas.len() == ct.lambdas.len()
            && cs.lambdas.iter().zip(&ct.lambdas).all(|(a, b)| (a - b).norm() <= 1e-9);
        let hs = build_from_preimages(&s).unwrap();
        let ht = build_from_preimages(&t).unwrap();
        let d = max_grid_diff(&hs, &ht, 1024);
        if same {
            prop_assert!(d <= 1e-10);
        } else {
            prop_assert!(d > 1e-8);
        }
    }

    #[test]
    fn reciprocal_preimages_are_interchangeable(s in spec()) {
        let inverted = PreimageSpec::new(s.m, s.sign_at_i, s.lambdas.iter().map(|l| l.inv()).collect());
        let a = build_from_preimages(&s).unwrap();
        let b = build_from_preimages(&inverted).unwrap();
        prop_assert!(max_grid_diff(&a, &b, 256) <= 1e-10);
    }

    #[test]
    fn response_stays_in_unit_range(s in spec()) {
        let h = build_from_preimages(&s).unwrap();
        let g = freq_response(&h, 1024).unwrap();
        for &v in g.values() {
            prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&v));
        }
    }

    #[test]
    fn nu_squares_sum_to_one(z in point()) {
        if let (Ok(a), Ok(b)) = (nu(z), nu(z.inv())) {
            let scale = 1.0 + a.norm_sqr() + b.norm_sqr();
            prop_assert!((a * a + b * b - 1.0).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn beta_conjugates_inverse_eta_to_squaring(z in point()) {
        let w = beta(eta(beta(z).unwrap()).unwrap().inv()).unwrap();
        prop_assert!((w - z * z).norm() <= 1e-10 * (1.0 + z.norm_sqr()));
    }

    #[test]
    fn maxflat_recurrence(s in 1i64..=3, delta in 0i64..=1, z in point()) {
        let big = maxflat(MaxflatId { n: 2 * s, delta }).unwrap();
        let small = maxflat(MaxflatId { n: s, delta: (delta + s) % 2 }).unwrap();
        let lhs = big.eval(z);
        let rhs = small.eval(eta(z).unwrap().inv());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn maxflat_conjugate_is_polynomial(n in 1i64..=4, delta in 0i64..=1, z in point()) {
        let e = maxflat(MaxflatId { n, delta }).unwrap();
        let sign = if (n + delta) % 2 == 0 { 1.0 } else { -1.0 };
        let inner = -beta(z).unwrap();
        let lhs = beta(-e.eval(inner)).unwrap();
        let base = &RealPoly::one() + &RealPoly::monomial(2 * n as usize).scale(sign * SQRT_2);
        let rhs = (&base * &base).eval(z);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn inverse_eta_orbits_reach_one(xi in -(FRAC_PI_2 - 0.1)..(FRAC_PI_2 - 0.1)) {
        let mut z = Complex64::from_polar(1.0, xi);
        let mut steps = 0;
        while (z - 1.0).norm() > 1e-9 {
            z = eta(z).unwrap().inv();
            steps += 1;
            prop_assert!(steps <= 60);
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn cascade_invariants(s in spec(), k in 0usize..3) {
        let h = build_from_preimages(&s).unwrap();
        let eps = [1e-4, 1e-6, 1e-8][k];
        let f = fir_approximate(&h, eps).unwrap();
        prop_assert!(f.achieved() <= eps);
        for (level, p) in f.factors() {
            prop_assert!(*level >= 1);
            prop_assert!(p.is_palindromic(1e-10));
        }
        prop_assert!(f.p().is_palindromic(1e-10));
        prop_assert!(qmf_defect(&f, 2048) < 3.0 * eps);
        let finer = fir_approximate(&h, eps / 100.0).unwrap();
        prop_assert!(finer.top_level() >= f.top_level());
        prop_assert!(finer.product_degree() >= f.product_degree());
    }
}

#[test]
fn stopband_response_decreases_with_order() {
    let filters: Vec<RationalFilter> = [2, 3, 8, 20]
        .iter()
        .map(|&n| maxflat(MaxflatId { n, delta: 0 }).unwrap())
        .collect();
    for k in 1..64 {
        let xi = FRAC_PI_2 + FRAC_PI_2 * k as f64 / 64.0;
        let z = Complex64::from_polar(1.0, xi);
        let v: Vec<f64> = filters.iter().map(|h| h.eval(z).re).collect();
        for w in v.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "xi = {xi}: {v:?}");
        }
    }
}
