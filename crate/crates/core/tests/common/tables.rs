//! Published reference values for the preimage-designed filters and the
//! cascade approximation of the order-12 maximally flat filter.

#![allow(dead_code)]

/// (re, im) of the zeros and poles for Lambda = {e^(2 pi i/5), e^(4 pi i/5)}, m = 1, sign +1.
pub const FIRST_ZEROS: [(f64, f64); 12] = [
    (-1.0, 0.0),
    (-1.0, 0.0),
    (-0.74212, -0.67026705),
    (-0.74212, 0.67026705),
    (-0.30901699, -0.95105652),
    (-0.30901699, 0.95105652),
    (0.17142917, 0.0),
    (0.65396257, -0.75652691),
    (0.65396257, 0.75652691),
    (0.80901699, -0.58778525),
    (0.80901699, 0.58778525),
    (5.8333128, 0.0),
];

pub const FIRST_POLES: [(f64, f64); 12] = [
    (-0.84955807, -0.74802903),
    (-0.84955807, 0.74802903),
    (-0.66304573, -0.58380642),
    (-0.66304573, 0.58380642),
    (0.0, -0.40197132),
    (0.0, 0.40197132),
    (0.0, -2.4877396),
    (0.0, 2.4877396),
    (0.66304573, -0.58380642),
    (0.66304573, 0.58380642),
    (0.84955807, -0.74802903),
    (0.84955807, 0.74802903),
];

/// Same for Lambda = {e^(0.21 pi i), e^(0.31 pi i)}.
pub const SECOND_ZEROS: [(f64, f64); 12] = [
    (-1.0, 0.0),
    (-1.0, 0.0),
    (-0.79015501, -0.61290705),
    (-0.79015501, 0.61290705),
    (-0.56208338, -0.82708057),
    (-0.56208338, 0.82708057),
    (0.03560146, -0.65573566),
    (0.03560146, 0.65573566),
    (0.036837087, 0.0),
    (0.082552825, -1.5205228),
    (0.082552825, 1.5205228),
    (27.146554, 0.0),
];

pub const SECOND_POLES: [(f64, f64); 12] = [
    (0.0, -0.083442717),
    (0.0, 0.083442717),
    (0.0, -0.57528543),
    (0.0, 0.57528543),
    (0.0, -0.73702991),
    (0.0, 0.73702991),
    (0.0, -1.356797),
    (0.0, 1.356797),
    (0.0, -1.7382676),
    (0.0, 1.7382676),
    (0.0, -11.984269),
    (0.0, 11.984269),
];

/// Prefactor of the cascade: the numerator of E_12^0 over 4096.
pub const CASCADE_P: [f64; 13] = [
    -0.0001011263580012439,
    0.0029296875,
    0.01818488314800746,
    0.0537109375,
    0.1156706046299813,
    0.193359375,
    0.2324912771600248,
    0.193359375,
    0.1156706046299813,
    0.0537109375,
    0.01818488314800746,
    0.0029296875,
    -0.0001011263580012439,
];

pub const CASCADE_F1: [f64; 7] = [
    -0.00268082617584078,
    0.6429247852752233,
    -4.433610674839401,
    8.58673343148004,
    -4.433610674839401,
    0.6429247852752233,
    -0.00268082617584078,
];

pub const CASCADE_F2: [f64; 7] = [
    1.348299677989997e-7,
    0.007308809891655256,
    0.162081739736554,
    0.6612186310836452,
    0.162081739736554,
    0.007308809891655256,
    1.348299677989997e-7,
];

pub const CASCADE_F3: [f64; 5] = [
    0.0001276629992294306,
    0.03971627520745388,
    0.920312123586633,
    0.03971627520745388,
    0.0001276629992294306,
];

pub const CASCADE_F4: [f64; 5] = [
    1.925310635034675e-8,
    0.001585818961857287,
    0.996828323570073,
    0.001585818961857287,
    1.925310635034675e-8,
];

pub const CASCADE_F5: [f64; 3] = [2.492072168636633e-6, 0.999995015855663, 2.492072168636633e-6];

/// Published factors with their levels.
pub fn cascade_factors() -> Vec<(usize, Vec<f64>)> {
    vec![
        (1, CASCADE_F1.to_vec()),
        (2, CASCADE_F2.to_vec()),
        (3, CASCADE_F3.to_vec()),
        (4, CASCADE_F4.to_vec()),
        (5, CASCADE_F5.to_vec()),
    ]
}

/// Greedy nearest matching; returns the largest distance between a
/// reference value and its matched computed value.
pub fn match_distance(reference: &[(f64, f64)], computed: &[(f64, f64)]) -> f64 {
    assert_eq!(reference.len(), computed.len(), "multiset sizes differ");
    let mut used = vec![false; computed.len()];
    let mut worst = 0.0f64;
    for &(re, im) in reference {
        let (best, d) = computed
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, &(a, b))| (i, ((a - re).powi(2) + (b - im).powi(2)).sqrt()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        used[best] = true;
        worst = worst.max(d);
    }
    worst
}
