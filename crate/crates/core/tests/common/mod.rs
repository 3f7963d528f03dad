#![allow(dead_code)]

use nsgf_core::{
    build_bapu, Bapu, Complex64, Covering, FrequencyGrid, NsgfSystem, PlateauBump, Prototype,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const C_STAR: f64 = 0.25;
pub const RAMP: f64 = 0.2;

pub const FLAT_PAIR: &[(f64, f64)] = &[(0.0, 2.0), (0.5, 2.0)];
pub const FLAT_DYADIC: &[(f64, f64)] = &[
    (0.0, 2.0),
    (0.5, 4.0),
    (0.75, 8.0),
    (0.875, 16.0),
    (0.9375, 16.0),
];
pub const DYADIC: &[(f64, f64)] = &[
    (0.875, 4.0),
    (0.0625, 8.0),
    (0.125, 4.0),
    (0.25, 2.0),
    (0.625, 4.0),
    (0.8125, 8.0),
];
pub const IRREGULAR: &[(f64, f64)] = &[
    (0.01, 8.0),
    (0.1, 4.0),
    (0.3, 16.0),
    (0.33, 8.0),
    (0.43, 4.0),
    (0.65, 8.0),
    (0.76, 16.0),
    (0.8, 4.0),
];
pub const TOY: &[(f64, f64)] = &[(0.0, 2.0), (0.5, 2.0), (0.375, 4.0), (0.875, 4.0)];

pub fn flat(len: usize, spec: &[(f64, f64)]) -> NsgfSystem {
    nsgf_core::make_windows(len, spec, C_STAR, &Prototype::Flat).unwrap()
}

pub fn smooth(len: usize, spec: &[(f64, f64)]) -> NsgfSystem {
    nsgf_core::make_windows(len, spec, C_STAR, &Prototype::plateau(RAMP).unwrap()).unwrap()
}

/// The three reconstruction test configs at length `len`.
pub fn test_systems(len: usize) -> Vec<(&'static str, NsgfSystem)> {
    vec![
        ("flat two-channel", flat(len, FLAT_PAIR)),
        ("dyadic 6-channel", smooth(len, DYADIC)),
        ("irregular 8-channel", smooth(len, IRREGULAR)),
    ]
}

pub fn torus_bapu(sys: &NsgfSystem) -> (Covering, Bapu) {
    let cov = sys.covering().unwrap();
    let bapu = build_bapu(
        &cov,
        &PlateauBump::fitted(&cov).unwrap(),
        FrequencyGrid::Torus { len: sys.len() },
    )
    .unwrap();
    (cov, bapu)
}

pub fn random_signal(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l2(&diff) / l2(b)
}
