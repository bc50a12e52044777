#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (u, v)| m.max((u - v).abs()))
}

/// AR(1) with unit innovations, 500 burn-in samples dropped.
pub fn ar1(seed: u64, phi: f64, n: usize) -> Vec<f64> {
    let e = gaussian(seed, n + 500);
    let mut y = 0.0;
    let mut out = Vec::with_capacity(n);
    for (i, v) in e.into_iter().enumerate() {
        y = phi * y + v;
        if i >= 500 {
            out.push(y);
        }
    }
    out
}
