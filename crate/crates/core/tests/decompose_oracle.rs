mod common;

use cissa::reference::{dense_artifacts, diagonal_average, oracle_decompose};
use cissa::{
    cissa, cissa_with_path, eigenpair, hankelize, num_frequencies, ExtensionMode, ProjectionPath,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

use common::{gaussian, max_abs, max_diff};

fn projector(k: usize, l: usize) -> DMatrix<f64> {
    let p = eigenpair(k, l).unwrap();
    let w = if p.is_self_conjugate() { 1.0 } else { 2.0 };
    DMatrix::from_fn(l, l, |i, j| w * (p.re[i] * p.re[j] + p.im[i] * p.im[j]))
}

#[test]
fn projectors_partition_identity() {
    for l in [7usize, 12] {
        let f = num_frequencies(l);
        let ps: Vec<_> = (1..=f).map(|k| projector(k, l)).collect();
        let mut sum = DMatrix::zeros(l, l);
        for (j, pj) in ps.iter().enumerate() {
            sum += pj;
            assert!((pj * pj - pj).abs().max() < 1e-13);
            for pk in &ps[j + 1..] {
                assert!((pj * pk).abs().max() < 1e-13);
            }
        }
        assert!((sum - DMatrix::identity(l, l)).abs().max() < 1e-13);
    }
}

#[test]
fn matches_oracle_with_noise_and_trend() {
    let x: Vec<f64> = gaussian(21, 80)
        .iter()
        .enumerate()
        .map(|(t, e)| 0.05 * t as f64 + (t as f64 * 0.9).sin() + 0.2 * e)
        .collect();
    let fast = cissa(&x, 12, ExtensionMode::None).unwrap();
    let slow = oracle_decompose(&x, 12).unwrap();
    assert_eq!(fast.num_frequencies(), slow.num_frequencies());
    for k in 1..=fast.num_frequencies() {
        let d = max_diff(fast.component(k), slow.component(k));
        assert!(d < 1e-10, "k={k} diff={d}");
    }
    let d = max_diff(fast.psd().values(), slow.psd().values());
    assert!(d < 1e-10 * max_abs(slow.psd().values()));
}

#[test]
fn elementary_matrices_have_pair_rank() {
    let x = gaussian(8, 60);
    let l = 10;
    let art = dense_artifacts(&x, l).unwrap();
    for (idx, m) in art.elementary.iter().enumerate() {
        let k = idx + 1;
        let n = m[0].len();
        let dm = DMatrix::from_fn(l, n, |i, j| m[i][j]);
        let sv = dm.singular_values();
        let top = sv.max();
        let rank = sv.iter().filter(|s| **s > 1e-10 * top).count();
        let want = if k == 1 || k == l / 2 + 1 { 1 } else { 2 };
        assert_eq!(rank, want, "k={k}");
    }
}

#[test]
fn direct_and_transform_paths_agree() {
    let x = gaussian(3, 237);
    for mode in [
        ExtensionMode::None,
        ExtensionMode::Mirror,
        ExtensionMode::Ar { order: Some(20) },
    ] {
        for l in [10usize, 48] {
            let a = cissa_with_path(&x, l, mode, ProjectionPath::Transform).unwrap();
            let b = cissa_with_path(&x, l, mode, ProjectionPath::Direct).unwrap();
            for k in 1..=a.num_frequencies() {
                assert!(max_diff(a.component(k), b.component(k)) < 1e-10 * max_abs(&x));
            }
        }
    }
}

#[test]
fn hankelize_is_linear_and_matches_three_branch_form() {
    let (l, n) = (5, 9);
    let a: Vec<Vec<f64>> = (0..l).map(|i| gaussian(i as u64, n)).collect();
    let b: Vec<Vec<f64>> = (0..l).map(|i| gaussian(100 + i as u64, n)).collect();
    let combo: Vec<Vec<f64>> = a
        .iter()
        .zip(&b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(u, v)| 2.5 * u - 0.75 * v).collect())
        .collect();
    let ha = hankelize(&a).unwrap();
    let hb = hankelize(&b).unwrap();
    let hc = hankelize(&combo).unwrap();
    let lin: Vec<f64> = ha
        .iter()
        .zip(&hb)
        .map(|(u, v)| 2.5 * u - 0.75 * v)
        .collect();
    assert!(max_diff(&hc, &lin) < 1e-13);
    assert!(max_diff(&ha, &diagonal_average(&a)) < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn components_add_up(
        seed in 0u64..10_000,
        t in 24usize..300,
        frac in 0.05f64..0.49,
        mode in prop_oneof![
            Just(ExtensionMode::None),
            Just(ExtensionMode::Mirror),
            Just(ExtensionMode::Ar { order: None }),
        ],
    ) {
        let l = ((t as f64 * frac) as usize).clamp(2, (t - 1) / 2);
        let x = gaussian(seed, t);
        let dec = cissa(&x, l, mode).unwrap();
        prop_assert!(max_diff(&dec.reconstruct(), &x) < 1e-8 * max_abs(&x));
    }

    #[test]
    fn oracle_equivalence(seed in 0u64..10_000, t in 20usize..120, frac in 0.05f64..0.49) {
        let l = ((t as f64 * frac) as usize).clamp(2, ((t - 1) / 2).min(32));
        let x = gaussian(seed, t);
        let fast = cissa(&x, l, ExtensionMode::None).unwrap();
        let slow = oracle_decompose(&x, l).unwrap();
        for k in 1..=fast.num_frequencies() {
            prop_assert!(max_diff(fast.component(k), slow.component(k)) < 1e-10);
        }
    }
}
