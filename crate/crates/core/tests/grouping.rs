mod common;

use cissa::{
    cissa, economic_bands, group, reconstruct_manual, select_by_cumulative_share,
    select_by_percentile, shares, ExtensionMode, GroupingSpec, PsdVector,
};
use proptest::prelude::*;

use common::{gaussian, max_diff};

/// Psd of window `l` whose `F` frequency-level values are distinct and paired.
fn distinct_psd(l: usize, values: &[f64]) -> PsdVector {
    let f = l / 2 + 1;
    let lambda: Vec<f64> = (1..=l)
        .map(|k| {
            if k <= f {
                values[k - 1]
            } else {
                values[l + 1 - k]
            }
        })
        .collect();
    PsdVector::from_values(lambda).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn percentile_count_law(
        l in 4usize..400,
        q in prop_oneof![Just(0.5), Just(0.9), Just(0.95), 0.01f64..0.99],
        seed in 0u64..1000,
    ) {
        let f = l / 2 + 1;
        // a random permutation of 1..=F keeps values distinct
        let noise = gaussian(seed, f);
        let mut order: Vec<usize> = (0..f).collect();
        order.sort_by(|a, b| noise[*a].total_cmp(&noise[*b]));
        let values: Vec<f64> = order.iter().map(|&i| (i + 1) as f64).collect();
        let psd = distinct_psd(l, &values);
        let expected = f - (q * f as f64 - 1e-9).ceil() as usize;
        match select_by_percentile(&psd, q) {
            Ok(ks) => {
                prop_assert_eq!(ks.len(), expected);
                prop_assert!(ks.windows(2).all(|w| w[0] < w[1]));
            }
            Err(_) => prop_assert_eq!(expected, 0),
        }
    }

    #[test]
    fn cumulative_share_is_monotone(seed in 0u64..1000, a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let x = gaussian(seed, 120);
        let dec = cissa(&x, 24, ExtensionMode::None).unwrap();
        let sh = shares(dec.psd()).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = select_by_cumulative_share(&sh, lo);
        let big = select_by_cumulative_share(&sh, hi);
        prop_assert!(small.len() <= big.len());
        prop_assert_eq!(&big[..small.len()], &small[..]);
        prop_assert!(sh.sum_over(&big) >= hi - 1e-12);
        // shortest prefix: dropping the last member falls short
        prop_assert!(sh.sum_over(&big[..big.len() - 1]) < hi);
    }

    #[test]
    fn economic_bands_cover_disjoint_ranges(s in 1usize..16, mult in 2usize..30) {
        let l = s * mult;
        let b = economic_bands(l, s).unwrap();
        let f = l / 2 + 1;
        prop_assert_eq!(b.trend[0], 1);
        prop_assert!(b.trend.iter().chain(&b.cycle).all(|k| *k <= f));
        prop_assert!(b.trend.iter().all(|k| !b.cycle.contains(k)));
        prop_assert!(b.seasonal.iter().all(|k| *k <= f && (k - 1) * s % l == 0));
        prop_assert_eq!(b.seasonal.len(), s / 2);
    }
}

#[test]
fn economic_band_examples() {
    let b = economic_bands(24, 12).unwrap();
    assert_eq!(b.trend, vec![1]);
    assert_eq!(b.cycle, vec![2]);
    assert_eq!(b.seasonal, vec![3, 5, 7, 9, 11, 13]);
    assert!(economic_bands(100, 12).is_err());
    assert!(economic_bands(12, 12).is_err());
    assert!(economic_bands(24, 0).is_err());
}

#[test]
fn grouped_series_sum_components() {
    let x = gaussian(4, 150);
    let dec = cissa(&x, 30, ExtensionMode::Mirror).unwrap();
    let r = reconstruct_manual(&dec, &[vec![1, 4], vec![16]]).unwrap();
    let want: Vec<f64> = (0..150)
        .map(|t| dec.component(1)[t] + dec.component(4)[t])
        .collect();
    assert!(max_diff(&r.series[0], &want) < 1e-14);
    assert_eq!(r.series[1], dec.component(16));
    let sh = shares(dec.psd()).unwrap();
    assert!((r.shares[0] - sh.get(1) - sh.get(4)).abs() < 1e-15);
    assert_eq!(r.names, vec!["group1", "group2"]);
}

#[test]
fn manual_validation() {
    let x = gaussian(4, 100);
    let dec = cissa(&x, 10, ExtensionMode::None).unwrap();
    for bad in [
        vec![],
        vec![vec![]],
        vec![vec![0]],
        vec![vec![7]],
        vec![vec![2], vec![2]],
    ] {
        assert!(matches!(
            group(&dec, &GroupingSpec::Manual(bad)),
            Err(cissa::CissaError::Parameter(_))
        ));
    }
}

#[test]
fn spec_parsing() {
    assert_eq!(
        GroupingSpec::parse("economic:4").unwrap(),
        GroupingSpec::Economic { per_year: 4 }
    );
    assert_eq!(
        GroupingSpec::parse("12").unwrap(),
        GroupingSpec::Economic { per_year: 12 }
    );
    assert_eq!(
        GroupingSpec::parse("0.9").unwrap(),
        GroupingSpec::CumulativeShare(0.9)
    );
    assert_eq!(
        GroupingSpec::parse("-0.95").unwrap(),
        GroupingSpec::PsdPercentile(0.95)
    );
    assert_eq!(
        GroupingSpec::parse("manual:21;3-11").unwrap(),
        GroupingSpec::Manual(vec![vec![21], (3..=11).collect()])
    );
    assert!(GroupingSpec::parse("share:1.2").is_err());
    assert!(GroupingSpec::parse("bogus").is_err());
}
