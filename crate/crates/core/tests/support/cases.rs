//! Proptest strategies for small random problem instances.

#![allow(dead_code)]

use fuzzrank_core::dataset::Dataset;
use fuzzrank_core::fuzzy_ensemble::{EnsembleConfig, Scheme};
use fuzzrank_core::selectors::Method;
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Values come from a small set so ties and constant columns are common.
fn cell() -> impl Strategy<Value = f64> {
    prop_oneof![
        3 => (0u8..6).prop_map(f64::from),
        1 => -10.0..10.0f64,
    ]
}

/// A dataset with `s` samples and `n` features; the first two rows carry
/// both classes.
pub fn dataset(
    s: std::ops::RangeInclusive<usize>,
    n: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Dataset> {
    (s, n)
        .prop_flat_map(|(s, n)| {
            (
                prop::collection::vec(cell(), s * n),
                prop::collection::vec(0u8..2, s - 2),
                Just(n),
            )
        })
        .prop_map(|(values, tail, n)| {
            let mut labels = vec![0, 1];
            labels.extend(tail);
            let names = (0..n).map(|i| format!("f{i}")).collect();
            Dataset::new("case", values, labels, names).unwrap()
        })
}

/// Instances within the acceptance bounds: S <= 20, N <= 3, L <= 5, M <= 2.
pub fn instance() -> impl Strategy<Value = (Dataset, EnsembleConfig)> {
    (
        dataset(4..=20, 1..=3),
        subsequence(Method::ALL.to_vec(), 1..=2),
        1usize..=5,
        prop_oneof![Just(0.632), Just(0.5), Just(1.0)],
        any::<u64>(),
    )
        .prop_map(|(data, methods, subsets, ratio, seed)| {
            let mut cfg = EnsembleConfig::new(Scheme::Equal);
            cfg.methods = methods;
            cfg.subsets = subsets;
            cfg.ratio = ratio;
            cfg.seed = seed;
            (data, cfg)
        })
}
