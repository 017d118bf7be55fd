#[path = "support/cases.rs"]
mod cases;
#[path = "support/oracle.rs"]
mod oracle;

use std::cell::RefCell;
use std::collections::BTreeSet;

use fuzzrank_core::classifiers::ClassifierConfig;
use fuzzrank_core::dataset::{kfold_split, subsample, Dataset};
use fuzzrank_core::evaluation::{
    accuracy_curve, compute_apc, compute_asd, stability_report, subsample_stability, FnRanker,
};
use fuzzrank_core::fuzzy_ensemble::{EnsembleConfig, EnsembleRanker, Scheme};
use fuzzrank_core::selectors::Method;
use fuzzrank_core::stats::{pearson, SdConvention};
use fuzzrank_core::Error;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..=6, 1usize..=6)
        .prop_flat_map(|(k, n)| prop::collection::vec(prop::collection::vec(-5.0..5.0f64, n), k))
}

#[test]
fn metric_hand_values() {
    assert!((compute_asd(&[vec![0.2], vec![0.4]], SdConvention::Population).unwrap() - 0.1).abs() < 1e-16);
    assert_eq!(
        compute_apc(&[vec![0.0, 1.0, 2.0], vec![2.0, 1.0, 0.0]]).unwrap(),
        -1.0
    );
    assert_eq!(compute_apc(&vec![vec![0.3, 0.1, 0.9]; 4]).unwrap(), 1.0);
    assert_eq!(
        compute_asd(&vec![vec![0.3, 0.1, 0.9]; 4], SdConvention::Population).unwrap(),
        0.0
    );
    assert_eq!(
        compute_asd(&[vec![1.0]], SdConvention::Population),
        Err(Error::TooFewFolds(1))
    );
    assert_eq!(compute_apc(&[vec![1.0, 2.0]]), Err(Error::TooFewFolds(1)));

    // three folds: (1,2,3), (1,3,2), (3,2,1) give correlations 0.5, -1, -0.5
    let m = vec![vec![1.0, 2.0, 3.0], vec![1.0, 3.0, 2.0], vec![3.0, 2.0, 1.0]];
    assert!((compute_apc(&m).unwrap() - (0.5 - 1.0 - 0.5) / 3.0).abs() < 1e-15);
    assert!((compute_apc(&m).unwrap() - oracle::apc(&m)).abs() < 1e-15);

    let x = [0.1, 0.7, 0.3, 0.9];
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    assert_eq!(pearson(&x, &x), Some(1.0));
    assert_eq!(pearson(&x, &neg), Some(-1.0));
    assert_eq!(pearson(&x, &[0.5; 4]), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn metrics_match_double_loop(m in matrix()) {
        let asd = compute_asd(&m, SdConvention::Population).unwrap();
        let apc = compute_apc(&m).unwrap();
        prop_assert!((asd - oracle::asd(&m)).abs() <= 1e-12);
        prop_assert!((apc - oracle::apc(&m)).abs() <= 1e-12);
        prop_assert!((-1.0..=1.0).contains(&apc));
        let report = stability_report("x", m.clone(), SdConvention::Population).unwrap();
        let mean_sd = report.per_feature_sd.iter().sum::<f64>() / report.per_feature_sd.len() as f64;
        prop_assert!((report.asd - mean_sd).abs() <= 1e-12);
    }

    #[test]
    fn asd_scales_with_the_slope(m in matrix(), a in -4.0..4.0f64, b in -10.0..10.0f64) {
        let moved: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|v| a * v + b).collect()).collect();
        let lhs = compute_asd(&moved, SdConvention::Population).unwrap();
        let rhs = a.abs() * compute_asd(&m, SdConvention::Population).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn apc_ignores_positive_affine_maps_per_fold(
        m in matrix(),
        maps in prop::collection::vec((0.1..10.0f64, -5.0..5.0f64), 6),
    ) {
        let moved: Vec<Vec<f64>> = m
            .iter()
            .zip(&maps)
            .map(|(r, &(a, b))| r.iter().map(|v| a * v + b).collect())
            .collect();
        let lhs = compute_apc(&moved).unwrap();
        let rhs = compute_apc(&m).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn folds_partition_the_samples(data in cases::dataset(2..=40, 1..=1), k in 2usize..=8, seed in any::<u64>()) {
        prop_assume!(k <= data.n_samples());
        let split = kfold_split(&data, k, seed).unwrap();
        let mut all: Vec<usize> = split.folds().iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..data.n_samples()).collect::<Vec<_>>());
        let sizes: Vec<usize> = split.folds().iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(&split, &kfold_split(&data, k, seed).unwrap());
        let counts = data.class_counts();
        if counts.iter().all(|&c| c >= k) {
            for fold in split.folds() {
                let ones = fold.iter().filter(|&&i| data.labels()[i] == 1).count() as f64;
                let expected = fold.len() as f64 * counts[1] as f64 / data.n_samples() as f64;
                prop_assert!((ones - expected).abs() <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn full_subsample_is_the_identity(data in cases::dataset(2..=20, 1..=3), seed in any::<u64>()) {
        prop_assert_eq!(subsample(&data, 1.0, seed).unwrap(), data);
    }
}

/// Feature 0 is the label, the others are noise; the last column holds a
/// unique sample id.
fn labelled_with_id(s: usize) -> Dataset {
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for r in 0..s {
        let label = u8::from(r % 3 == 0);
        labels.push(label);
        values.extend([
            f64::from(label),
            ((r * 7) % 5) as f64,
            ((r * 11) % 13) as f64,
            r as f64,
        ]);
    }
    let names = ["copy", "noise_a", "noise_b", "id"].map(String::from).to_vec();
    Dataset::new("ids", values, labels, names).unwrap()
}

#[test]
fn accuracy_curve_shape_and_hygiene() {
    let data = labelled_with_id(60);
    let folds = kfold_split(&data, 5, 3).unwrap();
    let seen = RefCell::new(Vec::new());
    // ranks by the label copy and records which sample ids it was shown
    let ranker = FnRanker::new("spy", |d: &Dataset| {
        seen.borrow_mut()
            .push(d.column(3).iter().map(|&v| v as usize).collect::<BTreeSet<_>>());
        Ok(vec![1.0, 0.5, 0.25, 0.0])
    });
    let curves = accuracy_curve(&data, &ranker, &ClassifierConfig::naive_bayes(), &folds).unwrap();
    let curve = &curves[0];
    let kept: Vec<usize> = curve.points.iter().map(|p| p.n_features_kept).collect();
    assert_eq!(kept, vec![4, 3, 2, 1]);
    for p in &curve.points {
        assert_eq!(p.per_fold.len(), 5);
        let mean = p.per_fold.iter().sum::<f64>() / 5.0;
        assert!((p.mean_accuracy - mean).abs() <= 1e-12);
    }
    assert_eq!(curve.points[3].mean_accuracy, 1.0);

    let seen = seen.into_inner();
    assert_eq!(seen.len(), 5);
    for (k, ids) in seen.iter().enumerate() {
        let test: BTreeSet<usize> = folds.test_indices(k).iter().copied().collect();
        assert!(ids.is_disjoint(&test), "fold {k} leaked test rows into ranking");
        assert_eq!(ids.len() + test.len(), data.n_samples());
    }
}

#[test]
fn full_feature_point_does_not_depend_on_the_ranking() {
    let data = labelled_with_id(45);
    let folds = kfold_split(&data, 3, 9).unwrap();
    let mut cfg = EnsembleConfig::new(Scheme::Equal);
    cfg.subsets = 5;
    let ranker = EnsembleRanker::new(cfg, Method::ALL.to_vec(), Scheme::ALL.to_vec());
    for classifier in [
        ClassifierConfig::naive_bayes(),
        ClassifierConfig::random_forest(4),
    ] {
        let curves = accuracy_curve(&data, &ranker, &classifier, &folds).unwrap();
        assert_eq!(curves.len(), 8);
        let first = &curves[0].points[0];
        for c in &curves {
            assert_eq!(c.points[0].per_fold, first.per_fold, "{}", c.variant);
        }
    }
}

#[test]
fn subsample_curve_edge_cases() {
    let data = labelled_with_id(40);
    let good = FnRanker::new("good", |d: &Dataset| {
        Ok((0..d.n_features())
            .map(|f| d.column(f).iter().sum::<f64>() / d.n_samples() as f64)
            .collect())
    });
    let curves = subsample_stability(&data, &good, &[1.0, 0.5], 1, 5).unwrap();
    assert_eq!(curves[0].full_data_pearson, 1.0);
    assert_eq!(curves[0].points[0].mean_pearson, 1.0);
    assert_eq!(curves[0].points[1].per_repeat.len(), 1);
    assert_eq!(
        curves[0].points[1].mean_pearson,
        curves[0].points[1].per_repeat[0]
    );

    let flat = FnRanker::new("flat", |_: &Dataset| Ok(vec![0.5; 4]));
    let curves = subsample_stability(&data, &flat, &[0.9, 0.5], 5, 5).unwrap();
    assert!(curves[0]
        .points
        .iter()
        .all(|p| p.mean_pearson == 0.0 && p.per_repeat.len() == 5));
    assert!(subsample_stability(&data, &flat, &[0.5], 0, 5).is_err());
}

#[test]
fn subsample_sizes() {
    let labels: Vec<u8> = (0..768).map(|i| u8::from(i < 268)).collect();
    let values: Vec<f64> = (0..768).map(f64::from).collect();
    let data = Dataset::new("p", values, labels, vec!["x".into()]).unwrap();
    assert_eq!(subsample(&data, 0.3, 1).unwrap().n_samples(), 230);
    let sizes: Vec<usize> = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3]
        .iter()
        .map(|&p| subsample(&data, p, 2).unwrap().n_samples())
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] > w[1]), "{sizes:?}");
    let split = kfold_split(&data, 5, 0).unwrap();
    let mut fold_sizes: Vec<usize> = split.folds().iter().map(Vec::len).collect();
    fold_sizes.sort_unstable();
    assert_eq!(fold_sizes, vec![153, 153, 154, 154, 154]);
}
