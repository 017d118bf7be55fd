#![allow(clippy::needless_range_loop)]

#[path = "support/cases.rs"]
mod cases;
#[path = "support/oracle.rs"]
mod oracle;

use fuzzrank_core::dataset::Dataset;
use fuzzrank_core::selectors::{self, Method, SelectorParams, TIE_TOLERANCE};
use proptest::prelude::*;

fn table(cols: &[&[f64]], labels: &[u8]) -> Dataset {
    let s = labels.len();
    let mut values = Vec::with_capacity(s * cols.len());
    for r in 0..s {
        values.extend(cols.iter().map(|c| c[r]));
    }
    let names = (0..cols.len()).map(|i| format!("f{i}")).collect();
    Dataset::new("t", values, labels.to_vec(), names).unwrap()
}

/// ReliefF written out with full sorts over every other sample.
fn relieff_brute(data: &Dataset, k: usize) -> Vec<f64> {
    let s = data.n_samples();
    let n = data.n_features();
    let mut scaled = vec![vec![0.0; n]; s];
    for f in 0..n {
        let col = data.column(f);
        let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for r in 0..s {
            scaled[r][f] = if hi > lo { (col[r] - lo) / (hi - lo) } else { 0.0 };
        }
    }
    let labels = data.labels();
    let mut w = vec![0.0; n];
    for a in 0..s {
        let mut others: Vec<usize> = (0..s).filter(|&o| o != a).collect();
        let dist = |o: usize| -> f64 { (0..n).map(|f| (scaled[a][f] - scaled[o][f]).abs()).sum() };
        others.sort_by(|&x, &y| dist(x).partial_cmp(&dist(y)).unwrap());
        // (row, share): neighbours tied at the k-th distance split the rest
        let pick = |same: bool| -> (Vec<(usize, f64)>, usize) {
            let pool: Vec<usize> = others
                .iter()
                .copied()
                .filter(|&o| (labels[o] == labels[a]) == same)
                .collect();
            if pool.len() <= k {
                return (pool.iter().map(|&o| (o, 1.0)).collect(), pool.len());
            }
            let edge = dist(pool[k - 1]);
            let closer: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|&o| dist(o) < edge - TIE_TOLERANCE)
                .collect();
            let tied: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|&o| (dist(o) - edge).abs() <= TIE_TOLERANCE)
                .collect();
            let share = (k - closer.len()) as f64 / tied.len() as f64;
            let mut out: Vec<(usize, f64)> = closer.iter().map(|&o| (o, 1.0)).collect();
            out.extend(tied.iter().map(|&o| (o, share)));
            (out, k)
        };
        let (hits, n_hits) = pick(true);
        let (misses, n_misses) = pick(false);
        for f in 0..n {
            if n_hits > 0 {
                let d: f64 = hits
                    .iter()
                    .map(|&(h, w)| w * (scaled[a][f] - scaled[h][f]).abs())
                    .sum();
                w[f] -= d / (n_hits * s) as f64;
            }
            if n_misses > 0 {
                let d: f64 = misses
                    .iter()
                    .map(|&(m, w)| w * (scaled[a][f] - scaled[m][f]).abs())
                    .sum();
                w[f] += d / (n_misses * s) as f64;
            }
        }
    }
    w
}

fn eight_samples() -> Dataset {
    let labels = [0, 0, 0, 0, 1, 1, 1, 1];
    let a: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
    let b = [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0];
    table(&[&a, &b], &labels)
}

#[test]
fn relieff_eight_sample_table() {
    let data = eight_samples();
    let got = selectors::score_relieff(&data, 3).unwrap().scores;
    let want = relieff_brute(&data, 3);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-12, "{got:?} vs {want:?}");
    }
    // hits of the label copy differ by 0 and misses by 1
    assert_eq!(got[0], 1.0);
    assert!(got[0] > got[1]);
}

#[test]
fn relieff_ranking_survives_duplication() {
    let base = eight_samples();
    let mut values = base.values().to_vec();
    values.extend_from_slice(base.values());
    let mut labels = base.labels().to_vec();
    labels.extend_from_slice(base.labels());
    let doubled = Dataset::new("d", values, labels, base.feature_names().to_vec()).unwrap();
    for k in [1, 3, 10] {
        let a = selectors::score_relieff(&base, k).unwrap().scores;
        let b = selectors::score_relieff(&doubled, k).unwrap().scores;
        assert_eq!(oracle::rank_desc(&a), oracle::rank_desc(&b), "k = {k}");
    }
}

#[test]
fn spec_examples() {
    let p = SelectorParams::default();
    let copy = table(&[&[0.0, 1.0, 0.0, 1.0]], &[0, 1, 0, 1]);
    assert_eq!(
        selectors::score(&copy, Method::MutualInformation, &p)
            .unwrap()
            .scores,
        [1.0]
    );
    assert_eq!(selectors::score(&copy, Method::CfsSu, &p).unwrap().scores, [1.0]);
    let indep = table(&[&[0.0, 0.0, 1.0, 1.0]], &[0, 1, 0, 1]);
    assert_eq!(
        selectors::score(&indep, Method::MutualInformation, &p)
            .unwrap()
            .scores,
        [0.0]
    );
    let fisher = table(&[&[0.0, 1.0, 2.0, 3.0]], &[0, 0, 1, 1]);
    let f = selectors::score_fisher(&fisher).unwrap().scores[0];
    assert!((f - 4.0).abs() < 1e-9);
}

fn permute_rows(data: &Dataset, order: &[usize]) -> Dataset {
    data.select_rows(order).unwrap()
}

fn close_to(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn close(a: &[f64], b: &[f64]) -> bool {
    close_to(a, b, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relieff_matches_brute_force(data in cases::dataset(4..=16, 1..=4), k in 1usize..=5) {
        let got = selectors::score_relieff(&data, k).unwrap().scores;
        prop_assert!(close(&got, &relieff_brute(&data, k)), "{:?}", got);
    }

    #[test]
    fn row_order_does_not_matter(data in cases::dataset(4..=16, 1..=4), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..data.n_samples()).collect();
        let mut state = seed | 1;
        for i in (1..order.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            order.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let shuffled = permute_rows(&data, &order);
        let p = SelectorParams { relieff_k: 3, bins: 4 };
        for m in Method::ALL {
            let a = selectors::score(&data, m, &p).unwrap().scores;
            let b = selectors::score(&shuffled, m, &p).unwrap().scores;
            prop_assert!(close(&a, &b), "{}: {:?} vs {:?}", m, a, b);
        }
    }

    #[test]
    fn column_permutation_permutes_scores(data in cases::dataset(4..=16, 2..=4)) {
        let order: Vec<usize> = (0..data.n_features()).rev().collect();
        let swapped = data.select_features(&order).unwrap();
        let p = SelectorParams { relieff_k: 3, bins: 5 };
        for m in Method::ALL {
            let a = selectors::score(&data, m, &p).unwrap().scores;
            let b = selectors::score(&swapped, m, &p).unwrap().scores;
            let moved: Vec<f64> = order.iter().map(|&col| a[col]).collect();
            prop_assert!(close(&b, &moved), "{}: {:?} vs {:?}", m, b, moved);
        }
    }

    #[test]
    fn positive_affine_maps_leave_scores_alone(
        data in cases::dataset(4..=16, 1..=3),
        scale in prop_oneof![Just(0.5), Just(2.0), Just(8.0)],
        shift in -4i32..=4,
    ) {
        let values: Vec<f64> = data.values().iter().map(|v| v * scale + f64::from(shift)).collect();
        let moved = Dataset::new("m", values, data.labels().to_vec(), data.feature_names().to_vec()).unwrap();
        let p = SelectorParams { relieff_k: 3, bins: 10 };
        // with no spread inside either class the Fisher guard sets the scale
        let spread: Vec<bool> = (0..data.n_features())
            .map(|f| {
                (0..2u8).any(|c| {
                    let xs: Vec<f64> = (0..data.n_samples())
                        .filter(|&r| data.labels()[r] == c)
                        .map(|r| data.value(r, f))
                        .collect();
                    xs.iter().any(|&x| x != xs[0])
                })
            })
            .collect();
        let keep = |m: Method, v: Vec<f64>| -> Vec<f64> {
            v.into_iter().zip(&spread).filter(|&(_, &s)| s || m != Method::Fisher).map(|(x, _)| x).collect()
        };
        for m in Method::ALL {
            let a = keep(m, selectors::score(&data, m, &p).unwrap().scores);
            let b = keep(m, selectors::score(&moved, m, &p).unwrap().scores);
            prop_assert!(close_to(&a, &b, 1e-9), "{}: {:?} vs {:?}", m, a, b);
        }
    }

    #[test]
    fn constant_feature_scores_zero(data in cases::dataset(4..=16, 1..=3), c in -3.0..3.0f64) {
        let n = data.n_features();
        let mut values = Vec::new();
        for r in 0..data.n_samples() {
            values.extend_from_slice(data.row(r));
            values.push(c);
        }
        let mut names = data.feature_names().to_vec();
        names.push("const".into());
        let with_const = Dataset::new("c", values, data.labels().to_vec(), names).unwrap();
        for m in Method::ALL {
            let s = selectors::score(&with_const, m, &SelectorParams::default()).unwrap().scores;
            prop_assert_eq!(s[n], 0.0, "{}", m);
            prop_assert!(s.iter().all(|v| v.is_finite()));
        }
    }
}
