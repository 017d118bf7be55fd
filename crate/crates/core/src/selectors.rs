//! Filter scorers. Each produces one relevance score per feature, higher
//! meaning more relevant, and uses no randomness.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use log::warn;

use crate::dataset::Dataset;
use crate::{Error, Result};

/// Guards the Fisher ratio against zero within-class scatter.
pub const FISHER_EPSILON: f64 = 1e-12;

/// ReliefF neighbour distances closer than this count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Symmetrical uncertainty with the class, the relevance term of CFS.
    CfsSu,
    ReliefF,
    /// Mutual information with the class.
    MutualInformation,
    Fisher,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::CfsSu,
        Method::ReliefF,
        Method::MutualInformation,
        Method::Fisher,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::CfsSu => "cfs",
            Method::ReliefF => "relieff",
            Method::MutualInformation => "mi",
            Method::Fisher => "fisher",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownId {
                kind: "method",
                value: String::from(s),
            })
    }
}

/// Scorer hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectorParams {
    /// Neighbours per class for ReliefF.
    pub relieff_k: usize,
    /// Equal-width bins for the information-theoretic scorers.
    pub bins: usize,
}

impl Default for SelectorParams {
    fn default() -> Self {
        Self {
            relieff_k: 10,
            bins: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub method: Method,
    pub scores: Vec<f64>,
}

pub fn score(dataset: &Dataset, method: Method, params: &SelectorParams) -> Result<ScoreVector> {
    match method {
        Method::CfsSu => score_correlation_su(dataset, params.bins),
        Method::ReliefF => score_relieff(dataset, params.relieff_k),
        Method::MutualInformation => score_mutual_information(dataset, params.bins),
        Method::Fisher => score_fisher(dataset),
    }
}

/// ReliefF weights for a two-class problem.
///
/// Features are min-max scaled to `[0, 1]` and distances are Manhattan on the
/// scaled values. Every sample is used as an anchor. For each anchor the `k`
/// nearest hits (same class, excluding the anchor itself) lower a feature's
/// weight by their average difference and the `k` nearest misses raise it,
/// scaled by `P(C) / (1 - P(class(anchor)))`, which is 1 with two classes.
/// Neighbour ties are broken by sample index. A class with at most `k`
/// members uses `class_size - 1` hits.
pub fn score_relieff(dataset: &Dataset, k: usize) -> Result<ScoreVector> {
    if k == 0 {
        return Err(Error::InvalidParameter("relieff k must be at least 1"));
    }
    let s = dataset.n_samples();
    let n = dataset.n_features();
    let scaled = min_max_scaled(dataset);
    let labels = dataset.labels();
    let counts = dataset.class_counts();
    let priors = [counts[0] as f64 / s as f64, counts[1] as f64 / s as f64];
    let hits_k = [k.min(counts[0] - 1), k.min(counts[1] - 1)];
    let miss_k = [k.min(counts[1]), k.min(counts[0])];
    for class in 0..2 {
        if hits_k[class] < k {
            warn!(
                "class {class} has {} samples; relieff uses {} hits instead of {k}",
                counts[class], hits_k[class]
            );
        }
    }

    let row = |i: usize| &scaled[i * n..(i + 1) * n];
    let mut weights = vec![0.0; n];
    let mut hit_sum = vec![0.0; n];
    let mut miss_sum = vec![0.0; n];
    // (distance, row) while searching, (share, row) once trimmed
    let mut hits: Vec<(f64, usize)> = Vec::with_capacity(s);
    let mut misses: Vec<(f64, usize)> = Vec::with_capacity(s);
    for anchor in 0..s {
        let class = labels[anchor] as usize;
        let a = row(anchor);
        hits.clear();
        misses.clear();
        for (other, &label) in labels.iter().enumerate() {
            if other == anchor {
                continue;
            }
            let d: f64 = a.iter().zip(row(other)).map(|(x, y)| (x - y).abs()).sum();
            if label as usize == class {
                hits.push((d, other));
            } else {
                misses.push((d, other));
            }
        }
        let hit_count = nearest(&mut hits, hits_k[class]);
        let miss_count = nearest(&mut misses, miss_k[class]);
        accumulate_diffs(&mut hit_sum, a, &hits, &row);
        accumulate_diffs(&mut miss_sum, a, &misses, &row);
        let miss_factor = priors[1 - class] / (1.0 - priors[class]);
        for f in 0..n {
            if hit_count > 0 {
                weights[f] -= hit_sum[f] / (s * hit_count) as f64;
            }
            if miss_count > 0 {
                weights[f] += miss_factor * miss_sum[f] / (s * miss_count) as f64;
            }
        }
    }
    Ok(ScoreVector {
        method: Method::ReliefF,
        scores: weights,
    })
}

/// Keeps the `take` nearest entries of `list` and replaces each distance by
/// the entry's share. Entries tied with the `take`-th distance split the
/// remaining places evenly, so the result does not depend on row or column
/// order.
/// Returns the number of places filled.
fn nearest(list: &mut Vec<(f64, usize)>, take: usize) -> usize {
    list.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    if take >= list.len() {
        list.iter_mut().for_each(|e| e.0 = 1.0);
        return list.len();
    }
    if take == 0 {
        list.clear();
        return 0;
    }
    let edge = list[take - 1].0;
    let closer = list.iter().take_while(|e| e.0 < edge - TIE_TOLERANCE).count();
    let tied = list[closer..]
        .iter()
        .take_while(|e| e.0 <= edge + TIE_TOLERANCE)
        .count();
    let share = (take - closer) as f64 / tied as f64;
    list.truncate(closer + tied);
    for (i, e) in list.iter_mut().enumerate() {
        e.0 = if i < closer { 1.0 } else { share };
    }
    take
}

fn accumulate_diffs<'a>(
    acc: &mut [f64],
    anchor: &[f64],
    picked: &[(f64, usize)],
    row: &impl Fn(usize) -> &'a [f64],
) {
    acc.iter_mut().for_each(|v| *v = 0.0);
    for &(share, other) in picked {
        for (a, (x, y)) in acc.iter_mut().zip(anchor.iter().zip(row(other))) {
            *a += share * (x - y).abs();
        }
    }
}

fn min_max_scaled(dataset: &Dataset) -> Vec<f64> {
    let n = dataset.n_features();
    let mut out = dataset.values().to_vec();
    for f in 0..n {
        let (lo, hi) = column_range(dataset, f);
        let range = hi - lo;
        for r in 0..dataset.n_samples() {
            let v = &mut out[r * n + f];
            *v = if range > 0.0 { (*v - lo) / range } else { 0.0 };
        }
    }
    out
}

fn column_range(dataset: &Dataset, column: usize) -> (f64, f64) {
    (0..dataset.n_samples())
        .map(|r| dataset.value(r, column))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Equal-width bin index of every sample for one feature. A constant feature
/// puts everything in bin 0.
pub fn equal_width_bins(dataset: &Dataset, column: usize, n_bins: usize) -> Vec<usize> {
    let (lo, hi) = column_range(dataset, column);
    let range = hi - lo;
    (0..dataset.n_samples())
        .map(|r| {
            if range > 0.0 {
                let b = libm::floor((dataset.value(r, column) - lo) / range * n_bins as f64);
                (b as usize).min(n_bins - 1)
            } else {
                0
            }
        })
        .collect()
}

/// Joint histogram of (bin, class) plus marginals.
struct Contingency {
    joint: Vec<[usize; 2]>,
    bins: Vec<usize>,
    classes: [usize; 2],
    total: usize,
}

impl Contingency {
    fn new(bins: &[usize], labels: &[u8], n_bins: usize) -> Self {
        let mut joint = vec![[0usize; 2]; n_bins];
        for (&b, &l) in bins.iter().zip(labels) {
            joint[b][l as usize] += 1;
        }
        let marginal = joint.iter().map(|c| c[0] + c[1]).collect();
        let mut classes = [0; 2];
        for c in &joint {
            classes[0] += c[0];
            classes[1] += c[1];
        }
        Self {
            joint,
            bins: marginal,
            classes,
            total: bins.len(),
        }
    }

    fn entropy(counts: impl Iterator<Item = usize>, total: usize) -> f64 {
        let t = total as f64;
        counts
            .filter(|&c| c > 0)
            .map(|c| (c as f64 / t) * libm::log2(t / c as f64))
            .sum()
    }

    fn bin_entropy(&self) -> f64 {
        Self::entropy(self.bins.iter().copied(), self.total)
    }

    fn class_entropy(&self) -> f64 {
        Self::entropy(self.classes.iter().copied(), self.total)
    }

    /// `I(X; Y)` in bits. Integer products keep independent cells at exactly
    /// `log2(1) = 0`.
    fn mutual_information(&self) -> f64 {
        let t = self.total as f64;
        let mut mi = 0.0;
        for (b, cell) in self.joint.iter().enumerate() {
            for (y, &c) in cell.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let num = (c as u128 * self.total as u128) as f64;
                let den = (self.bins[b] as u128 * self.classes[y] as u128) as f64;
                mi += (c as f64 / t) * libm::log2(num / den);
            }
        }
        mi.max(0.0)
    }
}

fn check_bins(n_bins: usize) -> Result<()> {
    if n_bins < 2 {
        return Err(Error::InvalidParameter("bins must be at least 2"));
    }
    Ok(())
}

/// Mutual information in bits between each equal-width binned feature and
/// the class.
pub fn score_mutual_information(dataset: &Dataset, n_bins: usize) -> Result<ScoreVector> {
    check_bins(n_bins)?;
    let scores = (0..dataset.n_features())
        .map(|f| {
            let bins = equal_width_bins(dataset, f, n_bins);
            Contingency::new(&bins, dataset.labels(), n_bins).mutual_information()
        })
        .collect();
    Ok(ScoreVector {
        method: Method::MutualInformation,
        scores,
    })
}

/// Symmetrical uncertainty `2 I(X;Y) / (H(X) + H(Y))` on equal-width bins,
/// 0 when both entropies vanish.
pub fn score_correlation_su(dataset: &Dataset, n_bins: usize) -> Result<ScoreVector> {
    check_bins(n_bins)?;
    let scores = (0..dataset.n_features())
        .map(|f| {
            let bins = equal_width_bins(dataset, f, n_bins);
            let table = Contingency::new(&bins, dataset.labels(), n_bins);
            let denom = table.bin_entropy() + table.class_entropy();
            if denom > 0.0 {
                (2.0 * table.mutual_information() / denom).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();
    Ok(ScoreVector {
        method: Method::CfsSu,
        scores,
    })
}

/// Fisher score: between-class over within-class scatter, with population
/// variances and an epsilon floor on the denominator.
pub fn score_fisher(dataset: &Dataset) -> Result<ScoreVector> {
    let counts = dataset.class_counts();
    let labels = dataset.labels();
    let scores = (0..dataset.n_features())
        .map(|f| {
            // centred on the first value, so a constant column is exactly 0
            let origin = dataset.value(0, f);
            let mut sums = [0.0; 2];
            let mut total = 0.0;
            for (r, &l) in labels.iter().enumerate() {
                let v = dataset.value(r, f) - origin;
                sums[l as usize] += v;
                total += v;
            }
            let mu = total / dataset.n_samples() as f64;
            let means = [sums[0] / counts[0] as f64, sums[1] / counts[1] as f64];
            let mut scatter = [0.0; 2];
            for (r, &l) in labels.iter().enumerate() {
                let d = dataset.value(r, f) - origin - means[l as usize];
                scatter[l as usize] += d * d;
            }
            // n_c * sigma_c^2 is the within-class sum of squares.
            let between: f64 = (0..2)
                .map(|c| counts[c] as f64 * (means[c] - mu) * (means[c] - mu))
                .sum();
            between / (scatter[0] + scatter[1] + FISHER_EPSILON)
        })
        .collect();
    Ok(ScoreVector {
        method: Method::Fisher,
        scores,
    })
}
