//! In-memory tabular data, k-fold splits and proportional subsamples.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use log::warn;
use rand::seq::SliceRandom;

use crate::rng::{self, tag};
use crate::{Error, Result};

/// Maximum number of redraws when a random subset loses one of the classes.
pub const MAX_REDRAWS: usize = 100;

/// Dense numeric feature matrix with binary labels.
///
/// Values are stored row-major. A `Dataset` is validated on construction and
/// immutable afterwards: at least two samples, at least one feature, finite
/// values, labels in `{0, 1}` with both classes present, and unique feature
/// names.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    values: Vec<f64>,
    n_samples: usize,
    n_features: usize,
    labels: Vec<u8>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        values: Vec<f64>,
        labels: Vec<u8>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        let n_features = feature_names.len();
        if n_features == 0 {
            return Err(Error::NoFeatures);
        }
        let n_samples = labels.len();
        if n_samples < 2 {
            return Err(Error::TooFewSamples(n_samples));
        }
        if values.len() != n_samples * n_features {
            return Err(Error::LengthMismatch {
                expected: n_samples * n_features,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n_features,
                column: pos % n_features,
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidLabel(bad));
        }
        if !has_both_classes(&labels) {
            return Err(Error::SingleClass);
        }
        let mut seen = BTreeSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateFeatureName(name.clone()));
            }
        }
        Ok(Self {
            name: name.into(),
            values,
            n_samples,
            n_features,
            labels,
            feature_names,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Row-major feature values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.values[index * self.n_features..(index + 1) * self.n_features]
    }

    #[inline]
    pub fn value(&self, row: usize, column: usize) -> f64 {
        self.values[row * self.n_features + column]
    }

    pub fn column(&self, column: usize) -> Vec<f64> {
        (0..self.n_samples).map(|r| self.value(r, column)).collect()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        class_counts(&self.labels)
    }

    /// New dataset made of the given rows, in the given order. Repeated
    /// indices are allowed (bootstrap draws).
    pub fn select_rows(&self, indices: &[usize]) -> Result<Dataset> {
        let mut values = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n_samples {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.n_samples,
                });
            }
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset::new(self.name.clone(), values, labels, self.feature_names.clone())
    }

    /// New dataset restricted to the given feature columns, in the given order.
    pub fn select_features(&self, columns: &[usize]) -> Result<Dataset> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.n_features) {
            return Err(Error::IndexOutOfRange {
                index: c,
                len: self.n_features,
            });
        }
        let mut values = Vec::with_capacity(self.n_samples * columns.len());
        for r in 0..self.n_samples {
            let row = self.row(r);
            values.extend(columns.iter().map(|&c| row[c]));
        }
        let names = columns.iter().map(|&c| self.feature_names[c].clone()).collect();
        Dataset::new(self.name.clone(), values, self.labels.clone(), names)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

pub(crate) fn class_counts(labels: &[u8]) -> [usize; 2] {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    [labels.len() - ones, ones]
}

pub(crate) fn has_both_classes(labels: &[u8]) -> bool {
    let [a, b] = class_counts(labels);
    a > 0 && b > 0
}

/// Disjoint sample index sets covering `0..S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSplit {
    folds: Vec<Vec<usize>>,
    seed: u64,
}

impl FoldSplit {
    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }

    pub fn k(&self) -> usize {
        self.folds.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn test_indices(&self, fold: usize) -> &[usize] {
        &self.folds[fold]
    }

    /// All indices outside `fold`, ascending.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        let mut train: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(f, _)| f != fold)
            .flat_map(|(_, idx)| idx.iter().copied())
            .collect();
        train.sort_unstable();
        train
    }
}

/// Stratified k-fold split.
///
/// Indices of each class are shuffled and dealt round-robin over the folds,
/// class 0 first and class 1 continuing where class 0 stopped. Fold sizes
/// then differ by at most one and each fold's class counts are within one of
/// the proportional share. When a class has fewer than `k` members the split
/// falls back to an unstratified shuffle.
pub fn kfold_split(dataset: &Dataset, k: usize, seed: u64) -> Result<FoldSplit> {
    let s = dataset.n_samples();
    if k < 2 || k > s {
        return Err(Error::InvalidFoldCount { k, samples: s });
    }
    let mut rng = rng::stream(seed, &[tag::KFOLD, k as u64]);
    let counts = dataset.class_counts();
    let order: Vec<usize> = if counts.iter().all(|&c| c >= k) {
        let mut order = Vec::with_capacity(s);
        for class in 0..2u8 {
            let mut members: Vec<usize> = (0..s).filter(|&i| dataset.labels()[i] == class).collect();
            members.shuffle(&mut rng);
            order.extend(members);
        }
        order
    } else {
        warn!(
            "class counts {:?} are below k = {}; using an unstratified split",
            counts, k
        );
        let mut order: Vec<usize> = (0..s).collect();
        order.shuffle(&mut rng);
        order
    };
    let mut folds = alloc::vec![Vec::with_capacity(s / k + 1); k];
    for (pos, idx) in order.into_iter().enumerate() {
        folds[pos % k].push(idx);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(FoldSplit { folds, seed })
}

/// Number of rows kept by [`subsample`]. The small slack keeps decimal
/// proportions such as `0.7` from losing a row to binary rounding.
pub fn subsample_size(n_samples: usize, p: f64) -> usize {
    libm::floor(p * n_samples as f64 + 1e-9) as usize
}

/// Draws `floor(p * S)` rows uniformly without replacement, keeping the
/// original row order. `p = 1` returns the dataset unchanged.
pub fn subsample(dataset: &Dataset, p: f64, seed: u64) -> Result<Dataset> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProportion(p));
    }
    if p == 1.0 {
        return Ok(dataset.clone());
    }
    let s = dataset.n_samples();
    let n = subsample_size(s, p);
    if n < 2 {
        return Err(Error::SubsampleTooSmall(n));
    }
    let mut rng = rng::stream(seed, &[tag::SUBSAMPLE]);
    let all: Vec<usize> = (0..s).collect();
    for _ in 0..MAX_REDRAWS {
        let mut picked: Vec<usize> = all.choose_multiple(&mut rng, n).copied().collect();
        picked.sort_unstable();
        let labels: Vec<u8> = picked.iter().map(|&i| dataset.labels()[i]).collect();
        if has_both_classes(&labels) {
            return dataset.select_rows(&picked);
        }
    }
    Err(Error::ClassCollapse(MAX_REDRAWS))
}
