//! Classifiers used to measure how useful a feature ranking is.

mod naive_bayes;
mod random_forest;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use naive_bayes::{nb_fit, GaussianNb, VAR_SMOOTHING};
pub use random_forest::{rf_fit, DecisionTree, RandomForest};

use crate::dataset::Dataset;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassifierKind {
    NaiveBayes,
    RandomForest,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 2] = [ClassifierKind::NaiveBayes, ClassifierKind::RandomForest];

    pub fn id(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "nb",
            ClassifierKind::RandomForest => "rf",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassifierKind::ALL
            .into_iter()
            .find(|k| k.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownId {
                kind: "classifier",
                value: String::from(s),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    pub n_trees: usize,
    pub seed: u64,
}

impl ClassifierConfig {
    pub fn naive_bayes() -> Self {
        Self {
            kind: ClassifierKind::NaiveBayes,
            n_trees: 100,
            seed: 0,
        }
    }

    pub fn random_forest(seed: u64) -> Self {
        Self {
            kind: ClassifierKind::RandomForest,
            n_trees: 100,
            seed,
        }
    }

    /// Fits on `train` with the given columns. `stream` keys the forest's
    /// random stream so repeated fits (folds, feature counts) stay
    /// independent of call order.
    pub fn fit(&self, train: &Dataset, feature_subset: &[usize], stream: &[u64]) -> Result<FittedModel> {
        match self.kind {
            ClassifierKind::NaiveBayes => nb_fit(train, feature_subset).map(FittedModel::NaiveBayes),
            ClassifierKind::RandomForest => {
                let mut coords = Vec::with_capacity(stream.len() + 1);
                coords.push(crate::rng::tag::FOREST);
                coords.extend_from_slice(stream);
                let seed = crate::rng::derive_seed(self.seed, &coords);
                rf_fit(train, feature_subset, self.n_trees, seed).map(FittedModel::RandomForest)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    NaiveBayes(GaussianNb),
    RandomForest(RandomForest),
}

impl FittedModel {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            FittedModel::NaiveBayes(_) => ClassifierKind::NaiveBayes,
            FittedModel::RandomForest(_) => ClassifierKind::RandomForest,
        }
    }

    pub fn feature_subset(&self) -> &[usize] {
        match self {
            FittedModel::NaiveBayes(m) => m.feature_subset(),
            FittedModel::RandomForest(m) => m.feature_subset(),
        }
    }

    pub fn predict<R: AsRef<[f64]>>(&self, samples: &[R]) -> Result<Vec<u8>> {
        match self {
            FittedModel::NaiveBayes(m) => m.predict(samples),
            FittedModel::RandomForest(m) => m.predict(samples),
        }
    }

    pub fn predict_rows(&self, data: &Dataset, rows: &[usize]) -> Vec<u8> {
        match self {
            FittedModel::NaiveBayes(m) => m.predict_rows(data, rows),
            FittedModel::RandomForest(m) => m.predict_rows(data, rows),
        }
    }

    /// Fraction of `rows` whose label is predicted correctly.
    pub fn accuracy(&self, data: &Dataset, rows: &[usize]) -> f64 {
        if rows.is_empty() {
            return 0.0;
        }
        let pred = self.predict_rows(data, rows);
        let correct = pred
            .iter()
            .zip(rows)
            .filter(|(&p, &r)| p == data.labels()[r])
            .count();
        correct as f64 / rows.len() as f64
    }
}
