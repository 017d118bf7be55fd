//! Multi-threaded drivers. Every task draws from its own seeded stream, so
//! results do not depend on the number of threads.

use std::sync::Arc;

use fuzzrank_core::classifiers::ClassifierConfig;
use fuzzrank_core::dataset::{Dataset, FoldSplit};
use fuzzrank_core::evaluation::{AccuracyCurve, AccuracyPoint, FoldScores};
use fuzzrank_core::fuzzy_ensemble::{
    ranking_from_scores, score_subset, EnsembleConfig, SubsetScorer, SubsetScores,
};
use fuzzrank_core::stats::mean;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Scores bootstrap subsets on a rayon pool.
#[derive(Clone)]
pub struct Parallel {
    pool: Arc<rayon::ThreadPool>,
}

impl Parallel {
    /// `jobs == 0` uses one thread per core.
    pub fn new(jobs: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
        Ok(Self { pool: Arc::new(pool) })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

impl std::fmt::Debug for Parallel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Parallel")
            .field("threads", &self.threads())
            .finish()
    }
}

impl SubsetScorer for Parallel {
    fn score_subsets(
        &self,
        dataset: &Dataset,
        config: &EnsembleConfig,
    ) -> fuzzrank_core::Result<SubsetScores> {
        config.validate()?;
        let runs = self.pool.install(|| {
            (0..config.subsets)
                .into_par_iter()
                .map(|l| score_subset(dataset, l, config))
                .collect::<fuzzrank_core::Result<Vec<_>>>()
        })?;
        SubsetScores::new(config.methods.clone(), dataset.n_features(), runs)
    }
}

/// Same result as `fuzzrank_core::evaluation::accuracy_curves_from_scores`,
/// with every (variant, features kept, fold) fit run as a separate task.
pub fn accuracy_curves(
    pool: &Parallel,
    data: &Dataset,
    scores: &FoldScores,
    folds: &FoldSplit,
    classifier: &ClassifierConfig,
) -> Result<Vec<AccuracyCurve>> {
    let n = data.n_features();
    let k_folds = folds.k();
    if let Some(bad) = scores.scores.iter().find(|s| s.len() != k_folds) {
        return Err(fuzzrank_core::Error::LengthMismatch {
            expected: k_folds,
            got: bad.len(),
        }
        .into());
    }
    let trains: Vec<Dataset> = (0..k_folds)
        .map(|k| data.select_rows(&folds.train_indices(k)))
        .collect::<fuzzrank_core::Result<_>>()?;
    let rankings: Vec<Vec<Vec<usize>>> = scores
        .scores
        .iter()
        .map(|per_fold| per_fold.iter().map(|s| ranking_from_scores(s)).collect())
        .collect();
    let cells: Vec<(usize, usize, usize)> = (0..scores.variants.len())
        .flat_map(|v| {
            (1..=n)
                .rev()
                .flat_map(move |kept| (0..k_folds).map(move |k| (v, kept, k)))
        })
        .collect();
    let accs = pool.install(|| {
        cells
            .par_iter()
            .map(|&(v, kept, k)| {
                let mut subset = rankings[v][k][..kept].to_vec();
                subset.sort_unstable();
                let model = classifier.fit(&trains[k], &subset, &[k as u64, kept as u64])?;
                Ok(model.accuracy(data, folds.test_indices(k)))
            })
            .collect::<fuzzrank_core::Result<Vec<f64>>>()
    })?;
    let mut chunks = accs.chunks(k_folds);
    Ok(scores
        .variants
        .iter()
        .map(|variant| AccuracyCurve {
            variant: variant.clone(),
            classifier: classifier.kind,
            points: (1..=n)
                .rev()
                .map(|kept| {
                    let per_fold = chunks.next().expect("one chunk per cell").to_vec();
                    AccuracyPoint {
                        n_features_kept: kept,
                        mean_accuracy: mean(&per_fold),
                        per_fold,
                    }
                })
                .collect(),
        })
        .collect())
}
