//! Experiment protocols: cross-validated accuracy under feature elimination,
//! cross-fold stability (ASD, APC) and stability under subsampling.

use alloc::string::String;
use alloc::vec::Vec;

use crate::classifiers::{ClassifierConfig, ClassifierKind};
use crate::dataset::{subsample, Dataset, FoldSplit};
use crate::fuzzy_ensemble::ranking_from_scores;
use crate::rng::{self, tag};
use crate::stats::{mean, pearson_or_zero, std_dev, SdConvention};
use crate::{Error, Result};

/// Proportions of the reduced-size stability experiment.
pub const DEFAULT_P_GRID: [f64; 7] = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3];

/// Something that scores the features of a dataset, possibly in several
/// variants at once (for example every weighting scheme from one round of
/// bootstrap scoring). Higher scores mean more significant features.
pub trait FeatureRanker {
    fn variants(&self) -> Vec<String>;

    /// One score vector per variant, in [`FeatureRanker::variants`] order.
    fn score(&self, data: &Dataset) -> Result<Vec<Vec<f64>>>;
}

/// Adapts a closure producing a single score vector.
pub struct FnRanker<F> {
    name: String,
    f: F,
}

impl<F> FnRanker<F>
where
    F: Fn(&Dataset) -> Result<Vec<f64>>,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self { name: name.into(), f }
    }
}

impl<F> FeatureRanker for FnRanker<F>
where
    F: Fn(&Dataset) -> Result<Vec<f64>>,
{
    fn variants(&self) -> Vec<String> {
        alloc::vec![self.name.clone()]
    }

    fn score(&self, data: &Dataset) -> Result<Vec<Vec<f64>>> {
        Ok(alloc::vec![(self.f)(data)?])
    }
}

/// Feature scores of every variant on every training fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldScores {
    pub variants: Vec<String>,
    /// `scores[v][k]` is variant `v` trained on all folds but `k`.
    pub scores: Vec<Vec<Vec<f64>>>,
}

/// Runs the ranker on each training fold. The ranker never sees the rows of
/// the held-out fold.
pub fn fold_scores(data: &Dataset, ranker: &dyn FeatureRanker, folds: &FoldSplit) -> Result<FoldScores> {
    let variants = ranker.variants();
    let mut scores = alloc::vec![Vec::with_capacity(folds.k()); variants.len()];
    for k in 0..folds.k() {
        let train = data.select_rows(&folds.train_indices(k))?;
        let per_variant = ranker.score(&train)?;
        if per_variant.len() != variants.len() {
            return Err(Error::LengthMismatch {
                expected: variants.len(),
                got: per_variant.len(),
            });
        }
        for (v, s) in per_variant.into_iter().enumerate() {
            if s.len() != data.n_features() {
                return Err(Error::LengthMismatch {
                    expected: data.n_features(),
                    got: s.len(),
                });
            }
            scores[v].push(s);
        }
    }
    Ok(FoldScores { variants, scores })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyPoint {
    pub n_features_kept: usize,
    pub mean_accuracy: f64,
    pub per_fold: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyCurve {
    pub variant: String,
    pub classifier: ClassifierKind,
    /// From all `N` features down to 1.
    pub points: Vec<AccuracyPoint>,
}

impl AccuracyCurve {
    /// Highest mean accuracy; the smaller feature count wins ties.
    pub fn best(&self) -> Option<&AccuracyPoint> {
        self.points
            .iter()
            .fold(None, |best: Option<&AccuracyPoint>, p| match best {
                Some(b) if b.mean_accuracy > p.mean_accuracy => Some(b),
                Some(b) if b.mean_accuracy == p.mean_accuracy && b.n_features_kept < p.n_features_kept => {
                    Some(b)
                }
                _ => Some(p),
            })
    }
}

/// Accuracy curves for precomputed fold scores. For fold `k` the top `n`
/// features of the fold's ranking are kept (passed to the classifier in
/// ascending column order), the classifier is fit on the training rows and
/// scored on the held-out rows.
pub fn accuracy_curves_from_scores(
    data: &Dataset,
    scores: &FoldScores,
    folds: &FoldSplit,
    classifier: &ClassifierConfig,
) -> Result<Vec<AccuracyCurve>> {
    let n = data.n_features();
    let k_folds = folds.k();
    let trains: Vec<Dataset> = (0..k_folds)
        .map(|k| data.select_rows(&folds.train_indices(k)))
        .collect::<Result<_>>()?;
    let mut curves = Vec::with_capacity(scores.variants.len());
    for (variant, per_fold) in scores.variants.iter().zip(&scores.scores) {
        if per_fold.len() != k_folds {
            return Err(Error::LengthMismatch {
                expected: k_folds,
                got: per_fold.len(),
            });
        }
        let rankings: Vec<Vec<usize>> = per_fold.iter().map(|s| ranking_from_scores(s)).collect();
        let mut points = Vec::with_capacity(n);
        for kept in (1..=n).rev() {
            let mut accs = Vec::with_capacity(k_folds);
            for (k, ranking) in rankings.iter().enumerate() {
                let mut subset = ranking[..kept].to_vec();
                subset.sort_unstable();
                let model = classifier.fit(&trains[k], &subset, &[k as u64, kept as u64])?;
                accs.push(model.accuracy(data, folds.test_indices(k)));
            }
            points.push(AccuracyPoint {
                n_features_kept: kept,
                mean_accuracy: mean(&accs),
                per_fold: accs,
            });
        }
        curves.push(AccuracyCurve {
            variant: variant.clone(),
            classifier: classifier.kind,
            points,
        });
    }
    Ok(curves)
}

/// Cross-validated accuracy curve of every ranker variant, with the ranking
/// recomputed on each training fold.
pub fn accuracy_curve(
    data: &Dataset,
    ranker: &dyn FeatureRanker,
    classifier: &ClassifierConfig,
    folds: &FoldSplit,
) -> Result<Vec<AccuracyCurve>> {
    let scores = fold_scores(data, ranker, folds)?;
    accuracy_curves_from_scores(data, &scores, folds, classifier)
}

fn check_matrix(fold_scores: &[Vec<f64>]) -> Result<usize> {
    if fold_scores.len() < 2 {
        return Err(Error::TooFewFolds(fold_scores.len()));
    }
    let n = fold_scores[0].len();
    if let Some(bad) = fold_scores.iter().find(|v| v.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok(n)
}

/// Standard deviation of each feature's score across folds.
pub fn per_feature_sd(fold_scores: &[Vec<f64>], convention: SdConvention) -> Result<Vec<f64>> {
    let n = check_matrix(fold_scores)?;
    Ok((0..n)
        .map(|i| {
            let column: Vec<f64> = fold_scores.iter().map(|v| v[i]).collect();
            std_dev(&column, convention)
        })
        .collect())
}

/// Average over features of the cross-fold standard deviation.
pub fn compute_asd(fold_scores: &[Vec<f64>], convention: SdConvention) -> Result<f64> {
    Ok(mean(&per_feature_sd(fold_scores, convention)?))
}

/// Average Pearson correlation over all unordered pairs of folds. A pair
/// involving a constant vector contributes 0.
pub fn compute_apc(fold_scores: &[Vec<f64>]) -> Result<f64> {
    check_matrix(fold_scores)?;
    let k = fold_scores.len();
    let mut total = 0.0;
    for x in 0..k {
        for y in x + 1..k {
            total += pearson_or_zero(&fold_scores[x], &fold_scores[y]);
        }
    }
    Ok(total / (k * (k - 1) / 2) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub variant: String,
    pub asd: f64,
    pub apc: f64,
    pub per_feature_sd: Vec<f64>,
    /// `K x N` defuzzified (or normalized base) scores.
    pub fold_scores: Vec<Vec<f64>>,
}

pub fn stability_report(
    variant: impl Into<String>,
    fold_scores: Vec<Vec<f64>>,
    convention: SdConvention,
) -> Result<StabilityReport> {
    let sds = per_feature_sd(&fold_scores, convention)?;
    Ok(StabilityReport {
        variant: variant.into(),
        asd: mean(&sds),
        apc: compute_apc(&fold_scores)?,
        per_feature_sd: sds,
        fold_scores,
    })
}

pub fn stability_reports(scores: &FoldScores, convention: SdConvention) -> Result<Vec<StabilityReport>> {
    scores
        .variants
        .iter()
        .zip(&scores.scores)
        .map(|(v, s)| stability_report(v.clone(), s.clone(), convention))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsamplePoint {
    pub p: f64,
    pub mean_pearson: f64,
    pub per_repeat: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleCurve {
    pub variant: String,
    /// Correlation of the full-data scores with a re-run on the full data.
    pub full_data_pearson: f64,
    pub points: Vec<SubsamplePoint>,
}

/// Seed of repeat `repeat` at proportion `p`.
pub fn subsample_seed(seed: u64, p: f64, repeat: usize) -> u64 {
    rng::derive_seed(seed, &[tag::SUBSAMPLE, p.to_bits(), repeat as u64])
}

/// Pearson correlation between full-data scores and scores on random
/// subsamples, for every ranker variant.
pub fn subsample_stability(
    data: &Dataset,
    ranker: &dyn FeatureRanker,
    p_grid: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<Vec<SubsampleCurve>> {
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1"));
    }
    let variants = ranker.variants();
    let reference = ranker.score(data)?;
    let again = ranker.score(&subsample(data, 1.0, seed)?)?;
    let mut per_p: Vec<Vec<Vec<f64>>> = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let mut per_repeat = alloc::vec![Vec::with_capacity(repeats); variants.len()];
        for r in 0..repeats {
            let sample = subsample(data, p, subsample_seed(seed, p, r))?;
            for (v, s) in ranker.score(&sample)?.iter().enumerate() {
                per_repeat[v].push(pearson_or_zero(&reference[v], s));
            }
        }
        per_p.push(per_repeat);
    }
    Ok(variants
        .into_iter()
        .enumerate()
        .map(|(v, variant)| SubsampleCurve {
            variant,
            full_data_pearson: pearson_or_zero(&reference[v], &again[v]),
            points: p_grid
                .iter()
                .zip(&per_p)
                .map(|(&p, rows)| SubsamplePoint {
                    p,
                    mean_pearson: mean(&rows[v]),
                    per_repeat: rows[v].clone(),
                })
                .collect(),
        })
        .collect())
}
