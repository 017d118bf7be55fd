use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use rand::Rng;

use super::fuzzy_set::{build_fuzzy_set, combine_fuzzy_sets, defuzzify, FuzzySet, ScoreSamples};
use super::grid::{discretize, normalize_scores};
use super::weights::{compute_weights, Scheme, WeightVector};
use crate::dataset::{has_both_classes, Dataset, MAX_REDRAWS};
use crate::evaluation::FeatureRanker;
use crate::rng::{self, tag};
use crate::selectors::{self, Method, ScoreVector, SelectorParams};
use crate::stats::SdConvention;
use crate::{Error, Result};

/// Which scores a min-max normalization runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationScope {
    /// Across the `N` features of one (subset, method) run.
    #[default]
    AcrossFeatures,
    /// Across the `L` subsets for one (feature, method) pair.
    AcrossSubsets,
}

impl NormalizationScope {
    pub fn id(self) -> &'static str {
        match self {
            NormalizationScope::AcrossFeatures => "features",
            NormalizationScope::AcrossSubsets => "subsets",
        }
    }
}

impl core::fmt::Display for NormalizationScope {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for NormalizationScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "features" => Ok(NormalizationScope::AcrossFeatures),
            "subsets" => Ok(NormalizationScope::AcrossSubsets),
            _ => Err(Error::UnknownId {
                kind: "normalization scope",
                value: String::from(s),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub methods: Vec<Method>,
    pub scheme: Scheme,
    /// Number of bootstrap subsets `L`.
    pub subsets: usize,
    /// Bootstrap subset size as a fraction of the sample count.
    pub ratio: f64,
    pub seed: u64,
    pub params: SelectorParams,
    pub sd: SdConvention,
    pub normalization: NormalizationScope,
}

impl EnsembleConfig {
    pub const DEFAULT_SUBSETS: usize = 100;
    pub const DEFAULT_RATIO: f64 = 0.632;

    /// All four methods, 100 subsets of 63.2 % of the samples.
    pub fn new(scheme: Scheme) -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            scheme,
            subsets: Self::DEFAULT_SUBSETS,
            ratio: Self::DEFAULT_RATIO,
            seed: 0,
            params: SelectorParams::default(),
            sd: SdConvention::Population,
            normalization: NormalizationScope::AcrossFeatures,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::NoMethods);
        }
        if self.subsets == 0 {
            return Err(Error::InvalidParameter(
                "the number of subsets must be at least 1",
            ));
        }
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(Error::InvalidProportion(self.ratio));
        }
        Ok(())
    }
}

/// Rows per bootstrap subset, `ceil(ratio * S)`.
pub fn bootstrap_size(n_samples: usize, ratio: f64) -> usize {
    (libm::ceil(ratio * n_samples as f64 - 1e-9) as usize).max(1)
}

/// Row indices of bootstrap subset `subset`, drawn with replacement from a
/// stream that depends only on `(seed, subset)`. Draws missing a class are
/// repeated.
pub fn bootstrap_indices(labels: &[u8], subset: usize, size: usize, seed: u64) -> Result<Vec<usize>> {
    let s = labels.len();
    let mut rng = rng::stream(seed, &[tag::BOOTSTRAP, subset as u64]);
    let mut idx = Vec::with_capacity(size);
    for _ in 0..MAX_REDRAWS {
        idx.clear();
        idx.extend((0..size).map(|_| rng.gen_range(0..s)));
        let drawn: Vec<u8> = idx.iter().map(|&i| labels[i]).collect();
        if has_both_classes(&drawn) {
            return Ok(idx);
        }
    }
    Err(Error::ClassCollapse(MAX_REDRAWS))
}

pub fn bootstrap_subsets(dataset: &Dataset, subsets: usize, ratio: f64, seed: u64) -> Result<Vec<Dataset>> {
    if subsets == 0 {
        return Err(Error::InvalidParameter(
            "the number of subsets must be at least 1",
        ));
    }
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidProportion(ratio));
    }
    let size = bootstrap_size(dataset.n_samples(), ratio);
    (0..subsets)
        .map(|l| {
            let idx = bootstrap_indices(dataset.labels(), l, size, seed)?;
            dataset.select_rows(&idx)
        })
        .collect()
}

/// Raw scores of every method on every bootstrap subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetScores {
    methods: Vec<Method>,
    n_features: usize,
    runs: Vec<Vec<ScoreVector>>,
}

impl SubsetScores {
    /// `runs[l][j]` holds method `j` on subset `l`.
    pub fn new(methods: Vec<Method>, n_features: usize, runs: Vec<Vec<ScoreVector>>) -> Result<Self> {
        if methods.is_empty() {
            return Err(Error::NoMethods);
        }
        if runs.is_empty() {
            return Err(Error::InvalidParameter(
                "the number of subsets must be at least 1",
            ));
        }
        for run in &runs {
            if run.len() != methods.len() {
                return Err(Error::LengthMismatch {
                    expected: methods.len(),
                    got: run.len(),
                });
            }
            for (sv, &m) in run.iter().zip(&methods) {
                if sv.method != m {
                    return Err(Error::InvalidParameter("score vectors out of method order"));
                }
                if sv.scores.len() != n_features {
                    return Err(Error::LengthMismatch {
                        expected: n_features,
                        got: sv.scores.len(),
                    });
                }
                if let Some(pos) = sv.scores.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { row: pos, column: 0 });
                }
            }
        }
        Ok(Self {
            methods,
            n_features,
            runs,
        })
    }

    pub fn methods(&self) -> &[Method] {
        &self.methods
    }

    pub fn subsets(&self) -> usize {
        self.runs.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn raw(&self, subset: usize, method: usize) -> &[f64] {
        &self.runs[subset][method].scores
    }
}

/// Scores every configured method on bootstrap subset `subset`.
pub fn score_subset(dataset: &Dataset, subset: usize, config: &EnsembleConfig) -> Result<Vec<ScoreVector>> {
    let size = bootstrap_size(dataset.n_samples(), config.ratio);
    let idx = bootstrap_indices(dataset.labels(), subset, size, config.seed)?;
    let sample = dataset.select_rows(&idx)?;
    config
        .methods
        .iter()
        .map(|&m| selectors::score(&sample, m, &config.params))
        .collect()
}

/// Strategy for producing the per-subset scores.
pub trait SubsetScorer {
    fn score_subsets(&self, dataset: &Dataset, config: &EnsembleConfig) -> Result<SubsetScores>;
}

/// Scores the subsets one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl SubsetScorer for Sequential {
    fn score_subsets(&self, dataset: &Dataset, config: &EnsembleConfig) -> Result<SubsetScores> {
        config.validate()?;
        let runs = (0..config.subsets)
            .map(|l| score_subset(dataset, l, config))
            .collect::<Result<Vec<_>>>()?;
        SubsetScores::new(config.methods.clone(), dataset.n_features(), runs)
    }
}

/// Normalized, grid-snapped samples indexed `[feature][method]`.
pub fn build_score_samples(
    scores: &SubsetScores,
    scope: NormalizationScope,
) -> Result<Vec<Vec<ScoreSamples>>> {
    let n = scores.n_features();
    let m = scores.methods().len();
    let l = scores.subsets();
    // normalized[j][i][l]
    let mut normalized = alloc::vec![alloc::vec![Vec::with_capacity(l); n]; m];
    match scope {
        NormalizationScope::AcrossFeatures => {
            for subset in 0..l {
                for (j, per_method) in normalized.iter_mut().enumerate() {
                    for (i, v) in normalize_scores(scores.raw(subset, j)).into_iter().enumerate() {
                        per_method[i].push(v);
                    }
                }
            }
        }
        NormalizationScope::AcrossSubsets => {
            for (j, per_method) in normalized.iter_mut().enumerate() {
                for (i, out) in per_method.iter_mut().enumerate() {
                    let series: Vec<f64> = (0..l).map(|s| scores.raw(s, j)[i]).collect();
                    *out = normalize_scores(&series);
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            scores
                .methods()
                .iter()
                .enumerate()
                .map(|(j, &method)| {
                    let values = normalized[j][i]
                        .iter()
                        .map(|&v| discretize(v))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(ScoreSamples::new(i, method, values))
                })
                .collect()
        })
        .collect()
}

/// Defuzzified feature scores and the weights that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FusedScores {
    pub scores: Vec<f64>,
    pub weights: Vec<WeightVector>,
}

/// Builds the fuzzy sets, weights and combines them per feature, and
/// defuzzifies.
pub fn fuse(
    scores: &SubsetScores,
    scheme: Scheme,
    sd: SdConvention,
    scope: NormalizationScope,
) -> Result<FusedScores> {
    let samples = build_score_samples(scores, scope)?;
    fuse_samples(&samples, scores.subsets(), scheme, sd)
}

pub fn fuse_samples(
    samples: &[Vec<ScoreSamples>],
    levels: usize,
    scheme: Scheme,
    sd: SdConvention,
) -> Result<FusedScores> {
    let mut out = FusedScores {
        scores: Vec::with_capacity(samples.len()),
        weights: Vec::with_capacity(samples.len()),
    };
    for per_method in samples {
        let sets: Vec<FuzzySet> = per_method.iter().map(build_fuzzy_set).collect();
        let weights = compute_weights(scheme, per_method, &sets, levels, sd)?;
        let combined = combine_fuzzy_sets(&sets, &weights)?;
        out.scores.push(defuzzify(&combined)?);
        out.weights.push(weights);
    }
    Ok(out)
}

/// Feature indices by descending score, ties by ascending index.
pub fn ranking_from_scores(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    pub dataset: String,
    pub feature_names: Vec<String>,
    pub scheme: Scheme,
    pub seed: u64,
    pub subsets: usize,
    pub ratio: f64,
    pub methods: Vec<Method>,
    /// Defuzzified score per feature, in column order.
    pub scores: Vec<f64>,
    /// Feature indices from most to least significant.
    pub ranking: Vec<usize>,
    pub weights: Vec<WeightVector>,
}

pub fn rank_features(dataset: &Dataset, config: &EnsembleConfig) -> Result<RankingResult> {
    rank_features_with(dataset, config, &Sequential)
}

pub fn rank_features_with<X: SubsetScorer + ?Sized>(
    dataset: &Dataset,
    config: &EnsembleConfig,
    scorer: &X,
) -> Result<RankingResult> {
    config.validate()?;
    let subset_scores = scorer.score_subsets(dataset, config)?;
    let fused = fuse(&subset_scores, config.scheme, config.sd, config.normalization)?;
    Ok(RankingResult {
        dataset: dataset.name().into(),
        feature_names: dataset.feature_names().to_vec(),
        scheme: config.scheme,
        seed: config.seed,
        subsets: config.subsets,
        ratio: config.ratio,
        methods: config.methods.clone(),
        ranking: ranking_from_scores(&fused.scores),
        scores: fused.scores,
        weights: fused.weights,
    })
}

/// Scores a dataset with every base method (min-max normalized, no
/// bootstrap) and with the fuzzy ensemble under several schemes, sharing one
/// pass of subset scoring across the schemes.
#[derive(Debug, Clone)]
pub struct EnsembleRanker<X = Sequential> {
    pub config: EnsembleConfig,
    pub base_methods: Vec<Method>,
    pub schemes: Vec<Scheme>,
    pub scorer: X,
}

impl EnsembleRanker<Sequential> {
    pub fn new(config: EnsembleConfig, base_methods: Vec<Method>, schemes: Vec<Scheme>) -> Self {
        Self::with_scorer(config, base_methods, schemes, Sequential)
    }
}

impl<X: SubsetScorer> EnsembleRanker<X> {
    pub fn with_scorer(
        config: EnsembleConfig,
        base_methods: Vec<Method>,
        schemes: Vec<Scheme>,
        scorer: X,
    ) -> Self {
        Self {
            config,
            base_methods,
            schemes,
            scorer,
        }
    }
}

impl<X: SubsetScorer> FeatureRanker for EnsembleRanker<X> {
    fn variants(&self) -> Vec<String> {
        self.base_methods
            .iter()
            .map(|m| String::from(m.id()))
            .chain(self.schemes.iter().map(|s| String::from(s.id())))
            .collect()
    }

    fn score(&self, data: &Dataset) -> Result<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(self.base_methods.len() + self.schemes.len());
        for &m in &self.base_methods {
            let raw = selectors::score(data, m, &self.config.params)?;
            out.push(normalize_scores(&raw.scores));
        }
        if !self.schemes.is_empty() {
            self.config.validate()?;
            let subset_scores = self.scorer.score_subsets(data, &self.config)?;
            let samples = build_score_samples(&subset_scores, self.config.normalization)?;
            for &scheme in &self.schemes {
                let fused = fuse_samples(&samples, subset_scores.subsets(), scheme, self.config.sd)?;
                out.push(fused.scores);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn subset_sizes() {
        assert_eq!(bootstrap_size(768, 0.632), 486);
        assert_eq!(bootstrap_size(2, 1.0), 2);
        assert_eq!(bootstrap_size(10, 0.7), 7);
    }

    #[test]
    fn ranking_ties_by_index() {
        assert_eq!(ranking_from_scores(&[0.2, 0.5, 0.2, 0.9]), vec![3, 1, 0, 2]);
        assert!(ranking_from_scores(&[]).is_empty());
    }

    #[test]
    fn config_validation() {
        let mut c = EnsembleConfig::new(Scheme::Equal);
        assert!(c.validate().is_ok());
        c.ratio = 0.0;
        assert!(c.validate().is_err());
        c.ratio = 0.5;
        c.methods.clear();
        assert_eq!(c.validate(), Err(Error::NoMethods));
    }

    #[test]
    fn scope_ids() {
        for s in [
            NormalizationScope::AcrossFeatures,
            NormalizationScope::AcrossSubsets,
        ] {
            assert_eq!(s.id().parse::<NormalizationScope>().unwrap(), s);
        }
    }
}
