//! Bootstrap fuzzy-set generation, weighted combination and
//! defuzzification.

mod fuzzy_set;
mod grid;
mod pipeline;
mod weights;

pub use fuzzy_set::{
    binarize_fuzzy_set, build_fuzzy_set, combine_fuzzy_sets, defuzzify, BinaryMatrix, FuzzySet, ScoreSamples,
};
pub use grid::{discretize, normalize_scores, GridPoint, UnitGrid, GRID_POINTS};
pub use pipeline::{
    bootstrap_indices, bootstrap_size, bootstrap_subsets, build_score_samples, fuse, fuse_samples,
    rank_features, rank_features_with, ranking_from_scores, score_subset, EnsembleConfig, EnsembleRanker,
    FusedScores, NormalizationScope, RankingResult, Sequential, SubsetScorer, SubsetScores,
};
pub use weights::{
    compute_weights, weights_equal, weights_matrix_similarity, weights_one_minus_sd, weights_reciprocal_sd,
    Scheme, WeightVector, RW_SD_FLOOR,
};
