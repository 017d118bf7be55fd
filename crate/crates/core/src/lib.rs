//! Ensemble filter feature ranking built from bootstrap-generated fuzzy sets.
//!
//! Each base scorer is run on `L` bootstrap subsets of the data. The per-subset
//! scores of every feature are min-max normalized, snapped to a 101-point grid
//! over `[0, 1]` and collected into a type-1 fuzzy set per (feature, scorer).
//! The sets of the different scorers are merged with one of four weighting
//! schemes and defuzzified with the center-of-average rule; sorting the
//! resulting values gives the feature ranking.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! front end and multi-threaded execution live in the `fuzzrank` crate.

#![no_std]
#![warn(rust_2018_idioms, missing_copy_implementations, unused_qualifications)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifiers;
pub mod dataset;
mod error;
pub mod evaluation;
pub mod fuzzy_ensemble;
pub mod rng;
pub mod selectors;
pub mod stats;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::classifiers::{ClassifierConfig, ClassifierKind, FittedModel};
    pub use crate::dataset::{kfold_split, subsample, Dataset, FoldSplit};
    pub use crate::evaluation::{
        accuracy_curve, compute_apc, compute_asd, subsample_stability, AccuracyCurve, FeatureRanker,
        StabilityReport, SubsampleCurve,
    };
    pub use crate::fuzzy_ensemble::{
        rank_features, EnsembleConfig, EnsembleRanker, FuzzySet, RankingResult, Scheme,
    };
    pub use crate::selectors::{Method, ScoreVector, SelectorParams};
    pub use crate::stats::SdConvention;
    pub use crate::{Error, Result};
}
