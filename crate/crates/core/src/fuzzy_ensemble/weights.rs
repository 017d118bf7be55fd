//! Per-feature combination weights for the fuzzy sets of the `M` methods.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use log::warn;

use super::fuzzy_set::{binarize_fuzzy_set, FuzzySet, ScoreSamples};
use super::grid::GRID_POINTS;
use crate::stats::{std_dev, SdConvention};
use crate::{Error, Result};

/// Floor on the standard deviation in the reciprocal scheme.
pub const RW_SD_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// Every method gets `1 / M`.
    Equal,
    /// Proportional to `1 / SD` of the method's score samples.
    ReciprocalSd,
    /// Proportional to `1 - SD`.
    OneMinusSd,
    /// Proportional to the overlap of the method's binary image with the
    /// sum of all images.
    MatrixSimilarity,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Equal,
        Scheme::ReciprocalSd,
        Scheme::OneMinusSd,
        Scheme::MatrixSimilarity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Scheme::Equal => "ew",
            Scheme::ReciprocalSd => "rw",
            Scheme::OneMinusSd => "ow",
            Scheme::MatrixSimilarity => "mw",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownId {
                kind: "scheme",
                value: String::from(s),
            })
    }
}

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    scheme: Scheme,
    weights: Vec<f64>,
}

impl WeightVector {
    fn normalized(scheme: Scheme, raw: Vec<f64>) -> Self {
        let total: f64 = raw.iter().sum();
        let weights = raw.into_iter().map(|v| v / total).collect();
        Self { scheme, weights }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn check_count(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::NoMethods);
    }
    Ok(())
}

pub fn weights_equal(m: usize) -> Result<WeightVector> {
    check_count(m)?;
    Ok(WeightVector::normalized(Scheme::Equal, vec![1.0; m]))
}

pub fn weights_reciprocal_sd(samples: &[ScoreSamples], convention: SdConvention) -> Result<WeightVector> {
    check_count(samples.len())?;
    let raw = samples
        .iter()
        .map(|s| 1.0 / std_dev(&s.as_f64(), convention).max(RW_SD_FLOOR))
        .collect();
    Ok(WeightVector::normalized(Scheme::ReciprocalSd, raw))
}

pub fn weights_one_minus_sd(samples: &[ScoreSamples], convention: SdConvention) -> Result<WeightVector> {
    check_count(samples.len())?;
    let raw = samples
        .iter()
        .map(|s| 1.0 - std_dev(&s.as_f64(), convention))
        .collect();
    Ok(WeightVector::normalized(Scheme::OneMinusSd, raw))
}

/// Matrix-similarity weights.
///
/// With `B_j` the binary image of set `j` and `C = sum_j B_j`, the raw weight
/// is `|B_j o C|_1 / |C|_1`. Column `q` of `B_j` is a prefix of height
/// `h_jq`, so `|B_j o C|_1 = sum_q sum_k min(h_jq, h_kq)` and everything is
/// integer arithmetic.
pub fn weights_matrix_similarity(sets: &[FuzzySet], levels: usize) -> Result<WeightVector> {
    check_count(sets.len())?;
    let images: Vec<_> = sets.iter().map(|s| binarize_fuzzy_set(s, levels)).collect();
    let combined_ones: u64 = images.iter().map(|b| b.ones()).sum();
    if combined_ones == 0 {
        warn!("all binary images are empty; falling back to equal weights");
        return weights_equal(sets.len());
    }
    let raw = images
        .iter()
        .map(|bj| {
            let overlap: u64 = (0..GRID_POINTS)
                .map(|q| {
                    images
                        .iter()
                        .map(|bk| bj.column_height(q).min(bk.column_height(q)) as u64)
                        .sum::<u64>()
                })
                .sum();
            overlap as f64 / combined_ones as f64
        })
        .collect();
    Ok(WeightVector::normalized(Scheme::MatrixSimilarity, raw))
}

/// Weights of one feature under `scheme`. `samples` and `sets` are indexed
/// by method and `levels` is the number of bootstrap subsets.
pub fn compute_weights(
    scheme: Scheme,
    samples: &[ScoreSamples],
    sets: &[FuzzySet],
    levels: usize,
    convention: SdConvention,
) -> Result<WeightVector> {
    match scheme {
        Scheme::Equal => weights_equal(samples.len()),
        Scheme::ReciprocalSd => weights_reciprocal_sd(samples, convention),
        Scheme::OneMinusSd => weights_one_minus_sd(samples, convention),
        Scheme::MatrixSimilarity => weights_matrix_similarity(sets, levels),
    }
}
