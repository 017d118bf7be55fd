use alloc::vec::Vec;

use super::grid::{GridPoint, UnitGrid, GRID_POINTS};
use super::weights::WeightVector;
use crate::selectors::Method;
use crate::{Error, Result};

/// Grid-snapped normalized scores of one feature under one method, one value
/// per bootstrap subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreSamples {
    pub feature: usize,
    pub method: Method,
    values: Vec<GridPoint>,
}

impl ScoreSamples {
    pub fn new(feature: usize, method: Method, values: Vec<GridPoint>) -> Self {
        Self {
            feature,
            method,
            values,
        }
    }

    pub fn values(&self) -> &[GridPoint] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|p| p.value()).collect()
    }

    /// Occurrences of every grid point.
    pub fn counts(&self) -> [u32; GRID_POINTS] {
        let mut counts = [0u32; GRID_POINTS];
        for p in &self.values {
            counts[p.index()] += 1;
        }
        counts
    }
}

/// Discrete type-1 fuzzy set over the unit grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet {
    membership: [f64; GRID_POINTS],
}

/// Slack allowed above 1 for memberships produced by floating-point sums.
const MEMBERSHIP_SLACK: f64 = 1e-12;

impl FuzzySet {
    pub fn empty() -> Self {
        Self {
            membership: [0.0; GRID_POINTS],
        }
    }

    pub fn from_membership(membership: [f64; GRID_POINTS]) -> Result<Self> {
        if let Some(&bad) = membership
            .iter()
            .find(|&&m| !(0.0..=1.0 + MEMBERSHIP_SLACK).contains(&m))
        {
            return Err(Error::OutOfUnitRange(bad));
        }
        Ok(Self { membership })
    }

    /// Point mass at `x`.
    pub fn singleton(x: GridPoint) -> Self {
        let mut set = Self::empty();
        set.membership[x.index()] = 1.0;
        set
    }

    pub fn membership(&self, x: GridPoint) -> f64 {
        self.membership[x.index()]
    }

    pub fn memberships(&self) -> &[f64; GRID_POINTS] {
        &self.membership
    }

    pub fn total_membership(&self) -> f64 {
        self.membership.iter().sum()
    }

    /// Grid points with non-zero membership, ascending.
    pub fn support(&self) -> impl Iterator<Item = GridPoint> + '_ {
        UnitGrid::points().filter(move |p| self.membership[p.index()] > 0.0)
    }
}

/// Membership of `x` is its frequency among the samples divided by `L`.
pub fn build_fuzzy_set(samples: &ScoreSamples) -> FuzzySet {
    let l = samples.len() as f64;
    let mut set = FuzzySet::empty();
    if samples.is_empty() {
        return set;
    }
    for (m, &c) in set.membership.iter_mut().zip(samples.counts().iter()) {
        *m = c as f64 / l;
    }
    set
}

/// Grid-point-wise weighted sum of the sets.
pub fn combine_fuzzy_sets(sets: &[FuzzySet], weights: &WeightVector) -> Result<FuzzySet> {
    let w = weights.weights();
    if w.len() != sets.len() {
        return Err(Error::LengthMismatch {
            expected: sets.len(),
            got: w.len(),
        });
    }
    let mut out = FuzzySet::empty();
    for (q, m) in out.membership.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (set, &wj) in sets.iter().zip(w) {
            acc += wj * set.membership[q];
        }
        *m = acc;
    }
    Ok(out)
}

/// Center-of-average defuzzification: membership-weighted mean of the grid.
pub fn defuzzify(set: &FuzzySet) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, &m) in UnitGrid::values().zip(set.membership.iter()) {
        num += x * m;
        den += m;
    }
    if den <= 0.0 {
        return Err(Error::EmptyFuzzySet);
    }
    Ok(num / den)
}

/// `L x 101` binary image of a fuzzy set: cell `(p, q)` is set iff
/// `p / L <= mu(q)`, `p = 1..=L`.
///
/// Set cells of a column always form a prefix `1..=h`, so the matrix is
/// stored as one height per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    levels: usize,
    heights: [u32; GRID_POINTS],
}

impl BinaryMatrix {
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Number of set cells in column `q`.
    pub fn column_height(&self, q: usize) -> usize {
        self.heights[q] as usize
    }

    /// Cell at level `p` (1-based, as in `p / L`) and grid column `q`.
    pub fn cell(&self, p: usize, q: usize) -> bool {
        debug_assert!((1..=self.levels).contains(&p));
        p <= self.heights[q] as usize
    }

    pub fn ones(&self) -> u64 {
        self.heights.iter().map(|&h| h as u64).sum()
    }

    /// Row `p - 1` holds level `p`.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (1..=self.levels)
            .map(|p| (0..GRID_POINTS).map(|q| u8::from(self.cell(p, q))).collect())
            .collect()
    }
}

pub fn binarize_fuzzy_set(set: &FuzzySet, levels: usize) -> BinaryMatrix {
    let l = levels as f64;
    let mut heights = [0u32; GRID_POINTS];
    for (h, &mu) in heights.iter_mut().zip(set.membership.iter()) {
        // Largest p with p / L <= mu, found from the floor and then checked
        // against the exact predicate.
        let mut p = (libm::floor(mu * l).max(0.0) as usize).min(levels);
        while p < levels && (p + 1) as f64 / l <= mu {
            p += 1;
        }
        while p > 0 && p as f64 / l > mu {
            p -= 1;
        }
        *h = p as u32;
    }
    BinaryMatrix { levels, heights }
}
