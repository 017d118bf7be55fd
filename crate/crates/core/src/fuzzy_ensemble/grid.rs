use alloc::vec::Vec;

use crate::{Error, Result};

/// Number of points of the unit grid `{0, 0.01, ..., 1}`.
pub const GRID_POINTS: usize = 101;

/// A point of the unit grid, stored by index so that values snapped to the
/// grid compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint(u8);

impl GridPoint {
    pub const ZERO: GridPoint = GridPoint(0);
    pub const ONE: GridPoint = GridPoint(100);

    pub fn from_index(index: usize) -> Option<GridPoint> {
        (index < GRID_POINTS).then_some(GridPoint(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UnitGrid;

impl UnitGrid {
    pub fn points() -> impl Iterator<Item = GridPoint> + Clone {
        (0..GRID_POINTS as u8).map(GridPoint)
    }

    pub fn values() -> impl Iterator<Item = f64> + Clone {
        Self::points().map(GridPoint::value)
    }
}

/// Min-max normalization to `[0, 1]`. A constant input maps every entry to
/// the midpoint 0.5.
pub fn normalize_scores(raw: &[f64]) -> Vec<f64> {
    let (lo, hi) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi <= lo {
        return alloc::vec![0.5; raw.len()];
    }
    let range = hi - lo;
    raw.iter().map(|&v| (v - lo) / range).collect()
}

/// Snaps a value in `[0, 1]` to the nearest grid point; halves round up.
pub fn discretize(value: f64) -> Result<GridPoint> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfUnitRange(value));
    }
    Ok(GridPoint(libm::round(value * 100.0) as u8))
}
