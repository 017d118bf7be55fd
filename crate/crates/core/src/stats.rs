//! Small descriptive statistics shared by the weighting schemes and the
//! stability metrics. Sums run in index order so results are reproducible
//! bit for bit.

use log::warn;

/// Divisor used by [`std_dev`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SdConvention {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`. A single value has standard deviation 0.
    Sample,
}

impl SdConvention {
    pub fn id(self) -> &'static str {
        match self {
            SdConvention::Population => "population",
            SdConvention::Sample => "sample",
        }
    }
}

impl core::fmt::Display for SdConvention {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.id())
    }
}

impl core::str::FromStr for SdConvention {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "population" => Ok(SdConvention::Population),
            "sample" => Ok(SdConvention::Sample),
            _ => Err(crate::Error::UnknownId {
                kind: "sd convention",
                value: s.into(),
            }),
        }
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for &v in values {
        sum += v;
    }
    sum / values.len() as f64
}

pub fn std_dev(values: &[f64], convention: SdConvention) -> f64 {
    let n = values.len();
    let divisor = match convention {
        SdConvention::Population => n,
        SdConvention::Sample => n.saturating_sub(1),
    };
    if divisor == 0 {
        return 0.0;
    }
    let m = mean(values);
    let mut ss = 0.0;
    for &v in values {
        let d = v - m;
        ss += d * d;
    }
    libm::sqrt(ss / divisor as f64)
}

/// Pearson correlation coefficient, `None` when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    debug_assert_eq!(x.len(), y.len());
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    // sqrt of the product so that identical inputs give exactly 1.
    Some((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Pearson correlation with the undefined case mapped to 0.
pub fn pearson_or_zero(x: &[f64], y: &[f64]) -> f64 {
    pearson(x, y).unwrap_or_else(|| {
        warn!("pearson correlation undefined for a constant score vector; using 0");
        0.0
    })
}
