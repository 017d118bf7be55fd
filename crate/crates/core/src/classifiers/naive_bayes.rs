use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::{Error, Result};

/// Relative variance floor, as a fraction of the largest feature variance.
pub const VAR_SMOOTHING: f64 = 1e-9;

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Gaussian naive Bayes over a subset of feature columns.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    feature_subset: Vec<usize>,
    priors: [f64; 2],
    /// Per feature, per class.
    means: Vec<[f64; 2]>,
    variances: Vec<[f64; 2]>,
}

pub fn nb_fit(train: &Dataset, feature_subset: &[usize]) -> Result<GaussianNb> {
    if let Some(&c) = feature_subset.iter().find(|&&c| c >= train.n_features()) {
        return Err(Error::IndexOutOfRange {
            index: c,
            len: train.n_features(),
        });
    }
    let counts = train.class_counts();
    let s = train.n_samples() as f64;
    let labels = train.labels();
    let mut means = Vec::with_capacity(feature_subset.len());
    let mut variances = Vec::with_capacity(feature_subset.len());
    let mut max_var: f64 = 0.0;
    for &f in feature_subset {
        let mut sums = [0.0; 2];
        let mut total = 0.0;
        for (r, &l) in labels.iter().enumerate() {
            let v = train.value(r, f);
            sums[l as usize] += v;
            total += v;
        }
        let mean = [sums[0] / counts[0] as f64, sums[1] / counts[1] as f64];
        let overall = total / s;
        let mut ss = [0.0; 2];
        let mut ss_all = 0.0;
        for (r, &l) in labels.iter().enumerate() {
            let v = train.value(r, f);
            let d = v - mean[l as usize];
            ss[l as usize] += d * d;
            ss_all += (v - overall) * (v - overall);
        }
        max_var = max_var.max(ss_all / s);
        means.push(mean);
        variances.push([ss[0] / counts[0] as f64, ss[1] / counts[1] as f64]);
    }
    let floor = if max_var > 0.0 {
        VAR_SMOOTHING * max_var
    } else {
        VAR_SMOOTHING
    };
    for v in &mut variances {
        v[0] = v[0].max(floor);
        v[1] = v[1].max(floor);
    }
    Ok(GaussianNb {
        feature_subset: feature_subset.to_vec(),
        priors: [counts[0] as f64 / s, counts[1] as f64 / s],
        means,
        variances,
    })
}

impl GaussianNb {
    pub fn feature_subset(&self) -> &[usize] {
        &self.feature_subset
    }

    pub fn priors(&self) -> [f64; 2] {
        self.priors
    }

    pub fn means(&self) -> &[[f64; 2]] {
        &self.means
    }

    pub fn variances(&self) -> &[[f64; 2]] {
        &self.variances
    }

    /// Joint log-likelihood of one sample under each class.
    pub fn log_scores(&self, sample: &[f64]) -> [f64; 2] {
        let mut out = [libm::log(self.priors[0]), libm::log(self.priors[1])];
        for (k, &x) in sample.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                let var = self.variances[k][c];
                let d = x - self.means[k][c];
                *o -= 0.5 * (LN_2PI + libm::log(var)) + d * d / (2.0 * var);
            }
        }
        out
    }

    /// Predicts samples whose columns follow `feature_subset`. Ties go to
    /// class 0.
    pub fn predict<R: AsRef<[f64]>>(&self, samples: &[R]) -> Result<Vec<u8>> {
        let width = self.feature_subset.len();
        samples
            .iter()
            .map(|row| {
                let row = row.as_ref();
                if row.len() != width {
                    return Err(Error::DimensionMismatch {
                        expected: width,
                        got: row.len(),
                    });
                }
                let s = self.log_scores(row);
                Ok(u8::from(s[1] > s[0]))
            })
            .collect()
    }

    /// Predicts the given rows of a dataset with the full feature set.
    pub fn predict_rows(&self, data: &Dataset, rows: &[usize]) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.feature_subset.len());
        rows.iter()
            .map(|&r| {
                buf.clear();
                buf.extend(self.feature_subset.iter().map(|&f| data.value(r, f)));
                let s = self.log_scores(&buf);
                u8::from(s[1] > s[0])
            })
            .collect()
    }
}
