//! Naive reference implementations used as test oracles. Written directly
//! from the definitions with plain loops and dense matrices; they share no
//! code with the library beyond the data types.

#![allow(dead_code, clippy::needless_range_loop)]

use fuzzrank_core::dataset::Dataset;
use fuzzrank_core::fuzzy_ensemble::{bootstrap_indices, bootstrap_size, EnsembleConfig, Scheme};
use fuzzrank_core::selectors;

pub const GRID: usize = 101;

/// Raw scores `[l][j][i]` of every method on every bootstrap subset.
pub fn raw_subset_scores(data: &Dataset, cfg: &EnsembleConfig) -> Vec<Vec<Vec<f64>>> {
    let size = bootstrap_size(data.n_samples(), cfg.ratio);
    (0..cfg.subsets)
        .map(|l| {
            let idx = bootstrap_indices(data.labels(), l, size, cfg.seed).unwrap();
            let sample = data.select_rows(&idx).unwrap();
            cfg.methods
                .iter()
                .map(|&m| selectors::score(&sample, m, &cfg.params).unwrap().scores)
                .collect()
        })
        .collect()
}

/// Index on the 0.01 grid, halves rounded up.
pub fn grid_index(v: f64) -> usize {
    let t = v * 100.0;
    let f = t.floor();
    (if t - f >= 0.5 { f + 1.0 } else { f }) as usize
}

pub fn grid_value(q: usize) -> f64 {
    q as f64 / 100.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutput {
    pub scores: Vec<f64>,
    pub ranking: Vec<usize>,
    /// `[i][j]`
    pub weights: Vec<Vec<f64>>,
}

fn normalize_weights(raw: &[f64]) -> Vec<f64> {
    let mut total = 0.0;
    for &r in raw {
        total += r;
    }
    raw.iter().map(|&r| r / total).collect()
}

fn population_sd(values: &[f64], sample: bool) -> f64 {
    let n = values.len();
    let div = if sample { n - 1 } else { n };
    if div == 0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for &v in values {
        sum += v;
    }
    let mean = sum / n as f64;
    let mut ss = 0.0;
    for &v in values {
        ss += (v - mean) * (v - mean);
    }
    (ss / div as f64).sqrt()
}

/// Normalization across features, grid snapping, memberships, weights,
/// weighted union and center of average, for one scheme.
pub fn fuse(raw: &[Vec<Vec<f64>>], scheme: Scheme, sample_sd: bool) -> OracleOutput {
    let l_count = raw.len();
    let m_count = raw[0].len();
    let n = raw[0][0].len();

    // q[l][j][i]
    let mut q = vec![vec![vec![0usize; n]; m_count]; l_count];
    for l in 0..l_count {
        for j in 0..m_count {
            let s = &raw[l][j];
            let mut lo = s[0];
            let mut hi = s[0];
            for &v in s {
                if v < lo {
                    lo = v;
                }
                if v > hi {
                    hi = v;
                }
            }
            for i in 0..n {
                let norm = if hi > lo { (s[i] - lo) / (hi - lo) } else { 0.5 };
                q[l][j][i] = grid_index(norm);
            }
        }
    }

    let mut scores = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // mu[j][x]
        let mut mu = vec![vec![0.0f64; GRID]; m_count];
        for j in 0..m_count {
            for x in 0..GRID {
                let mut count = 0usize;
                for l in 0..l_count {
                    if q[l][j][i] == x {
                        count += 1;
                    }
                }
                mu[j][x] = count as f64 / l_count as f64;
            }
        }

        let raw_w: Vec<f64> = match scheme {
            Scheme::Equal => vec![1.0; m_count],
            Scheme::ReciprocalSd | Scheme::OneMinusSd => (0..m_count)
                .map(|j| {
                    let vals: Vec<f64> = (0..l_count).map(|l| grid_value(q[l][j][i])).collect();
                    let sd = population_sd(&vals, sample_sd);
                    if scheme == Scheme::ReciprocalSd {
                        1.0 / if sd > 1e-6 { sd } else { 1e-6 }
                    } else {
                        1.0 - sd
                    }
                })
                .collect(),
            Scheme::MatrixSimilarity => {
                // b[j][p][x], p = 1..=L stored at p - 1
                let b: Vec<Vec<Vec<u32>>> = (0..m_count)
                    .map(|j| {
                        (1..=l_count)
                            .map(|p| {
                                (0..GRID)
                                    .map(|x| u32::from(p as f64 / l_count as f64 <= mu[j][x]))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                let mut com = vec![vec![0u32; GRID]; l_count];
                for bj in &b {
                    for p in 0..l_count {
                        for x in 0..GRID {
                            com[p][x] += bj[p][x];
                        }
                    }
                }
                let mut com_norm = 0u64;
                for row in &com {
                    for &c in row {
                        com_norm += c as u64;
                    }
                }
                (0..m_count)
                    .map(|j| {
                        let mut dot = 0u64;
                        for p in 0..l_count {
                            for x in 0..GRID {
                                dot += (b[j][p][x] * com[p][x]) as u64;
                            }
                        }
                        dot as f64 / com_norm as f64
                    })
                    .collect()
            }
        };
        let w = normalize_weights(&raw_w);

        let mut num = 0.0;
        let mut den = 0.0;
        for x in 0..GRID {
            let mut combined = 0.0;
            for j in 0..m_count {
                combined += w[j] * mu[j][x];
            }
            num += grid_value(x) * combined;
            den += combined;
        }
        scores.push(num / den);
        weights.push(w);
    }

    OracleOutput {
        ranking: rank_desc(&scores),
        scores,
        weights,
    }
}

/// Indices by descending score, lower index first on ties.
pub fn rank_desc(scores: &[f64]) -> Vec<usize> {
    let mut left: Vec<usize> = (0..scores.len()).collect();
    let mut out = Vec::with_capacity(scores.len());
    while !left.is_empty() {
        let mut best = 0;
        for k in 1..left.len() {
            if scores[left[k]] > scores[left[best]] {
                best = k;
            }
        }
        out.push(left.remove(best));
    }
    out
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for k in 0..x.len() {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Mean over features of the population SD across folds, `m[k][i]`.
pub fn asd(m: &[Vec<f64>]) -> f64 {
    let n = m[0].len();
    let mut total = 0.0;
    for i in 0..n {
        let col: Vec<f64> = m.iter().map(|row| row[i]).collect();
        total += population_sd(&col, false);
    }
    total / n as f64
}

/// Mean Pearson correlation over unordered fold pairs, `m[k][i]`.
pub fn apc(m: &[Vec<f64>]) -> f64 {
    let k = m.len();
    let mut total = 0.0;
    let mut pairs = 0;
    for x in 0..k {
        for y in 0..k {
            if x < y {
                total += pearson(&m[x], &m[y]);
                pairs += 1;
            }
        }
    }
    total / pairs as f64
}
