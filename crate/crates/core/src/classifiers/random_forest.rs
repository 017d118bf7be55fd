use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;

use crate::dataset::Dataset;
use crate::rng::{self, tag, StreamRng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf {
        counts: [u32; 2],
    },
    Split {
        /// Position within the forest's feature subset.
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART classification tree grown to purity with Gini splits.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Majority class of the reached leaf; ties go to class 0.
    pub fn predict_one(&self, sample: &[f64]) -> u8 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => return u8::from(counts[1] > counts[0]),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if sample[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    feature_subset: Vec<usize>,
    trees: Vec<DecisionTree>,
}

/// Column-major copy of the training columns used by the forest.
struct TrainView {
    columns: Vec<Vec<f64>>,
    labels: Vec<u8>,
}

fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p0 = counts[0] as f64 / n;
    let p1 = counts[1] as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

fn class_counts(view: &TrainView, rows: &[usize]) -> [usize; 2] {
    let mut c = [0usize; 2];
    for &r in rows {
        c[view.labels[r] as usize] += 1;
    }
    c
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

/// Best threshold on `feature` for the node's rows, `None` if constant.
fn best_split_on(
    view: &TrainView,
    rows: &[usize],
    feature: usize,
    buf: &mut Vec<(f64, u8)>,
) -> Option<SplitChoice> {
    buf.clear();
    buf.extend(rows.iter().map(|&r| (view.columns[feature][r], view.labels[r])));
    buf.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = buf.len();
    let mut total = [0usize; 2];
    for &(_, l) in buf.iter() {
        total[l as usize] += 1;
    }
    let mut left = [0usize; 2];
    let mut best: Option<SplitChoice> = None;
    for i in 0..n - 1 {
        left[buf[i].1 as usize] += 1;
        let (a, b) = (buf[i].0, buf[i + 1].0);
        if a == b {
            continue;
        }
        let right = [total[0] - left[0], total[1] - left[1]];
        let nl = (i + 1) as f64;
        let nr = (n - i - 1) as f64;
        let impurity = (nl * gini(left) + nr * gini(right)) / n as f64;
        if best.as_ref().is_none_or(|b| impurity < b.impurity) {
            let mid = a + (b - a) / 2.0;
            let threshold = if mid < b { mid } else { a };
            best = Some(SplitChoice {
                feature,
                threshold,
                impurity,
            });
        }
    }
    best
}

fn grow_tree(view: &TrainView, rows: Vec<usize>, mtry: usize, rng: &mut StreamRng) -> DecisionTree {
    let n_features = view.columns.len();
    let mut nodes = vec![Node::Leaf { counts: [0, 0] }];
    let mut stack = vec![(0usize, rows)];
    let mut buf = Vec::new();
    while let Some((id, rows)) = stack.pop() {
        let counts = class_counts(view, &rows);
        let leaf = Node::Leaf {
            counts: [counts[0] as u32, counts[1] as u32],
        };
        if rows.len() < 2 || counts[0] == 0 || counts[1] == 0 || mtry == 0 {
            nodes[id] = leaf;
            continue;
        }
        let mut best: Option<SplitChoice> = None;
        for f in index::sample(rng, n_features, mtry).into_iter() {
            if let Some(c) = best_split_on(view, &rows, f, &mut buf) {
                if best.as_ref().is_none_or(|b| c.impurity < b.impurity) {
                    best = Some(c);
                }
            }
        }
        let Some(split) = best else {
            nodes[id] = leaf;
            continue;
        };
        let (l_rows, r_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| view.columns[split.feature][r] <= split.threshold);
        let left = nodes.len();
        nodes.push(Node::Leaf { counts: [0, 0] });
        let right = nodes.len();
        nodes.push(Node::Leaf { counts: [0, 0] });
        nodes[id] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        stack.push((right, r_rows));
        stack.push((left, l_rows));
    }
    DecisionTree { nodes }
}

/// Fits `n_trees` trees, each on a size-`S` bootstrap of `train` restricted
/// to `feature_subset`, trying `ceil(sqrt(|subset|))` random features per
/// node. Tree `t` draws from a stream seeded by `(seed, t)`.
pub fn rf_fit(train: &Dataset, feature_subset: &[usize], n_trees: usize, seed: u64) -> Result<RandomForest> {
    if n_trees == 0 {
        return Err(Error::InvalidParameter("n_trees must be at least 1"));
    }
    if let Some(&c) = feature_subset.iter().find(|&&c| c >= train.n_features()) {
        return Err(Error::IndexOutOfRange {
            index: c,
            len: train.n_features(),
        });
    }
    let view = TrainView {
        columns: feature_subset.iter().map(|&f| train.column(f)).collect(),
        labels: train.labels().to_vec(),
    };
    let s = train.n_samples();
    let mtry = libm::ceil(libm::sqrt(feature_subset.len() as f64)) as usize;
    let trees = (0..n_trees)
        .map(|t| {
            let mut rng = rng::stream(seed, &[tag::TREE, t as u64]);
            let rows: Vec<usize> = (0..s).map(|_| rng.gen_range(0..s)).collect();
            grow_tree(&view, rows, mtry.min(feature_subset.len()), &mut rng)
        })
        .collect();
    Ok(RandomForest {
        feature_subset: feature_subset.to_vec(),
        trees,
    })
}

impl RandomForest {
    pub fn feature_subset(&self) -> &[usize] {
        &self.feature_subset
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    /// Majority vote; ties go to class 0.
    pub fn predict_one(&self, sample: &[f64]) -> u8 {
        let ones = self.trees.iter().filter(|t| t.predict_one(sample) == 1).count();
        u8::from(2 * ones > self.trees.len())
    }

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
                Ok(self.predict_one(row))
            })
            .collect()
    }

    pub fn predict_rows(&self, data: &Dataset, rows: &[usize]) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.feature_subset.len());
        rows.iter()
            .map(|&r| {
                buf.clear();
                buf.extend(self.feature_subset.iter().map(|&f| data.value(r, f)));
                self.predict_one(&buf)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;

    fn one_feature(xs: &[f64], labels: &[u8]) -> Dataset {
        Dataset::new("rf", xs.to_vec(), labels.to_vec(), vec![String::from("x")]).unwrap()
    }

    #[test]
    fn separable_data_is_learned() {
        let xs: Vec<f64> = (0..20).map(f64::from).collect();
        let labels: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
        let ds = one_feature(&xs, &labels);
        let rf = rf_fit(&ds, &[0], 25, 3).unwrap();
        let rows: Vec<usize> = (0..20).collect();
        assert_eq!(rf.predict_rows(&ds, &rows), labels);
        assert_eq!(rf.trees().len(), 25);
    }

    #[test]
    fn deterministic_per_seed() {
        let xs: Vec<f64> = (0..30).map(|i| ((i * 7) % 11) as f64).collect();
        let labels: Vec<u8> = (0..30).map(|i| u8::from(i % 3 == 0)).collect();
        let ds = one_feature(&xs, &labels);
        let a = rf_fit(&ds, &[0], 10, 5).unwrap();
        let b = rf_fit(&ds, &[0], 10, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_tree_forest_matches_its_tree() {
        let xs: Vec<f64> = (0..12).map(|i| ((i * 5) % 7) as f64).collect();
        let labels: Vec<u8> = (0..12).map(|i| u8::from(i % 2 == 0)).collect();
        let ds = one_feature(&xs, &labels);
        let rf = rf_fit(&ds, &[0], 1, 9).unwrap();
        for v in 0..8 {
            let x = [v as f64];
            assert_eq!(rf.predict_one(&x), rf.trees()[0].predict_one(&x));
        }
    }

    #[test]
    fn even_vote_split_goes_to_class_zero() {
        let zero = DecisionTree {
            nodes: vec![Node::Leaf { counts: [3, 1] }],
        };
        let one = DecisionTree {
            nodes: vec![Node::Leaf { counts: [0, 2] }],
        };
        let tie = DecisionTree {
            nodes: vec![Node::Leaf { counts: [2, 2] }],
        };
        let forest = RandomForest {
            feature_subset: vec![],
            trees: vec![zero, one.clone()],
        };
        assert_eq!(forest.predict_one(&[]), 0);
        assert_eq!(tie.predict_one(&[]), 0);
        let unanimous = RandomForest {
            feature_subset: vec![],
            trees: vec![one.clone(), one],
        };
        assert_eq!(unanimous.predict::<[f64; 0]>(&[[], []]).unwrap(), vec![1, 1]);
        assert!(unanimous.predict(&[[1.0]]).is_err());
    }

    #[test]
    fn no_features_gives_leaf_only_trees() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let labels = [0, 0, 0, 0, 0, 0, 0, 1, 1, 1];
        let rf = rf_fit(&one_feature(&xs, &labels), &[], 5, 1).unwrap();
        assert!(rf.trees().iter().all(|t| t.n_nodes() == 1));
        assert!(rf_fit(&one_feature(&xs, &labels), &[0], 0, 1).is_err());
    }
}
