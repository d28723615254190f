//! Extremely randomized trees.
//!
//! Per node, `max_features` candidate features are drawn, each gets a
//! single uniform-random cut between the node's min and max, and the best
//! candidate by impurity decrease wins. No bootstrap: every tree sees all
//! rows, randomness comes entirely from the feature/cut draws. Scores are
//! the mean over trees of the leaf class-1 fraction, with optional
//! instance weighting of the positive class.

use super::tree::{Tree, TreeNode};
use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use crate::rng;
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const ETC_STREAM: u64 = 0x6574_6300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    #[default]
    Gini,
    Entropy,
}

/// Candidate features considered per node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaxFeatures {
    Count(usize),
    Fraction(f64),
    Mode(MaxFeaturesMode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeaturesMode {
    Sqrt,
    All,
}

impl Default for MaxFeatures {
    fn default() -> Self {
        MaxFeatures::Mode(MaxFeaturesMode::Sqrt)
    }
}

impl MaxFeatures {
    fn resolve(&self, d: usize) -> Result<usize> {
        let k = match *self {
            MaxFeatures::Count(k) => k,
            MaxFeatures::Fraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::Config("etc: max_features fraction must be in (0, 1]".into()));
                }
                (f * d as f64).ceil() as usize
            }
            MaxFeatures::Mode(MaxFeaturesMode::Sqrt) => (d as f64).sqrt().round() as usize,
            MaxFeatures::Mode(MaxFeaturesMode::All) => d,
        };
        Ok(k.clamp(1, d))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EtcParams {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub criterion: Criterion,
    pub max_features: MaxFeatures,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// Instance weight of the positive class, applied in impurities and
    /// leaf fractions.
    pub class_weight_pos: Option<f64>,
}

impl Default for EtcParams {
    fn default() -> Self {
        EtcParams {
            n_estimators: 1000,
            max_depth: None,
            criterion: Criterion::Gini,
            max_features: MaxFeatures::default(),
            min_samples_split: 2,
            min_samples_leaf: 1,
            class_weight_pos: None,
        }
    }
}

impl EtcParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::Config("etc: n_estimators must be >= 1".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::Config("etc: max_depth must be >= 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::Config("etc: min_samples_split must be >= 2".into()));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::Config("etc: min_samples_leaf must be >= 1".into()));
        }
        if let Some(w) = self.class_weight_pos {
            if !(w > 0.0) {
                return Err(Error::Config("etc: class weight must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtcModel {
    pub trees: Vec<Tree>,
    pub constant: Option<f64>,
    pub split_counts: BTreeMap<usize, u64>,
}

pub fn fit(params: &EtcParams, matrix: &FeatureMatrix, labels: &[bool], seed: u64) -> Result<EtcModel> {
    params.validate()?;
    let n = matrix.n_rows();
    let d = matrix.n_cols();
    if labels.len() != n {
        return Err(Error::Model(format!("{} labels for {n} rows", labels.len())));
    }
    if n == 0 || d == 0 {
        return Err(Error::Model("empty training matrix".into()));
    }
    let positives = labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == n {
        return Ok(EtcModel {
            trees: Vec::new(),
            constant: Some(if positives == 0 { 0.0 } else { 1.0 }),
            split_counts: BTreeMap::new(),
        });
    }

    let k_features = params.max_features.resolve(d)?;
    let pos_weight = params.class_weight_pos.unwrap_or(1.0);

    // Trees are independent given their substream; build them in parallel
    // and collect in index order so parallel and serial runs agree.
    let trees: Vec<Tree> = (0..params.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::substream2(seed, ETC_STREAM, t as u64);
            grow_tree(params, matrix, labels, pos_weight, k_features, &mut rng)
        })
        .collect();

    let mut split_counts = BTreeMap::new();
    for tree in &trees {
        tree.accumulate_split_counts(&mut split_counts);
    }

    Ok(EtcModel {
        trees,
        constant: None,
        split_counts,
    })
}

fn impurity(criterion: Criterion, w0: f64, w1: f64) -> f64 {
    let total = w0 + w1;
    if total == 0.0 {
        return 0.0;
    }
    let p0 = w0 / total;
    let p1 = w1 / total;
    match criterion {
        Criterion::Gini => 1.0 - p0 * p0 - p1 * p1,
        Criterion::Entropy => {
            let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
            term(p0) + term(p1)
        }
    }
}

struct NodeTask {
    rows: Vec<u32>,
    depth: usize,
    slot: usize,
}

fn grow_tree<R: Rng>(
    params: &EtcParams,
    matrix: &FeatureMatrix,
    labels: &[bool],
    pos_weight: f64,
    k_features: usize,
    rng: &mut R,
) -> Tree {
    let d = matrix.n_cols();
    let leaf_fraction = |rows: &[u32]| -> f64 {
        let mut w0 = 0.0;
        let mut w1 = 0.0;
        for &r in rows {
            if labels[r as usize] {
                w1 += pos_weight;
            } else {
                w0 += 1.0;
            }
        }
        w1 / (w0 + w1)
    };

    let mut nodes = vec![TreeNode::Leaf { value: 0.0 }];
    let mut stack = vec![NodeTask {
        rows: (0..matrix.n_rows() as u32).collect(),
        depth: 0,
        slot: 0,
    }];

    while let Some(task) = stack.pop() {
        let rows = &task.rows;
        let n_node = rows.len();
        let pos = rows.iter().filter(|&&r| labels[r as usize]).count();
        let pure = pos == 0 || pos == n_node;
        let depth_done = params.max_depth.is_some_and(|m| task.depth >= m);

        let mut best: Option<(f64, usize, f64)> = None; // decrease, feature, cut
        if !pure && !depth_done && n_node >= params.min_samples_split {
            let w1_total: f64 = pos as f64 * pos_weight;
            let w0_total = (n_node - pos) as f64;
            let parent =
                impurity(params.criterion, w0_total, w1_total) * (w0_total + w1_total);

            for j in sample_indices(rng, d, k_features).into_iter() {
                let col = matrix.column(j);
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &r in rows {
                    let v = col[r as usize];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                if lo >= hi {
                    continue; // constant within the node
                }
                // One uniform cut strictly inside (lo, hi).
                let mut cut = rng.random_range(lo..hi);
                for _ in 0..4 {
                    if cut > lo && cut < hi {
                        break;
                    }
                    cut = rng.random_range(lo..hi);
                }
                if !(cut > lo && cut < hi) {
                    cut = lo + (hi - lo) / 2.0;
                }

                let mut wl = (0.0, 0.0);
                let mut nl = 0usize;
                for &r in rows {
                    if col[r as usize] < cut {
                        nl += 1;
                        if labels[r as usize] {
                            wl.1 += pos_weight;
                        } else {
                            wl.0 += 1.0;
                        }
                    }
                }
                let nr = n_node - nl;
                if nl < params.min_samples_leaf || nr < params.min_samples_leaf {
                    continue;
                }
                let wr = (w0_total - wl.0, w1_total - wl.1);
                let decrease = parent
                    - impurity(params.criterion, wl.0, wl.1) * (wl.0 + wl.1)
                    - impurity(params.criterion, wr.0, wr.1) * (wr.0 + wr.1);
                let better = match best {
                    None => decrease > 1e-15,
                    Some((bd, bf, bc)) => {
                        decrease > bd + 1e-15
                            || ((decrease - bd).abs() <= 1e-15 && (j, cut) < (bf, bc))
                    }
                };
                if better {
                    best = Some((decrease, j, cut));
                }
            }
        }

        match best {
            None => {
                nodes[task.slot] = TreeNode::Leaf {
                    value: leaf_fraction(rows),
                };
            }
            Some((_, feature, threshold)) => {
                let col = matrix.column(feature);
                let (left_rows, right_rows): (Vec<u32>, Vec<u32>) =
                    rows.iter().partition(|&&r| col[r as usize] < threshold);
                let left = nodes.len() as u32;
                nodes.push(TreeNode::Leaf { value: 0.0 });
                let right = nodes.len() as u32;
                nodes.push(TreeNode::Leaf { value: 0.0 });
                nodes[task.slot] = TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                stack.push(NodeTask {
                    rows: left_rows,
                    depth: task.depth + 1,
                    slot: left as usize,
                });
                stack.push(NodeTask {
                    rows: right_rows,
                    depth: task.depth + 1,
                    slot: right as usize,
                });
            }
        }
    }
    Tree { nodes }
}

pub fn predict(model: &EtcModel, matrix: &FeatureMatrix) -> Vec<f64> {
    if let Some(c) = model.constant {
        return vec![c; matrix.n_rows()];
    }
    let n_trees = model.trees.len() as f64;
    (0..matrix.n_rows())
        .map(|row| {
            model
                .trees
                .iter()
                .map(|t| t.predict_row(matrix, row))
                .sum::<f64>()
                / n_trees
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Provenance;
    use crate::metrics::{auc_rank, TieMode};

    fn single_feature(values: Vec<f64>) -> FeatureMatrix {
        FeatureMatrix::new(vec!["x".into()], vec![values], Provenance::default()).unwrap()
    }

    fn small_params(n: usize) -> EtcParams {
        EtcParams {
            n_estimators: n,
            max_depth: Some(4),
            ..EtcParams::default()
        }
    }

    #[test]
    fn separable_feature_is_learned() {
        let xs: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let labels: Vec<bool> = (0..40).map(|i| i >= 20).collect();
        let m = single_feature(xs);
        let model = fit(&small_params(50), &m, &labels, 4).unwrap();
        let scores = predict(&model, &m);
        assert_eq!(auc_rank(&scores, &labels, TieMode::Half).unwrap(), 1.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let xs: Vec<f64> = (0..30).map(|i| ((i * 17) % 30) as f64).collect();
        let labels: Vec<bool> = (0..30).map(|i| i % 4 == 0).collect();
        let m = single_feature(xs);
        let a = fit(&small_params(20), &m, &labels, 8).unwrap();
        let b = fit(&small_params(20), &m, &labels, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn depth_one_thresholds_are_uniform_on_the_range() {
        // Statistical check over many seeds: with one feature spanning
        // [0, 1], the root cut must be uniform on (0, 1).
        let xs: Vec<f64> = (0..51).map(|i| i as f64 / 50.0).collect();
        let labels: Vec<bool> = (0..51).map(|i| i >= 25).collect();
        let m = single_feature(xs);
        let params = EtcParams {
            n_estimators: 1,
            max_depth: Some(1),
            ..EtcParams::default()
        };
        let mut cuts = Vec::new();
        for seed in 0..400 {
            let model = fit(&params, &m, &labels, seed).unwrap();
            if let TreeNode::Split { threshold, .. } = model.trees[0].nodes[0] {
                cuts.push(threshold);
            }
        }
        assert_eq!(cuts.len(), 400);
        let mean = cuts.iter().sum::<f64>() / cuts.len() as f64;
        assert!((mean - 0.5).abs() < 0.05, "mean {mean}");
        let q1 = cuts.iter().filter(|&&c| c < 0.25).count() as f64 / cuts.len() as f64;
        let q4 = cuts.iter().filter(|&&c| c > 0.75).count() as f64 / cuts.len() as f64;
        assert!((q1 - 0.25).abs() < 0.1, "lower quartile mass {q1}");
        assert!((q4 - 0.25).abs() < 0.1, "upper quartile mass {q4}");
    }

    #[test]
    fn class_weight_shifts_leaf_fractions() {
        let xs = vec![0.0, 0.0, 0.0, 1.0];
        let labels = vec![false, false, false, true];
        let m = single_feature(xs);
        let params = EtcParams {
            n_estimators: 1,
            min_samples_split: 10, // forces a single leaf
            class_weight_pos: Some(10.0),
            ..EtcParams::default()
        };
        let model = fit(&params, &m, &labels, 1).unwrap();
        let scores = predict(&model, &m);
        // Weighted fraction: 10 / (3 + 10).
        for s in scores {
            assert!((s - 10.0 / 13.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_class_returns_constant() {
        let m = single_feature(vec![1.0, 2.0]);
        let model = fit(&small_params(3), &m, &[true, true], 0).unwrap();
        assert_eq!(predict(&model, &m), vec![1.0, 1.0]);
    }

    #[test]
    fn split_counts_sum_to_internal_nodes() {
        let xs: Vec<f64> = (0..60).map(|i| ((i * 13) % 60) as f64).collect();
        let labels: Vec<bool> = (0..60).map(|i| (i % 5) < 2).collect();
        let m = single_feature(xs);
        let model = fit(&small_params(10), &m, &labels, 6).unwrap();
        let total: u64 = model.split_counts.values().sum();
        let internal: usize = model.trees.iter().map(|t| t.internal_node_count()).sum();
        assert_eq!(total, internal as u64);
    }
}
