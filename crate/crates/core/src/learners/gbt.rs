//! Gradient-boosted trees on the logistic loss.
//!
//! Additive regression trees with second-order (Newton) leaf weights
//! `-G / (H + lambda)` and exact greedy split search on presorted numeric
//! features; gain is the usual split score
//! `Gl^2/(Hl+l) + Gr^2/(Hr+l) - G^2/(H+l)`. Boosting rounds are sequential
//! by definition. Rows are subsampled per round and columns per tree when
//! the corresponding fractions are below 1.

use super::tree::{Tree, TreeNode};
use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use crate::rng;
use rand::seq::index::sample as sample_indices;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const GBT_STREAM: u64 = 0x6762_7400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GbtParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    /// Fraction of rows drawn (without replacement) per boosting round.
    pub subsample: f64,
    /// Fraction of columns drawn per tree.
    pub colsample_bytree: f64,
    /// Initial prediction, as a probability.
    pub base_score: f64,
    /// L2 smoothing added to the hessian in every leaf.
    pub lambda: f64,
    pub min_samples_split: usize,
}

impl Default for GbtParams {
    fn default() -> Self {
        GbtParams {
            n_estimators: 100,
            max_depth: 2,
            learning_rate: 0.08,
            subsample: 1.0,
            colsample_bytree: 1.0,
            base_score: 0.5,
            lambda: 1.0,
            min_samples_split: 2,
        }
    }
}

impl GbtParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::Config("gbt: n_estimators must be >= 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Config("gbt: max_depth must be >= 1".into()));
        }
        if self.learning_rate < 0.0 {
            return Err(Error::Config("gbt: learning_rate must be >= 0".into()));
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return Err(Error::Config("gbt: subsample must be in (0, 1]".into()));
        }
        if !(self.colsample_bytree > 0.0 && self.colsample_bytree <= 1.0) {
            return Err(Error::Config("gbt: colsample_bytree must be in (0, 1]".into()));
        }
        if !(self.base_score > 0.0 && self.base_score < 1.0) {
            return Err(Error::Config("gbt: base_score must be in (0, 1)".into()));
        }
        if self.lambda < 0.0 {
            return Err(Error::Config("gbt: lambda must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbtModel {
    pub base_margin: f64,
    pub trees: Vec<Tree>,
    /// Set when training saw a single class; predictions are constant.
    pub constant: Option<f64>,
    pub split_counts: BTreeMap<usize, u64>,
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub(crate) fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

pub fn fit(params: &GbtParams, matrix: &FeatureMatrix, labels: &[bool], seed: u64) -> Result<GbtModel> {
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
        // Degenerate single-class set: constant scorer at the class rate.
        return Ok(GbtModel {
            base_margin: 0.0,
            trees: Vec::new(),
            constant: Some(if positives == 0 { 0.0 } else { 1.0 }),
            split_counts: BTreeMap::new(),
        });
    }

    // Presort row indices per feature once; node scans reuse the order.
    let sorted: Vec<Vec<u32>> = (0..d)
        .map(|j| {
            let col = matrix.column(j);
            let mut idx: Vec<u32> = (0..n as u32).collect();
            idx.sort_by(|&a, &b| {
                col[a as usize]
                    .partial_cmp(&col[b as usize])
                    .expect("finite features")
            });
            idx
        })
        .collect();

    let base_margin = logit(params.base_score);
    let mut margins = vec![base_margin; n];
    let y: Vec<f64> = labels.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();

    let mut trees = Vec::with_capacity(params.n_estimators);
    let mut split_counts = BTreeMap::new();
    let mut in_node = vec![false; n];

    for round in 0..params.n_estimators {
        let mut rng = rng::substream2(seed, GBT_STREAM, round as u64);

        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n];
        for i in 0..n {
            let p = sigmoid(margins[i]);
            grad[i] = p - y[i];
            hess[i] = p * (1.0 - p);
        }

        let root_rows: Vec<u32> = if params.subsample < 1.0 {
            let k = ((params.subsample * n as f64).round() as usize).clamp(1, n);
            let mut picked: Vec<u32> =
                sample_indices(&mut rng, n, k).into_iter().map(|i| i as u32).collect();
            picked.sort_unstable();
            picked
        } else {
            (0..n as u32).collect()
        };

        let tree_cols: Vec<usize> = if params.colsample_bytree < 1.0 {
            let k = ((params.colsample_bytree * d as f64).ceil() as usize).clamp(1, d);
            let mut picked: Vec<usize> = sample_indices(&mut rng, d, k).into_iter().collect();
            picked.sort_unstable();
            picked
        } else {
            (0..d).collect()
        };

        let tree = grow_tree(
            params,
            matrix,
            &sorted,
            &tree_cols,
            &grad,
            &hess,
            root_rows,
            &mut in_node,
            &mut split_counts,
        );

        // Margins advance for every row, sampled or not.
        for i in 0..n {
            margins[i] += tree.predict_row(matrix, i);
        }
        trees.push(tree);
    }

    Ok(GbtModel {
        base_margin,
        trees,
        constant: None,
        split_counts,
    })
}

struct BuildNode {
    rows: Vec<u32>,
    depth: usize,
    slot: usize,
}

#[allow(clippy::too_many_arguments)]
fn grow_tree(
    params: &GbtParams,
    matrix: &FeatureMatrix,
    sorted: &[Vec<u32>],
    tree_cols: &[usize],
    grad: &[f64],
    hess: &[f64],
    root_rows: Vec<u32>,
    in_node: &mut [bool],
    split_counts: &mut BTreeMap<usize, u64>,
) -> Tree {
    let lambda = params.lambda;
    let score = |g: f64, h: f64| g * g / (h + lambda);
    let leaf_value = |g: f64, h: f64| -params.learning_rate * g / (h + lambda);

    let mut nodes: Vec<TreeNode> = vec![TreeNode::Leaf { value: 0.0 }];
    let mut stack = vec![BuildNode {
        rows: root_rows,
        depth: 0,
        slot: 0,
    }];

    while let Some(node) = stack.pop() {
        let g_total: f64 = node.rows.iter().map(|&r| grad[r as usize]).sum();
        let h_total: f64 = node.rows.iter().map(|&r| hess[r as usize]).sum();

        let mut best: Option<(f64, usize, f64)> = None; // gain, feature, threshold
        if node.depth < params.max_depth && node.rows.len() >= params.min_samples_split {
            for &r in &node.rows {
                in_node[r as usize] = true;
            }
            let parent_score = score(g_total, h_total);
            for &j in tree_cols {
                let col = matrix.column(j);
                let mut gl = 0.0;
                let mut hl = 0.0;
                let mut prev_value: Option<f64> = None;
                for &r in &sorted[j] {
                    let i = r as usize;
                    if !in_node[i] {
                        continue;
                    }
                    let v = col[i];
                    if let Some(pv) = prev_value {
                        if v > pv {
                            let gain =
                                score(gl, hl) + score(g_total - gl, h_total - hl) - parent_score;
                            // First best wins: features ascend and
                            // thresholds ascend, so ties resolve to the
                            // lowest feature index, then lowest threshold.
                            if gain > best.map(|b| b.0).unwrap_or(1e-12) {
                                best = Some((gain, j, 0.5 * (pv + v)));
                            }
                        }
                    }
                    gl += grad[i];
                    hl += hess[i];
                    prev_value = Some(v);
                }
            }
            for &r in &node.rows {
                in_node[r as usize] = false;
            }
        }

        match best {
            None => {
                nodes[node.slot] = TreeNode::Leaf {
                    value: leaf_value(g_total, h_total),
                };
            }
            Some((_, feature, threshold)) => {
                *split_counts.entry(feature).or_insert(0) += 1;
                let col = matrix.column(feature);
                let (left_rows, right_rows): (Vec<u32>, Vec<u32>) = node
                    .rows
                    .iter()
                    .partition(|&&r| col[r as usize] < threshold);
                let left = nodes.len() as u32;
                nodes.push(TreeNode::Leaf { value: 0.0 });
                let right = nodes.len() as u32;
                nodes.push(TreeNode::Leaf { value: 0.0 });
                nodes[node.slot] = TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                stack.push(BuildNode {
                    rows: left_rows,
                    depth: node.depth + 1,
                    slot: left as usize,
                });
                stack.push(BuildNode {
                    rows: right_rows,
                    depth: node.depth + 1,
                    slot: right as usize,
                });
            }
        }
    }

    Tree { nodes }
}

pub fn predict(model: &GbtModel, matrix: &FeatureMatrix) -> Vec<f64> {
    if let Some(c) = model.constant {
        return vec![c; matrix.n_rows()];
    }
    (0..matrix.n_rows())
        .map(|row| {
            let margin: f64 = model.base_margin
                + model
                    .trees
                    .iter()
                    .map(|t| t.predict_row(matrix, row))
                    .sum::<f64>();
            sigmoid(margin)
        })
        .collect()
}
