//! Decision-tree storage shared by the boosted and randomized ensembles.

use crate::data::FeatureMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Flat-array tree; node 0 is the root. Rows with `value < threshold` go
/// left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn predict_row(&self, matrix: &FeatureMatrix, row: usize) -> f64 {
        let mut at = 0usize;
        loop {
            match self.nodes[at] {
                TreeNode::Leaf { value } => return value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if matrix.value(row, feature) < threshold {
                        left as usize
                    } else {
                        right as usize
                    };
                }
            }
        }
    }

    pub fn internal_node_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Split { .. }))
            .count()
    }

    pub fn accumulate_split_counts(&self, counts: &mut BTreeMap<usize, u64>) {
        for node in &self.nodes {
            if let TreeNode::Split { feature, .. } = node {
                *counts.entry(*feature).or_insert(0) += 1;
            }
        }
    }
}
