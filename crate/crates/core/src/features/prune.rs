//! Constant-column and correlation pruning (FS3).

use crate::data::FeatureMatrix;
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// The column set surviving pruning, in original order. Computed on
/// training data and replayed on any compatible matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrunePlan {
    pub keep: Vec<String>,
}

/// Drop constant columns, then greedily drop the later column of every pair
/// whose absolute Pearson correlation exceeds `threshold`. Earlier columns
/// win ties, which makes the survivor set deterministic.
pub fn prune_plan(matrix: &FeatureMatrix, threshold: f64) -> PrunePlan {
    let n = matrix.n_rows();
    let mut kept: Vec<usize> = Vec::new();
    // Centered copies and norms of kept columns, for fast correlation.
    let mut centered: Vec<Vec<f64>> = Vec::new();
    let mut norms: Vec<f64> = Vec::new();

    for j in 0..matrix.n_cols() {
        let col = matrix.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let c: Vec<f64> = col.iter().map(|v| v - mean).collect();
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue; // constant column
        }
        let mut correlated = false;
        for (other, &other_norm) in centered.iter().zip(&norms) {
            let dot: f64 = c.iter().zip(other).map(|(x, y)| x * y).sum();
            let rho = dot / (norm * other_norm);
            if rho.abs() > threshold {
                correlated = true;
                break;
            }
        }
        if !correlated {
            kept.push(j);
            centered.push(c);
            norms.push(norm);
        }
    }

    PrunePlan {
        keep: kept
            .into_iter()
            .map(|j| matrix.names()[j].clone())
            .collect(),
    }
}

/// Select the plan's columns from a matrix (training or test).
pub fn apply_prune(matrix: &FeatureMatrix, plan: &PrunePlan) -> Result<FeatureMatrix> {
    matrix.select_by_names(&plan.keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Provenance;

    fn matrix(names: &[&str], cols: Vec<Vec<f64>>) -> FeatureMatrix {
        FeatureMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            cols,
            Provenance::new("t", "0"),
        )
        .unwrap()
    }

    #[test]
    fn constant_columns_are_dropped() {
        let m = matrix(
            &["x", "const"],
            vec![vec![1.0, 2.0, 3.0], vec![5.0, 5.0, 5.0]],
        );
        let plan = prune_plan(&m, 0.99);
        assert_eq!(plan.keep, vec!["x"]);
    }

    #[test]
    fn exactly_one_of_a_duplicated_column_survives() {
        let m = matrix(
            &["a", "a_copy", "b"],
            vec![
                vec![1.0, 2.0, 3.0, 4.0],
                vec![1.0, 2.0, 3.0, 4.0],
                vec![4.0, 1.0, 3.0, 2.0],
            ],
        );
        let plan = prune_plan(&m, 0.99);
        assert_eq!(plan.keep, vec!["a", "b"]);
    }

    #[test]
    fn anticorrelated_columns_count_too() {
        let m = matrix(
            &["a", "neg_a"],
            vec![vec![1.0, 2.0, 3.0], vec![-1.0, -2.0, -3.0]],
        );
        let plan = prune_plan(&m, 0.99);
        assert_eq!(plan.keep, vec!["a"]);
    }

    #[test]
    fn plan_replays_on_other_matrices() {
        let train = matrix(
            &["a", "a_copy"],
            vec![vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]],
        );
        let plan = prune_plan(&train, 0.99);
        let test = matrix(&["a", "a_copy"], vec![vec![9.0], vec![7.0]]);
        let out = apply_prune(&test, &plan).unwrap();
        assert_eq!(out.names(), &["a".to_string()]);
        assert_eq!(out.column(0), &[9.0]);
    }
}
