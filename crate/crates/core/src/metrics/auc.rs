//! Area under the ROC curve, pairwise and rank-based.

use super::{check_lengths, check_two_classes};
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// How tied (negative, positive) score pairs are credited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TieMode {
    /// Ties contribute 0, matching the strict-inequality definition used
    /// for scoring. All-equal scores give AUC 0.
    Strict,
    /// Ties contribute 1/2, the conventional ROC-AUC. All-equal scores give
    /// AUC 0.5. Default for reporting.
    #[default]
    Half,
}

/// Literal double-sum AUC: the fraction of (negative, positive) pairs the
/// scorer orders correctly, strict inequality, `O(n^2)`.
///
/// Kept as the reference the fast path is checked against.
pub fn auc_pairwise(scores: &[f64], labels: &[bool]) -> Result<f64> {
    check_lengths(scores, labels)?;
    let (neg, pos) = check_two_classes(labels)?;
    let mut correct: u64 = 0;
    for (si, yi) in scores.iter().zip(labels) {
        if *yi {
            continue;
        }
        for (sj, yj) in scores.iter().zip(labels) {
            if *yj && si < sj {
                correct += 1;
            }
        }
    }
    Ok(correct as f64 / (neg as f64 * pos as f64))
}

/// Rank-based AUC in `O(n log n)`.
///
/// With [`TieMode::Strict`] this equals [`auc_pairwise`] exactly (up to
/// float summation order); with [`TieMode::Half`] tied pairs earn half
/// credit. Any strictly monotone transform of the scores leaves the result
/// unchanged.
pub fn auc_rank(scores: &[f64], labels: &[bool], tie_mode: TieMode) -> Result<f64> {
    check_lengths(scores, labels)?;
    let (neg, pos) = check_two_classes(labels)?;

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    // Walk groups of equal scores from the lowest up, counting, for the
    // positives of each group, the negatives strictly below it.
    let mut credit = 0.0_f64;
    let mut negatives_below = 0u64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        let mut group_pos = 0u64;
        let mut group_neg = 0u64;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            if labels[order[j]] {
                group_pos += 1;
            } else {
                group_neg += 1;
            }
            j += 1;
        }
        let tie_credit = match tie_mode {
            TieMode::Strict => 0.0,
            TieMode::Half => 0.5 * group_neg as f64,
        };
        credit += group_pos as f64 * (negatives_below as f64 + tie_credit);
        negatives_below += group_neg;
        i = j;
    }
    Ok(credit / (neg as f64 * pos as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    #[test]
    fn perfect_predictor_scores_one() {
        let auc = auc_pairwise(&[0.1, 0.9], &[false, true]).unwrap();
        assert_eq!(auc, 1.0);
    }

    #[test]
    fn reversed_predictor_scores_zero() {
        let auc = auc_pairwise(&[0.9, 0.1], &[false, true]).unwrap();
        assert_eq!(auc, 0.0);
    }

    #[test]
    fn all_equal_scores_strict_zero_half_point_five() {
        let scores = [0.3; 6];
        let labels = [true, false, true, false, false, true];
        assert_eq!(auc_pairwise(&scores, &labels).unwrap(), 0.0);
        assert_eq!(auc_rank(&scores, &labels, TieMode::Strict).unwrap(), 0.0);
        assert_eq!(auc_rank(&scores, &labels, TieMode::Half).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_an_error() {
        assert!(auc_pairwise(&[0.1, 0.2], &[true, true]).is_err());
        assert!(auc_rank(&[0.1, 0.2], &[false, false], TieMode::Half).is_err());
    }

    #[test]
    fn random_scores_hover_near_half() {
        // Monte Carlo check of the random-predictor calibration.
        let mut rng = rng::substream(20_160_401, 0);
        let n = 10_000;
        let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        let scores: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let auc = auc_rank(&scores, &labels, TieMode::Half).unwrap();
        assert!((auc - 0.5).abs() < 0.02, "auc = {auc}");
    }

    #[test]
    fn rank_matches_pairwise_with_ties() {
        let mut rng = rng::substream(99, 1);
        for round in 0..50 {
            let n = 5 + (round % 40);
            // Quantized scores force plenty of ties.
            let scores: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * 8.0).round() / 8.0).collect();
            let mut labels: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
            labels[0] = true;
            labels[1] = false;
            let slow = auc_pairwise(&scores, &labels).unwrap();
            let fast = auc_rank(&scores, &labels, TieMode::Strict).unwrap();
            assert!((slow - fast).abs() <= 1e-12, "{slow} vs {fast}");
            let half = auc_rank(&scores, &labels, TieMode::Half).unwrap();
            assert!(half >= fast - 1e-15);
        }
    }

    #[test]
    fn monotone_transform_is_invariant() {
        let scores = [0.1, 0.4, 0.2, 0.8, 0.5];
        let labels = [false, true, false, true, false];
        let before = auc_rank(&scores, &labels, TieMode::Half).unwrap();
        let transformed: Vec<f64> = scores.iter().map(|s| (s * 3.0).exp()).collect();
        let after = auc_rank(&transformed, &labels, TieMode::Half).unwrap();
        assert_eq!(before, after);
    }
}
