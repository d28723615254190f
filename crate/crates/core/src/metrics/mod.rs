//! Ranking and confusion-matrix metrics.
//!
//! The competition metric is the pairwise AUC with *strict* inequality:
//! a (negative, positive) pair with tied scores contributes nothing. The
//! rank-based implementation reproduces it exactly in `O(n log n)` and also
//! offers the conventional half-credit tie handling for reporting.

mod auc;
mod confusion;
mod report;

pub use auc::{auc_pairwise, auc_rank, TieMode};
pub use confusion::{
    best_class_gain_threshold, confusion_at, derived_metrics, pr_curve, scores_for_matrix,
    ConfusionMatrix, DerivedMetrics,
};
#[doc(hidden)]
pub use confusion::brute_force_best_gain;
pub use report::MetricsReport;

use crate::error::{Error, Result};

/// Both classes must be present for any rank metric to be defined.
pub(crate) fn check_two_classes(labels: &[bool]) -> Result<(usize, usize)> {
    let pos = labels.iter().filter(|&&y| y).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Metric(format!(
            "need both classes, got {pos} positives and {neg} negatives"
        )));
    }
    Ok((neg, pos))
}

pub(crate) fn check_lengths(scores: &[f64], labels: &[bool]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::Metric(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    Ok(())
}
