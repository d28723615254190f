//! Confusion matrices, derived accuracy measures and the class-gain
//! threshold search.

use super::{check_lengths, check_two_classes};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Counts at a fixed decision threshold. Predicted warning iff
/// `score >= threshold` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> ConfusionMatrix {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Precision, recall, specificity, F1 and class-gain for one matrix.
///
/// The metrics are total functions: degenerate precision and F1 (0/0) are
/// defined as 0, while recall with no positives and specificity with no
/// negatives are vacuously 1 (there was nothing to miss). Class-gain is
/// `specificity + recall - 1` and lives in `[-1, 1]`; all the others live
/// in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedMetrics {
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub f1: f64,
    pub class_gain: f64,
}

fn ratio_or(num: u64, den: u64, empty: f64) -> f64 {
    if den == 0 {
        empty
    } else {
        num as f64 / den as f64
    }
}

pub fn derived_metrics(cm: &ConfusionMatrix) -> DerivedMetrics {
    let precision = ratio_or(cm.tp, cm.tp + cm.fp, 0.0);
    let recall = ratio_or(cm.tp, cm.tp + cm.fn_, 1.0);
    let specificity = ratio_or(cm.tn, cm.tn + cm.fp, 1.0);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    DerivedMetrics {
        precision,
        recall,
        specificity,
        f1,
        class_gain: specificity + recall - 1.0,
    }
}

/// Count the four outcomes of thresholding `scores` at `threshold`.
pub fn confusion_at(scores: &[f64], labels: &[bool], threshold: f64) -> Result<ConfusionMatrix> {
    check_lengths(scores, labels)?;
    let mut cm = ConfusionMatrix::new(0, 0, 0, 0);
    for (&s, &y) in scores.iter().zip(labels) {
        let warn = s >= threshold;
        match (warn, y) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, true) => cm.fn_ += 1,
            (false, false) => cm.tn += 1,
        }
    }
    Ok(cm)
}

/// Scan every distinct score as a candidate cut and return the threshold
/// maximizing class-gain, lowest threshold on ties, together with the gain.
pub fn best_class_gain_threshold(scores: &[f64], labels: &[bool]) -> Result<(f64, f64)> {
    check_lengths(scores, labels)?;
    let (neg, pos) = check_two_classes(labels)?;

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    // Walking thresholds upward through the distinct scores: at threshold t
    // (inclusive rule), everything below t is predicted negative.
    let mut best_threshold = scores[order[0]];
    let mut best_gain = f64::NEG_INFINITY;
    let mut neg_below = 0u64; // negatives with score < t
    let mut pos_below = 0u64; // positives with score < t
    let mut i = 0;
    while i < order.len() {
        let t = scores[order[i]];
        let recall = (pos as u64 - pos_below) as f64 / pos as f64;
        let specificity = neg_below as f64 / neg as f64;
        let gain = specificity + recall - 1.0;
        if gain > best_gain {
            best_gain = gain;
            best_threshold = t;
        }
        let mut j = i;
        while j < order.len() && scores[order[j]] == t {
            if labels[order[j]] {
                pos_below += 1;
            } else {
                neg_below += 1;
            }
            j += 1;
        }
        i = j;
    }
    Ok((best_threshold, best_gain))
}

/// Precision-recall pairs, one per distinct threshold, thresholds
/// descending so recall is non-decreasing along the list.
pub fn pr_curve(scores: &[f64], labels: &[bool]) -> Result<Vec<(f64, f64)>> {
    check_lengths(scores, labels)?;
    let (_, pos) = check_two_classes(labels)?;

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let mut out = Vec::new();
    let mut tp = 0u64;
    let mut predicted_pos = 0u64;
    let mut i = 0;
    while i < order.len() {
        let t = scores[order[i]];
        while i < order.len() && scores[order[i]] == t {
            predicted_pos += 1;
            if labels[order[i]] {
                tp += 1;
            }
            i += 1;
        }
        let recall = tp as f64 / pos as f64;
        let precision = tp as f64 / predicted_pos as f64;
        out.push((recall, precision));
    }
    Ok(out)
}

/// Build a score/label set realizing a given confusion matrix at a given
/// threshold; handy for fixtures.
pub fn scores_for_matrix(cm: &ConfusionMatrix, threshold: f64) -> (Vec<f64>, Vec<bool>) {
    let hi = threshold + 0.1;
    let lo = threshold - 0.1;
    let mut scores = Vec::with_capacity(cm.total() as usize);
    let mut labels = Vec::with_capacity(cm.total() as usize);
    for _ in 0..cm.tp {
        scores.push(hi);
        labels.push(true);
    }
    for _ in 0..cm.fp {
        scores.push(hi);
        labels.push(false);
    }
    for _ in 0..cm.fn_ {
        scores.push(lo);
        labels.push(true);
    }
    for _ in 0..cm.tn {
        scores.push(lo);
        labels.push(false);
    }
    (scores, labels)
}

/// Exhaustive-threshold class-gain search; `O(n^2)` reference used by tests.
#[doc(hidden)]
pub fn brute_force_best_gain(scores: &[f64], labels: &[bool]) -> Result<(f64, f64)> {
    check_two_classes(labels)?;
    let mut candidates: Vec<f64> = scores.to_vec();
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    let mut best = (candidates[0], f64::NEG_INFINITY);
    for &t in &candidates {
        let cm = confusion_at(scores, labels, t)?;
        let gain = derived_metrics(&cm).class_gain;
        if gain > best.1 {
            best = (t, gain);
        }
    }
    Ok(best)
}

impl std::fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TP={} FP={} FN={} TN={}",
            self.tp, self.fp, self.fn_, self.tn
        )
    }
}

#[allow(dead_code)]
fn _suppress(_: &Error) {}
