//! Serializable metrics report for the `report` command.

use super::{auc_rank, best_class_gain_threshold, confusion_at, derived_metrics, TieMode};
use super::confusion::{ConfusionMatrix, DerivedMetrics};
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// Everything the reporting step computes from one score/label pairing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n: usize,
    pub positives: usize,
    pub tie_mode: TieMode,
    pub auc: f64,
    /// Threshold used for the confusion matrix; either supplied by the
    /// caller or the class-gain maximizer.
    pub threshold: f64,
    pub threshold_was_searched: bool,
    pub best_class_gain: f64,
    pub confusion: ConfusionMatrix,
    pub derived: DerivedMetrics,
}

impl MetricsReport {
    /// Compute the full report. When `threshold` is `None` the class-gain
    /// maximizing threshold is searched and used.
    pub fn compute(
        scores: &[f64],
        labels: &[bool],
        threshold: Option<f64>,
        tie_mode: TieMode,
    ) -> Result<MetricsReport> {
        let auc = auc_rank(scores, labels, tie_mode)?;
        let (best_t, best_gain) = best_class_gain_threshold(scores, labels)?;
        let (threshold, searched) = match threshold {
            Some(t) => (t, false),
            None => (best_t, true),
        };
        let confusion = confusion_at(scores, labels, threshold)?;
        let derived = derived_metrics(&confusion);
        Ok(MetricsReport {
            n: scores.len(),
            positives: labels.iter().filter(|&&y| y).count(),
            tie_mode,
            auc,
            threshold,
            threshold_was_searched: searched,
            best_class_gain: best_gain,
            confusion,
            derived,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| crate::error::Error::Metric(format!("report serialization: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::confusion::scores_for_matrix;

    #[test]
    fn report_round_trips_through_toml() {
        let (scores, labels) = scores_for_matrix(&ConfusionMatrix::new(12, 3, 2, 40), 0.5);
        let report = MetricsReport::compute(&scores, &labels, None, TieMode::Half).unwrap();
        let text = report.to_toml().unwrap();
        let back: MetricsReport = toml::from_str(&text).unwrap();
        assert_eq!(back.confusion, report.confusion);
        assert_eq!(back.auc, report.auc);
    }
}
