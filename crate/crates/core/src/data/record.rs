//! One labeled or unlabeled observation and its invariant checks.

use super::scalars::{InstanceId, LocationId, ScalarFeatures};
use super::series::{HourlySeriesSet, HOURS_PER_WINDOW};
use serde::{Deserialize, Serialize};
use std::fmt;

/// 13 scalars + 22 series x 24 hours.
pub const VALUES_PER_INSTANCE: usize = ScalarFeatures::COUNT + 22 * HOURS_PER_WINDOW;

/// One 24-hour observation window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: InstanceId,
    pub location: LocationId,
    pub scalars: ScalarFeatures,
    pub hourly: HourlySeriesSet,
    /// `true` = the following 8 hours reached the warning level. Present iff
    /// the record belongs to a labeled dataset.
    pub label: Option<bool>,
    /// Position of the window within its location's stream, in hours.
    /// Consecutive windows of a contiguous dataset differ by exactly 1.
    pub chrono: Option<u64>,
}

impl InstanceRecord {
    /// Total number of values carried by this record (541 when well-formed).
    pub fn value_count(&self) -> usize {
        ScalarFeatures::COUNT + self.hourly.value_count()
    }
}

/// A single invariant violation found in a record. Violations are data,
/// not faults: a malformed record produces a non-empty report rather than
/// an error.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Field or series name the violation concerns.
    pub field: String,
    /// Hour index within a series, when applicable.
    pub index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{}]: {}", self.field, i, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Check every schema invariant of a single record; an empty report means
/// the record is valid.
pub fn validate_instance(record: &InstanceRecord) -> Vec<Violation> {
    let mut out = Vec::new();

    for (id, values) in record.hourly.iter() {
        if values.len() != HOURS_PER_WINDOW {
            out.push(Violation {
                field: id.name().to_string(),
                index: None,
                message: format!("expected {} entries, found {}", HOURS_PER_WINDOW, values.len()),
            });
        }
        for (h, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation {
                    field: id.name().to_string(),
                    index: Some(h),
                    message: format!("non-finite value {v}"),
                });
                continue;
            }
            if id.is_count_like() && (v < 0.0 || v.fract() != 0.0) {
                out.push(Violation {
                    field: id.name().to_string(),
                    index: Some(h),
                    message: format!("count series requires a non-negative integer, got {v}"),
                });
            }
            if id.is_nonneg_energy() && v < 0.0 {
                out.push(Violation {
                    field: id.name().to_string(),
                    index: Some(h),
                    message: format!("energy series requires a non-negative value, got {v}"),
                });
            }
        }
    }

    for (name, &v) in super::scalars::GENERAL_FIELDS
        .iter()
        .zip(record.scalars.general.iter())
    {
        if !v.is_finite() {
            out.push(Violation {
                field: name.to_string(),
                index: None,
                message: format!("non-finite value {v}"),
            });
        } else if name.starts_with("total_") && v < 0.0 {
            out.push(Violation {
                field: name.to_string(),
                index: None,
                message: format!("energy must be non-negative, got {v}"),
            });
        }
    }

    if record.value_count() != VALUES_PER_INSTANCE && out.iter().all(|v| v.index.is_some()) {
        // Only reachable when a series has the wrong length, which is
        // already reported above; kept as a belt-and-braces accounting check.
        out.push(Violation {
            field: "record".to_string(),
            index: None,
            message: format!(
                "expected {} values, found {}",
                VALUES_PER_INSTANCE,
                record.value_count()
            ),
        });
    }

    out
}

/// A convenience constructor for a minimal valid record; used across tests
/// and the synthetic generator.
pub fn blank_record(id: u64, location: u32) -> InstanceRecord {
    InstanceRecord {
        id: InstanceId(id),
        location: LocationId(location),
        scalars: ScalarFeatures::zeroed(LocationId(location)),
        hourly: HourlySeriesSet::zeroed(),
        label: None,
        chrono: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SeriesId;

    #[test]
    fn well_formed_record_is_clean() {
        let rec = blank_record(1, 725);
        assert_eq!(rec.value_count(), VALUES_PER_INSTANCE);
        assert!(validate_instance(&rec).is_empty());
    }

    #[test]
    fn short_series_is_reported_by_name() {
        let mut rec = blank_record(1, 725);
        rec.hourly.set(SeriesId::AvgGenergy, vec![0.0; 23]);
        let report = validate_instance(&rec);
        assert!(report
            .iter()
            .any(|v| v.field == "avg_genergy" && v.message.contains("23")));
    }

    #[test]
    fn negative_count_reports_series_and_index() {
        // Mutate a valid record; the invariant list itself is the oracle.
        let mut rec = blank_record(1, 725);
        rec.hourly.set_hour(SeriesId::CountE2, 7, -1.0);
        let report = validate_instance(&rec);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].field, "count_e2");
        assert_eq!(report[0].index, Some(7));
    }

    #[test]
    fn fractional_count_is_a_violation() {
        let mut rec = blank_record(1, 725);
        rec.hourly.set_hour(SeriesId::TotalNumberOfBumps, 0, 1.5);
        assert_eq!(validate_instance(&rec).len(), 1);
    }

    #[test]
    fn negative_energy_sum_is_a_violation() {
        let mut rec = blank_record(1, 725);
        rec.hourly.set_hour(SeriesId::SumE4, 11, -3.0);
        let report = validate_instance(&rec);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].field, "sum_e4");
    }
}
