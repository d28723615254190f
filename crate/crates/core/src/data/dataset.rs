//! Ordered collections of records with per-location grouping.

use super::record::InstanceRecord;
use super::scalars::LocationId;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How the windows of a dataset relate to each other in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetMode {
    /// Training style: per location, windows advance by one hour each, so
    /// consecutive records overlap by 23 hours.
    Contiguous,
    /// Test style: windows sampled independently from the stream.
    Independent,
}

/// An ordered collection of instance records.
///
/// Construction validates the collection-level invariants: labels are
/// all-present or all-absent, chronological indices are strictly increasing
/// within a location, and in contiguous mode consecutive records of one
/// location differ by exactly one step.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<InstanceRecord>,
    mode: DatasetMode,
    by_location: BTreeMap<LocationId, Vec<usize>>,
}

impl Dataset {
    pub fn new(records: Vec<InstanceRecord>, mode: DatasetMode) -> Result<Dataset> {
        let labeled = records.first().map(|r| r.label.is_some()).unwrap_or(false);
        let mut by_location: BTreeMap<LocationId, Vec<usize>> = BTreeMap::new();
        for (i, rec) in records.iter().enumerate() {
            if rec.label.is_some() != labeled {
                return Err(Error::Schema(format!(
                    "record {} breaks the all-or-none label rule",
                    rec.id
                )));
            }
            by_location.entry(rec.location).or_default().push(i);
        }
        for (loc, idxs) in &by_location {
            for pair in idxs.windows(2) {
                let (a, b) = (&records[pair[0]], &records[pair[1]]);
                match (a.chrono, b.chrono) {
                    (Some(ca), Some(cb)) => {
                        if cb <= ca {
                            return Err(Error::Schema(format!(
                                "location {loc}: chronological indices must be strictly increasing ({ca} then {cb})"
                            )));
                        }
                        if mode == DatasetMode::Contiguous && cb - ca != 1 {
                            return Err(Error::Schema(format!(
                                "location {loc}: contiguous dataset has a gap between chrono {ca} and {cb}"
                            )));
                        }
                    }
                    _ if mode == DatasetMode::Contiguous => {
                        return Err(Error::Schema(format!(
                            "location {loc}: contiguous datasets require chronological indices"
                        )));
                    }
                    _ => {}
                }
            }
        }
        Ok(Dataset {
            records,
            mode,
            by_location,
        })
    }

    pub fn records(&self) -> &[InstanceRecord] {
        &self.records
    }

    pub fn mode(&self) -> DatasetMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        self.records.first().map(|r| r.label.is_some()).unwrap_or(false)
    }

    /// Labels of all records; errors when the dataset is unlabeled.
    pub fn labels(&self) -> Result<Vec<bool>> {
        self.records
            .iter()
            .map(|r| {
                r.label
                    .ok_or_else(|| Error::Schema("dataset is unlabeled".into()))
            })
            .collect()
    }

    /// Per-location grouping; a partition of all record indices.
    pub fn by_location(&self) -> &BTreeMap<LocationId, Vec<usize>> {
        &self.by_location
    }

    pub fn locations(&self) -> Vec<LocationId> {
        self.by_location.keys().copied().collect()
    }

    /// A new dataset holding clones of the selected records, in the given
    /// order. The subset keeps labels and chronological indices but is
    /// always `Independent` (a subset of a contiguous stream is not itself
    /// contiguous).
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let records = indices.iter().map(|&i| self.records[i].clone()).collect();
        Dataset::new(records, DatasetMode::Independent)
    }

    /// Run per-record validation over the whole dataset.
    pub fn validate_records(&self) -> Vec<(usize, super::record::Violation)> {
        let mut out = Vec::new();
        for (i, rec) in self.records.iter().enumerate() {
            for v in super::record::validate_instance(rec) {
                out.push((i, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::blank_record;

    fn rec(id: u64, loc: u32, chrono: u64, label: bool) -> InstanceRecord {
        let mut r = blank_record(id, loc);
        r.chrono = Some(chrono);
        r.label = Some(label);
        r
    }

    #[test]
    fn contiguous_requires_unit_steps() {
        let ok = Dataset::new(vec![rec(1, 7, 24, false), rec(2, 7, 25, true)], DatasetMode::Contiguous);
        assert!(ok.is_ok());
        let gap = Dataset::new(vec![rec(1, 7, 24, false), rec(2, 7, 26, true)], DatasetMode::Contiguous);
        assert!(gap.is_err());
    }

    #[test]
    fn mixed_labels_rejected() {
        let mut b = rec(2, 7, 25, true);
        b.label = None;
        let res = Dataset::new(vec![rec(1, 7, 24, false), b], DatasetMode::Contiguous);
        assert!(res.is_err());
    }

    #[test]
    fn grouping_partitions_indices() {
        let ds = Dataset::new(
            vec![rec(1, 7, 1, false), rec(2, 9, 5, true), rec(3, 7, 2, false)],
            DatasetMode::Independent,
        )
        .unwrap();
        let total: usize = ds.by_location().values().map(Vec::len).sum();
        assert_eq!(total, ds.len());
        assert_eq!(ds.by_location()[&LocationId(7)], vec![0, 2]);
    }

    #[test]
    fn decreasing_chrono_rejected_even_independent() {
        let res = Dataset::new(
            vec![rec(1, 7, 5, false), rec(2, 7, 4, false)],
            DatasetMode::Independent,
        );
        assert!(res.is_err());
    }
}
