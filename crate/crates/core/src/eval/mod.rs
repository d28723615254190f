//! Leakage-aware evaluation: split protocols and the evaluation runner.
//!
//! Four protocols with different bias/variance trade-offs:
//!
//! - [`kfold_split`]: plain random k-fold. Cheap, but with hourly-shifted
//!   windows, neighbors of a test instance sit in the training folds, so
//!   scores come out optimistic.
//! - [`lolo_split`]: leave-one-location-out; measures generalization to
//!   mines never seen in training.
//! - [`trts1_split`]: repeated 70/30 chronological splits with held-out
//!   locations and a 32-hour gap at every split point (24 h window plus
//!   8 h horizon), so no train window overlaps a test window's future.
//! - [`trts2_split`]: repeated splits guided by total seismic energy, with
//!   suspicious locations excluded and per-location sampling sides.

mod protocols;
mod runner;

pub use protocols::{kfold_split, lolo_split, trts1_split, trts2_split};
pub use runner::{evaluate, EvalReport, FoldOutcome};

use crate::data::{Dataset, LocationId};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// One train/test fold, as indices into the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// An ordered list of folds plus the echo of how they were made.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub protocol: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, String>,
    pub folds: Vec<Fold>,
}

impl SplitPlan {
    /// Check the structural invariants against the dataset the plan was
    /// made for: disjoint train/test per fold, labeled test instances, and
    /// in-range indices.
    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        for (k, fold) in self.folds.iter().enumerate() {
            let train: BTreeSet<usize> = fold.train.iter().copied().collect();
            for &i in &fold.test {
                if train.contains(&i) {
                    return Err(Error::Eval(format!(
                        "fold {k}: index {i} appears in both train and test"
                    )));
                }
            }
            for &i in fold.train.iter().chain(&fold.test) {
                if i >= dataset.len() {
                    return Err(Error::Eval(format!("fold {k}: index {i} out of range")));
                }
            }
            for &i in &fold.test {
                if dataset.records()[i].label.is_none() {
                    return Err(Error::Eval(format!(
                        "fold {k}: test instance {i} is unlabeled"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Audit-friendly structured text (fold -> instance-id lists).
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Eval(format!("plan: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<SplitPlan> {
        toml::from_str(text).map_err(|e| Error::Eval(format!("plan: {e}")))
    }
}

/// Gap placement for chronological splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GapMode {
    /// Drop the gap instances immediately preceding the test block from
    /// the training side.
    #[default]
    TrainSide,
    /// Split the gap across both sides of the boundary.
    BothSides,
}

/// Parameters shared by the split protocols; defaults follow the original
/// study's roster (train-only giants 264/373/437, suspicious mines
/// 777/793, 32-hour gap, 70/30 and 80/20 fractions, 25 and 20 repeats).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProtocolConfig {
    pub k: usize,
    /// Locations that never appear in a test fold but always train.
    pub train_only_locations: BTreeSet<u32>,
    /// Locations dropped entirely by TrTs2.
    pub excluded_locations: BTreeSet<u32>,
    /// Minimum chronological distance between same-location train and test
    /// instances, in hours.
    pub gap_hours: u64,
    pub gap_mode: GapMode,
    /// Whole locations moved to validation per TrTs repeat.
    pub holdout_series: usize,
    /// Chronological train share per location (TrTs1).
    pub train_fraction: f64,
    /// Per-location share sampled into test (TrTs2).
    pub test_fraction: f64,
    pub repeats_trts1: usize,
    pub repeats_trts2: usize,
    /// TrTs2 locations whose test share comes from the start of the stream
    /// (all others sample from the end).
    pub start_side_locations: BTreeSet<u32>,
    /// TrTs2 locations restricted to instances with positive total seismic
    /// energy.
    pub tse_nonzero_locations: BTreeSet<u32>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            k: 10,
            train_only_locations: [264, 373, 437].into(),
            excluded_locations: [777, 793].into(),
            gap_hours: 32,
            gap_mode: GapMode::TrainSide,
            holdout_series: 5,
            train_fraction: 0.70,
            test_fraction: 0.20,
            repeats_trts1: 25,
            repeats_trts2: 20,
            start_side_locations: [146, 599].into(),
            tse_nonzero_locations: [373, 437].into(),
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config("train fraction must be in (0, 1)".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config("test fraction must be in (0, 1)".into()));
        }
        Ok(())
    }

    pub fn is_train_only(&self, loc: LocationId) -> bool {
        self.train_only_locations.contains(&loc.0)
    }

    pub(crate) fn echo(&self, extra: &[(&str, String)]) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("gap_hours".into(), self.gap_hours.to_string());
        m.insert(
            "train_only".into(),
            format!("{:?}", self.train_only_locations),
        );
        for (k, v) in extra {
            m.insert(k.to_string(), v.clone());
        }
        m
    }
}

/// Shared helper: smallest same-location chronological distance between
/// train and test in a fold; `None` when no location overlaps.
pub fn min_same_location_gap(dataset: &Dataset, fold: &Fold) -> Option<u64> {
    let mut best: Option<u64> = None;
    let mut train_by_loc: BTreeMap<LocationId, Vec<u64>> = BTreeMap::new();
    for &i in &fold.train {
        let r = &dataset.records()[i];
        if let Some(c) = r.chrono {
            train_by_loc.entry(r.location).or_default().push(c);
        }
    }
    for v in train_by_loc.values_mut() {
        v.sort_unstable();
    }
    for &i in &fold.test {
        let r = &dataset.records()[i];
        let (Some(c), Some(train)) = (r.chrono, train_by_loc.get(&r.location)) else {
            continue;
        };
        // Nearest train chrono via binary search.
        let pos = train.partition_point(|&t| t < c);
        let mut near = u64::MAX;
        if pos < train.len() {
            near = near.min(train[pos] - c);
        }
        if pos > 0 {
            near = near.min(c - train[pos - 1]);
        }
        if near != u64::MAX {
            best = Some(best.map_or(near, |b| b.min(near)));
        }
    }
    best
}
