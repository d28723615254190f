//! Per-instance scalar features: expert assessments, general energies and
//! the location key.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Opaque key of a main working site (longwall).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct LocationId(pub u32);

impl fmt::Display for LocationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Identifier of a single observation.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct InstanceId(pub u64);

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Ordered expert risk category, `a` (lowest) through `d` (highest).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum AssessmentLevel {
    A,
    B,
    C,
    D,
}

impl AssessmentLevel {
    pub const ALL: [AssessmentLevel; 4] = [
        AssessmentLevel::A,
        AssessmentLevel::B,
        AssessmentLevel::C,
        AssessmentLevel::D,
    ];

    pub fn letter(self) -> &'static str {
        match self {
            AssessmentLevel::A => "a",
            AssessmentLevel::B => "b",
            AssessmentLevel::C => "c",
            AssessmentLevel::D => "d",
        }
    }

    pub fn from_letter(s: &str) -> Result<AssessmentLevel> {
        match s {
            "a" => Ok(AssessmentLevel::A),
            "b" => Ok(AssessmentLevel::B),
            "c" => Ok(AssessmentLevel::C),
            "d" => Ok(AssessmentLevel::D),
            other => Err(Error::Schema(format!(
                "unknown assessment category {other:?} (expected a, b, c or d)"
            ))),
        }
    }

    /// Ordinal encoding `a -> 1 .. d -> 4`.
    pub fn ordinal(self) -> f64 {
        match self {
            AssessmentLevel::A => 1.0,
            AssessmentLevel::B => 2.0,
            AssessmentLevel::C => 3.0,
            AssessmentLevel::D => 4.0,
        }
    }
}

impl fmt::Display for AssessmentLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// The four per-instance expert assessments, in schema order.
pub const ASSESSMENT_FIELDS: [&str; 4] = [
    "latest_seismic_assessment",
    "latest_seismoacoustic_assessment",
    "latest_comprehensive_assessment",
    "latest_hazards_assessment",
];

/// The eight general numeric features, in schema order.
pub const GENERAL_FIELDS: [&str; 8] = [
    "total_bumps_energy",
    "total_tremors_energy",
    "total_destressing_blasts_energy",
    "total_seismic_energy",
    "latest_progress_estimation_l",
    "latest_progress_estimation_r",
    "latest_maximum_yield",
    "latest_maximum_meter",
];

/// The 13 scalar fields of one instance: 4 assessments, 8 general numerics
/// and the location key (`main_working_id`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarFeatures {
    /// Indexed like [`ASSESSMENT_FIELDS`].
    pub assessments: [AssessmentLevel; 4],
    /// Indexed like [`GENERAL_FIELDS`].
    pub general: [f64; 8],
    pub main_working_id: LocationId,
}

impl ScalarFeatures {
    pub fn zeroed(location: LocationId) -> Self {
        ScalarFeatures {
            assessments: [AssessmentLevel::A; 4],
            general: [0.0; 8],
            main_working_id: location,
        }
    }

    pub fn total_seismic_energy(&self) -> f64 {
        self.general[3]
    }

    /// Number of scalar values (13 by construction).
    pub const COUNT: usize = 13;
}
