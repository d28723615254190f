//! Per-location metadata and the geological-assessment remap.

use super::scalars::{AssessmentLevel, LocationId};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type MetadataMap = BTreeMap<LocationId, LocationMetadata>;

/// Static description of one main working site, shipped in a separate file
/// from the observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationMetadata {
    pub main_working_id: LocationId,
    pub main_working_name: String,
    pub region_name: String,
    pub bed_name: String,
    pub main_working_type: String,
    /// Height of the main working site in metres; strictly positive.
    pub main_working_height: f64,
    /// Geological assessment made before exploration began. After
    /// [`remap_geological_assessment`] only `a` and `b` occur.
    pub geological_assessment: AssessmentLevel,
}

impl LocationMetadata {
    pub fn validate(&self) -> Result<()> {
        if !(self.main_working_height > 0.0) {
            return Err(Error::Schema(format!(
                "location {}: main_working_height must be positive, got {}",
                self.main_working_id, self.main_working_height
            )));
        }
        Ok(())
    }
}

/// Collapse rare high-risk geological categories onto `b`.
///
/// The source data contains a single `c` assessment and no `d`; both are
/// mapped to `b` so the effective scale is binary (`a` vs `b`).
pub fn remap_geological_assessment(meta: &LocationMetadata) -> LocationMetadata {
    let remapped = match meta.geological_assessment {
        AssessmentLevel::A => AssessmentLevel::A,
        AssessmentLevel::B | AssessmentLevel::C | AssessmentLevel::D => AssessmentLevel::B,
    };
    LocationMetadata {
        geological_assessment: remapped,
        ..meta.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(level: AssessmentLevel) -> LocationMetadata {
        LocationMetadata {
            main_working_id: LocationId(725),
            main_working_name: "W-1".into(),
            region_name: "R-1".into(),
            bed_name: "B-1".into(),
            main_working_type: "longwall".into(),
            main_working_height: 2.8,
            geological_assessment: level,
        }
    }

    #[test]
    fn c_maps_to_b() {
        let out = remap_geological_assessment(&meta(AssessmentLevel::C));
        assert_eq!(out.geological_assessment, AssessmentLevel::B);
    }

    #[test]
    fn a_is_identity() {
        let out = remap_geological_assessment(&meta(AssessmentLevel::A));
        assert_eq!(out.geological_assessment, AssessmentLevel::A);
    }

    #[test]
    fn d_maps_to_b() {
        let out = remap_geological_assessment(&meta(AssessmentLevel::D));
        assert_eq!(out.geological_assessment, AssessmentLevel::B);
    }

    #[test]
    fn nonpositive_height_rejected() {
        let mut m = meta(AssessmentLevel::A);
        m.main_working_height = -1.5;
        assert!(m.validate().is_err());
        m.main_working_height = 0.0;
        assert!(m.validate().is_err());
    }
}
