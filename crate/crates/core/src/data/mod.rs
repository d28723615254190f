//! Domain types for the competition data schema and their validation.

mod dataset;
mod matrix;
mod metadata;
mod record;
mod scalars;
mod scores;
mod series;

pub use dataset::{Dataset, DatasetMode};
pub use matrix::{FeatureMatrix, Provenance};
pub use metadata::{remap_geological_assessment, LocationMetadata, MetadataMap};
pub use record::{blank_record, validate_instance, InstanceRecord, Violation, VALUES_PER_INSTANCE};
pub use scalars::{
    AssessmentLevel, InstanceId, LocationId, ScalarFeatures, ASSESSMENT_FIELDS, GENERAL_FIELDS,
};
pub use scores::ScoreVector;
pub use series::{HourlySeriesSet, SeriesId, HOURS_PER_WINDOW};
