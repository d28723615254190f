//! Batch pipeline for predicting dangerous seismic events at coal-mine
//! longwalls from 24-hour sensor windows.
//!
//! The crate is organized around the stages of the pipeline:
//!
//! - [`data`] — the record schema (541 values per instance), datasets,
//!   feature matrices and score vectors;
//! - [`ingest`] — CSV parsing for datasets and location metadata, plus a
//!   schema-identical synthetic generator with persisted ground truth;
//! - [`features`] — the four feature extractors (`fs1`..`fs4`) and their
//!   shared windowed statistics, interactions, encodings and pruning;
//! - [`learners`] — gradient-boosted trees, extremely randomized trees,
//!   logistic regression and shrinkage LDA behind one interface;
//! - [`eval`] — leakage-aware split protocols (k-CV, LOLO, TrTs1, TrTs2)
//!   and an evaluation runner;
//! - [`metrics`] — rank AUC, confusion-matrix metrics and class-gain
//!   threshold search;
//! - [`ensemble`] — standardized score blending and weighted rank
//!   averaging.
//!
//! Everything is deterministic given a seed: parallel and serial runs
//! produce identical results because every worker derives its own PRNG
//! substream from `(seed, task id)`.

pub mod data;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod features;
pub mod ingest;
pub mod io;
pub mod learners;
pub mod metrics;
pub mod rng;

pub use data::{
    AssessmentLevel, Dataset, DatasetMode, FeatureMatrix, HourlySeriesSet, InstanceId,
    InstanceRecord, LocationId, LocationMetadata, Provenance, ScalarFeatures, ScoreVector,
    SeriesId, HOURS_PER_WINDOW, VALUES_PER_INSTANCE,
};
pub use error::{Error, Result};
