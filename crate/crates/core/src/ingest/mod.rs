//! Dataset ingestion: competition-format CSV parsing and the synthetic
//! generator.

pub mod csv;
pub mod synth;

pub use csv::{
    parse_dataset_csv, parse_metadata_csv, write_dataset_csv, write_metadata_csv, ColumnManifest,
};
pub use synth::{
    read_events_csv, synth_generate, write_events_csv, BumpEvent, GeophoneParams,
    LocationProfile, SynthConfig, SynthManifest, SynthOutput,
};

use crate::data::{Dataset, DatasetMode};
use crate::error::Result;
use std::io::Read;

/// Parse a labeled dataset in the standard contiguous layout.
pub fn parse_labeled_csv<R: Read>(reader: R) -> Result<Dataset> {
    parse_dataset_csv(
        reader,
        &ColumnManifest::standard(true),
        DatasetMode::Contiguous,
    )
}
