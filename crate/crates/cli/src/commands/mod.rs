pub mod blend;
pub mod evaluate;
pub mod extract;
pub mod predict;
pub mod report;
pub mod synth;
pub mod train;

use anyhow::{Context, Result};
use minewarn_core::data::{Dataset, DatasetMode, MetadataMap};
use minewarn_core::ingest::{parse_dataset_csv, parse_metadata_csv, ColumnManifest};
use std::fs;
use std::path::Path;

/// Parse a dataset file, detecting the label column from the header.
pub fn load_dataset(path: &Path, mode: DatasetMode) -> Result<Dataset> {
    let text = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let header = text
        .split(|&b| b == b'\n')
        .next()
        .unwrap_or_default()
        .to_vec();
    let labeled = String::from_utf8_lossy(&header)
        .split(',')
        .any(|c| c.trim() == "label");
    let manifest = ColumnManifest::standard(labeled);
    parse_dataset_csv(text.as_slice(), &manifest, mode)
        .with_context(|| format!("parsing {}", path.display()))
}

pub fn load_metadata(path: &Path) -> Result<MetadataMap> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_metadata_csv(file).with_context(|| format!("parsing {}", path.display()))
}

/// Sidecar manifest path for a feature CSV: `features.csv` ->
/// `features.manifest.toml`.
pub fn manifest_path(features: &Path) -> std::path::PathBuf {
    features.with_extension("manifest.toml")
}

/// Labels path written next to a feature CSV.
pub fn labels_path(features: &Path) -> std::path::PathBuf {
    features.with_extension("labels.csv")
}
