use super::{labels_path, load_dataset, load_metadata, manifest_path};
use anyhow::{Context, Result};
use minewarn_core::data::DatasetMode;
use minewarn_core::features::{
    extract, write_matrix_csv, ExtractorConfig, FeatureSet, MatrixManifest,
};
use minewarn_core::io::write_labels;
use std::fs;
use std::path::PathBuf;

pub fn run(
    data: PathBuf,
    metadata: PathBuf,
    extractor: String,
    config: Option<PathBuf>,
    seed: Option<u64>,
    out: PathBuf,
) -> Result<()> {
    let feature_set = FeatureSet::from_name(&extractor)?;
    let mut config = match config {
        Some(path) => {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<ExtractorConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => ExtractorConfig::default(),
    };
    config.feature_set = feature_set;
    if let Some(seed) = seed {
        config.noise_seed = seed;
    }

    let dataset = load_dataset(&data, DatasetMode::Independent)?;
    let metadata = load_metadata(&metadata)?;

    let matrix = extract(&dataset, &metadata, &config)?;
    let ids: Vec<_> = dataset.records().iter().map(|r| r.id).collect();

    write_matrix_csv(fs::File::create(&out)?, &ids, &matrix)?;
    let manifest = MatrixManifest::from_matrix(&matrix);
    fs::write(manifest_path(&out), manifest.to_toml()?)?;
    if dataset.is_labeled() {
        write_labels(fs::File::create(labels_path(&out))?, &ids, &dataset.labels()?)?;
    }

    eprintln!(
        "extracted {} x {} {} features to {}",
        matrix.n_rows(),
        matrix.n_cols(),
        feature_set.name(),
        out.display()
    );
    Ok(())
}
