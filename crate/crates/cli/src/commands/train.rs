use super::manifest_path;
use anyhow::{bail, Context, Result};
use minewarn_core::features::{read_matrix_csv, MatrixManifest};
use minewarn_core::io::read_labels;
use minewarn_core::learners::{fit, save_model, ClassifierSpec};
use std::fs;
use std::path::PathBuf;

pub fn run(
    features: PathBuf,
    labels: PathBuf,
    model: PathBuf,
    seed: Option<u64>,
    out: PathBuf,
) -> Result<()> {
    let manifest_file = manifest_path(&features);
    let manifest_text = fs::read_to_string(&manifest_file)
        .with_context(|| format!("reading {}", manifest_file.display()))?;
    let manifest = MatrixManifest::from_toml(&manifest_text)?;
    let (ids, matrix) = read_matrix_csv(fs::File::open(&features)?, &manifest)?;

    let (label_ids, label_values) = read_labels(fs::File::open(&labels)?)?;
    if label_ids != ids {
        bail!(
            "label ids in {} do not match feature rows in {}",
            labels.display(),
            features.display()
        );
    }

    let spec_text =
        fs::read_to_string(&model).with_context(|| format!("reading {}", model.display()))?;
    let mut spec = ClassifierSpec::from_toml(&spec_text)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }

    let trained = fit(&spec, &matrix, &label_values)?;
    save_model(fs::File::create(&out)?, &trained)?;

    eprintln!(
        "trained {} on {} x {} features; model saved to {}",
        spec.algorithm.name(),
        matrix.n_rows(),
        matrix.n_cols(),
        out.display()
    );
    Ok(())
}
