use super::manifest_path;
use anyhow::{Context, Result};
use minewarn_core::features::{read_matrix_csv, MatrixManifest};
use minewarn_core::io::write_scores;
use minewarn_core::learners::{load_model, predict_score};
use std::fs;
use std::path::PathBuf;

pub fn run(features: PathBuf, model_file: PathBuf, out: PathBuf) -> Result<()> {
    let manifest_file = manifest_path(&features);
    let manifest_text = fs::read_to_string(&manifest_file)
        .with_context(|| format!("reading {}", manifest_file.display()))?;
    let manifest = MatrixManifest::from_toml(&manifest_text)?;
    let (ids, matrix) = read_matrix_csv(fs::File::open(&features)?, &manifest)?;

    let model = load_model(fs::File::open(&model_file)?)?;
    let scores = predict_score(&model, &matrix)?;
    write_scores(fs::File::create(&out)?, &ids, &scores)?;

    eprintln!("scored {} instances to {}", scores.len(), out.display());
    Ok(())
}
