use super::{load_dataset, load_metadata};
use anyhow::{bail, Context, Result};
use minewarn_core::data::DatasetMode;
use minewarn_core::eval::{kfold_split, lolo_split, trts1_split, trts2_split, ProtocolConfig};
use minewarn_core::features::{ExtractorConfig, FeatureSet};
use minewarn_core::learners::ClassifierSpec;
use std::fs;
use std::path::PathBuf;

#[allow(clippy::too_many_arguments)]
pub fn run(
    data: PathBuf,
    metadata: PathBuf,
    extractor: String,
    config: Option<PathBuf>,
    model: PathBuf,
    protocol: String,
    protocol_config: Option<PathBuf>,
    seed: u64,
    out: PathBuf,
    plan_out: Option<PathBuf>,
) -> Result<()> {
    let feature_set = FeatureSet::from_name(&extractor)?;
    let mut extractor_config = match config {
        Some(path) => {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<ExtractorConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => ExtractorConfig::default(),
    };
    extractor_config.feature_set = feature_set;

    let spec_text =
        fs::read_to_string(&model).with_context(|| format!("reading {}", model.display()))?;
    let spec = ClassifierSpec::from_toml(&spec_text)?;

    let protocol_cfg = match protocol_config {
        Some(path) => {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<ProtocolConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => ProtocolConfig::default(),
    };

    let mode = match protocol.as_str() {
        "trts1" | "trts2" => DatasetMode::Contiguous,
        _ => DatasetMode::Independent,
    };
    let dataset = load_dataset(&data, mode)?;
    let metadata_map = load_metadata(&metadata)?;

    let plan = match protocol.as_str() {
        "kcv" => kfold_split(&dataset, protocol_cfg.k, seed)?,
        "lolo" => lolo_split(&dataset, &protocol_cfg)?,
        "trts1" => trts1_split(&dataset, &protocol_cfg, seed)?,
        "trts2" => trts2_split(&dataset, &protocol_cfg, seed)?,
        other => bail!("unknown protocol {other:?} (expected kcv, lolo, trts1 or trts2)"),
    };
    if let Some(path) = plan_out {
        fs::write(&path, plan.to_toml()?)?;
    }

    let report = minewarn_core::eval::evaluate(
        &dataset,
        &metadata_map,
        &extractor_config,
        &spec,
        &plan,
    )?;
    fs::write(&out, report.to_toml()?)?;

    eprintln!(
        "{}/{}/{}: mean AUC {:.4} (std {:.4}) over {} folds, {} skipped",
        report.protocol,
        report.extractor,
        report.algorithm,
        report.mean_auc,
        report.std_auc,
        report.computed_folds,
        report.skipped_folds
    );
    Ok(())
}
