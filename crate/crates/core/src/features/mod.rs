//! The four feature extractors and their shared machinery.
//!
//! Every extractor is a per-instance pure function of (record, metadata,
//! config): no statistic crosses rows, and labels are never read, so there
//! is no target leakage by construction. The only fit-state in the module
//! is FS3's pruning: the set of surviving columns is chosen on training
//! data and replayed on test data via [`FittedExtractor`].

mod encode;
mod fs1;
mod fs2;
mod fs3;
mod fs4;
mod interactions;
mod noise;
mod persist;
mod prune;
pub mod stats;

pub use encode::Encoding;
pub use interactions::{all_pairs, make_interactions};
pub use noise::add_height_noise;
pub use persist::{read_matrix_csv, write_matrix_csv, MatrixManifest};
pub use prune::{apply_prune, prune_plan, PrunePlan};
pub use stats::{mean_energy, ols, pearson, quantile, window_stat, Stat, WindowSpec};

use crate::data::{Dataset, FeatureMatrix, MetadataMap, Provenance};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which of the four feature sets to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSet {
    Fs1,
    Fs2,
    Fs3,
    Fs4,
}

impl FeatureSet {
    pub fn name(self) -> &'static str {
        match self {
            FeatureSet::Fs1 => "fs1",
            FeatureSet::Fs2 => "fs2",
            FeatureSet::Fs3 => "fs3",
            FeatureSet::Fs4 => "fs4",
        }
    }

    pub fn from_name(name: &str) -> Result<FeatureSet> {
        match name {
            "fs1" => Ok(FeatureSet::Fs1),
            "fs2" => Ok(FeatureSet::Fs2),
            "fs3" => Ok(FeatureSet::Fs3),
            "fs4" => Ok(FeatureSet::Fs4),
            other => Err(Error::Config(format!("unknown extractor {other:?}"))),
        }
    }
}

/// Extractor configuration. The defaults reproduce the documented grids;
/// the arity of each extractor is a deterministic function of this struct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractorConfig {
    pub feature_set: FeatureSet,
    /// Categorical encoding; only FS3 and FS4 honor it (FS1 fixes ordinal,
    /// FS2 fixes one-hot).
    pub encoding: Encoding,
    /// Gaussian noise added to `main_working_height` (FS1) so the height
    /// cannot be used as a location fingerprint.
    pub height_noise_sigma: f64,
    pub noise_seed: u64,
    /// Absolute Pearson correlation above which the later of two columns is
    /// dropped (FS3).
    pub prune_threshold: f64,
    /// Interaction pairs appended after extraction, by column name.
    pub interactions: Vec<(String, String)>,
    /// Importance analysis shows the hours nearest the forecast period
    /// dominate; geophone short-window statistics use this many last hours.
    pub recent_window: usize,
    /// FS1 computes short-window means over the last 2..=mean_gamma_max
    /// hours.
    pub mean_gamma_max: usize,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        ExtractorConfig {
            feature_set: FeatureSet::Fs1,
            encoding: Encoding::Ordinal,
            height_noise_sigma: 0.2,
            noise_seed: 0,
            prune_threshold: 0.99,
            interactions: Vec::new(),
            recent_window: 5,
            mean_gamma_max: 6,
        }
    }
}

impl ExtractorConfig {
    pub fn for_set(feature_set: FeatureSet) -> ExtractorConfig {
        ExtractorConfig {
            feature_set,
            ..ExtractorConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.height_noise_sigma < 0.0 {
            return Err(Error::Config("height noise sigma must be >= 0".into()));
        }
        if !(self.prune_threshold > 0.0 && self.prune_threshold <= 1.0) {
            return Err(Error::Config("prune threshold must be in (0, 1]".into()));
        }
        if self.recent_window < 2 || self.recent_window > 24 {
            return Err(Error::Config("recent window must be in 2..=24".into()));
        }
        if self.mean_gamma_max < 2 || self.mean_gamma_max > 24 {
            return Err(Error::Config("mean gamma max must be in 2..=24".into()));
        }
        Ok(())
    }

    /// Stable hash of the configuration; stamped into matrix provenance and
    /// manifests so train/predict runs can verify compatibility.
    pub fn hash(&self) -> String {
        let text = toml::to_string(self).expect("config serializes");
        format!("{:016x}", fnv1a(text.as_bytes()))
    }

    pub(crate) fn provenance(&self) -> Provenance {
        Provenance::new(self.feature_set.name(), self.hash())
    }
}

/// FNV-1a, enough for a content fingerprint.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Run the configured extractor over a dataset. For FS3 this includes
/// pruning against the same dataset; use [`fit_extract`] +
/// [`FittedExtractor::transform`] when train and test must share a column
/// set.
pub fn extract(
    dataset: &Dataset,
    metadata: &MetadataMap,
    config: &ExtractorConfig,
) -> Result<FeatureMatrix> {
    let (matrix, _) = fit_extract(dataset, metadata, config)?;
    Ok(matrix)
}

/// Extractor state fitted on training data: the configuration plus, for
/// FS3, the surviving column set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedExtractor {
    pub config: ExtractorConfig,
    /// Columns kept by pruning; `None` for extractors without fit-state.
    pub keep_columns: Option<Vec<String>>,
}

impl FittedExtractor {
    /// Re-run the extractor on new data and apply the fitted column set.
    pub fn transform(&self, dataset: &Dataset, metadata: &MetadataMap) -> Result<FeatureMatrix> {
        let raw = extract_raw(dataset, metadata, &self.config)?;
        match &self.keep_columns {
            Some(keep) => raw.select_by_names(keep),
            None => Ok(raw),
        }
    }
}

/// Extract on training data, fitting any data-dependent state (FS3's
/// pruning plan).
pub fn fit_extract(
    dataset: &Dataset,
    metadata: &MetadataMap,
    config: &ExtractorConfig,
) -> Result<(FeatureMatrix, FittedExtractor)> {
    config.validate()?;
    let raw = extract_raw(dataset, metadata, config)?;
    if config.feature_set == FeatureSet::Fs3 {
        let plan = prune_plan(&raw, config.prune_threshold);
        let pruned = apply_prune(&raw, &plan)?;
        let fitted = FittedExtractor {
            config: config.clone(),
            keep_columns: Some(plan.keep),
        };
        Ok((pruned, fitted))
    } else {
        let fitted = FittedExtractor {
            config: config.clone(),
            keep_columns: None,
        };
        Ok((raw, fitted))
    }
}

/// Base extraction plus configured interactions, before any pruning.
fn extract_raw(
    dataset: &Dataset,
    metadata: &MetadataMap,
    config: &ExtractorConfig,
) -> Result<FeatureMatrix> {
    let base = match config.feature_set {
        FeatureSet::Fs1 => fs1::extract(dataset, metadata, config)?,
        FeatureSet::Fs2 => fs2::extract(dataset, config)?,
        FeatureSet::Fs3 => fs3::extract(dataset, config)?,
        FeatureSet::Fs4 => fs4::extract(dataset, metadata, config)?,
    };
    if config.interactions.is_empty() {
        Ok(base)
    } else {
        make_interactions(&base, &config.interactions)
    }
}

/// Documented output arity of the extractor for a config, before FS3
/// pruning and excluding interactions.
pub fn base_arity(config: &ExtractorConfig) -> usize {
    match config.feature_set {
        FeatureSet::Fs1 => fs1::arity(config),
        FeatureSet::Fs2 => fs2::arity(),
        FeatureSet::Fs3 => fs3::arity(config),
        FeatureSet::Fs4 => fs4::arity(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_hash_tracks_content() {
        let a = ExtractorConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.recent_window = 6;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = ExtractorConfig::default();
        c.height_noise_sigma = -0.1;
        assert!(c.validate().is_err());
        let mut c = ExtractorConfig::default();
        c.prune_threshold = 0.0;
        assert!(c.validate().is_err());
    }
}
