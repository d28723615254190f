//! Randomized feature-subset search.
//!
//! Each trial samples 20-40 individual features plus up to 10 interaction
//! columns, trains the given classifier across the split plan's folds and
//! records the mean validation AUC. The ranked output feeds the blends
//! built from the best subsets.

use super::ClassifierSpec;
use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use crate::eval::SplitPlan;
use crate::metrics::{auc_rank, TieMode};
use crate::rng;
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const SEARCH_STREAM: u64 = 0x7365_6172_6368;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SubsetSearchConfig {
    pub min_features: usize,
    pub max_features: usize,
    pub max_interactions: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SubsetSearchConfig {
    fn default() -> Self {
        SubsetSearchConfig {
            min_features: 20,
            max_features: 40,
            max_interactions: 10,
            trials: 100,
            seed: 0,
        }
    }
}

/// One trial's subset and its cross-fold score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetResult {
    pub trial: usize,
    pub base_columns: Vec<String>,
    pub interaction_columns: Vec<String>,
    pub mean_auc: f64,
}

/// Run the search; results come back sorted by mean AUC, best first, with
/// trial order breaking ties. Deterministic given the config seed.
pub fn random_subset_search(
    base: &FeatureMatrix,
    interactions: &FeatureMatrix,
    labels: &[bool],
    spec: &ClassifierSpec,
    plan: &SplitPlan,
    config: &SubsetSearchConfig,
) -> Result<Vec<SubsetResult>> {
    if config.trials == 0 {
        return Err(Error::Config("subset search needs trials >= 1".into()));
    }
    if config.min_features == 0 || config.min_features > config.max_features {
        return Err(Error::Config(
            "subset search needs 1 <= min_features <= max_features".into(),
        ));
    }
    if config.max_features > base.n_cols() {
        return Err(Error::Config(format!(
            "subset bound {} exceeds the {} available features",
            config.max_features,
            base.n_cols()
        )));
    }
    if config.max_interactions > interactions.n_cols() {
        return Err(Error::Config(format!(
            "interaction bound {} exceeds the {} available interactions",
            config.max_interactions,
            interactions.n_cols()
        )));
    }
    if base.n_rows() != interactions.n_rows() || base.n_rows() != labels.len() {
        return Err(Error::Config(
            "base features, interactions and labels must align".into(),
        ));
    }
    spec.validate()?;

    let mut results: Vec<SubsetResult> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(base, interactions, labels, spec, plan, config, trial))
        .collect::<Result<Vec<_>>>()?;

    results.sort_by(|a, b| {
        b.mean_auc
            .partial_cmp(&a.mean_auc)
            .unwrap()
            .then(a.trial.cmp(&b.trial))
    });
    Ok(results)
}

fn run_trial(
    base: &FeatureMatrix,
    interactions: &FeatureMatrix,
    labels: &[bool],
    spec: &ClassifierSpec,
    plan: &SplitPlan,
    config: &SubsetSearchConfig,
    trial: usize,
) -> Result<SubsetResult> {
    let mut rng = rng::substream2(config.seed, SEARCH_STREAM, trial as u64);

    let n_features = rng.random_range(config.min_features..=config.max_features);
    let mut feature_idx: Vec<usize> =
        sample_indices(&mut rng, base.n_cols(), n_features).into_iter().collect();
    feature_idx.sort_unstable();

    let n_inter = if config.max_interactions == 0 {
        0
    } else {
        rng.random_range(0..=config.max_interactions)
    };
    let mut inter_idx: Vec<usize> = if n_inter > 0 {
        sample_indices(&mut rng, interactions.n_cols(), n_inter).into_iter().collect()
    } else {
        Vec::new()
    };
    inter_idx.sort_unstable();

    let selected = base
        .select_columns(&feature_idx)?
        .hstack(&interactions.select_columns(&inter_idx)?)?;

    let mut aucs = Vec::new();
    for (k, fold) in plan.folds.iter().enumerate() {
        let test_labels: Vec<bool> = fold.test.iter().map(|&i| labels[i]).collect();
        let positives = test_labels.iter().filter(|&&y| y).count();
        if positives == 0 || positives == test_labels.len() {
            continue;
        }
        let train_labels: Vec<bool> = fold.train.iter().map(|&i| labels[i]).collect();
        let fold_spec = spec.reseeded(rng::mix(spec.seed, (trial as u64) << 16 | k as u64));
        let model = super::fit(&fold_spec, &selected.select_rows(&fold.train), &train_labels)?;
        let scores = super::predict_score(&model, &selected.select_rows(&fold.test))?;
        aucs.push(auc_rank(scores.as_slice(), &test_labels, TieMode::Half)?);
    }
    if aucs.is_empty() {
        return Err(Error::Eval(format!(
            "trial {trial}: every fold was single-class"
        )));
    }

    Ok(SubsetResult {
        trial,
        base_columns: feature_idx
            .iter()
            .map(|&j| base.names()[j].clone())
            .collect(),
        interaction_columns: inter_idx
            .iter()
            .map(|&j| interactions.names()[j].clone())
            .collect(),
        mean_auc: aucs.iter().sum::<f64>() / aucs.len() as f64,
    })
}
