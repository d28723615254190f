//! Classifiers behind one interface: fit, score, importance.
//!
//! Four from-scratch algorithms cover the solution's model zoo:
//! gradient-boosted trees ([`gbt`]), extremely randomized trees ([`etc`]),
//! logistic regression ([`logreg`]) and shrinkage LDA ([`lda`]). A fitted
//! model embeds the column manifest it was trained on and refuses to score
//! matrices that do not match.

pub mod etc;
pub mod gbt;
pub mod lda;
pub mod logreg;
mod search;
mod tree;

pub use etc::{Criterion, EtcParams, MaxFeatures, MaxFeaturesMode};
pub use gbt::GbtParams;
pub use lda::{LdaParams, Shrinkage, ShrinkageMode};
pub use logreg::{logistic_objective_grad, LogRegParams, Penalty};
pub use search::{random_subset_search, SubsetResult, SubsetSearchConfig};
pub use tree::{Tree, TreeNode};

use crate::data::{FeatureMatrix, ScoreVector};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};

/// Which algorithm to train, with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", content = "params", rename_all = "lowercase")]
pub enum Algorithm {
    Gbt(GbtParams),
    Etc(EtcParams),
    LogReg(LogRegParams),
    Lda(LdaParams),
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Gbt(_) => "gbt",
            Algorithm::Etc(_) => "etc",
            Algorithm::LogReg(_) => "logreg",
            Algorithm::Lda(_) => "lda",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Algorithm::Gbt(p) => p.validate(),
            Algorithm::Etc(p) => p.validate(),
            Algorithm::LogReg(p) => p.validate(),
            Algorithm::Lda(p) => p.validate(),
        }
    }
}

/// Algorithm choice plus the seed all training randomness derives from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    #[serde(flatten)]
    pub algorithm: Algorithm,
    #[serde(default)]
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(algorithm: Algorithm, seed: u64) -> ClassifierSpec {
        ClassifierSpec { algorithm, seed }
    }

    pub fn validate(&self) -> Result<()> {
        self.algorithm.validate()
    }

    /// Same spec, different seed; used by evaluators to give every fold its
    /// own substream.
    pub fn reseeded(&self, seed: u64) -> ClassifierSpec {
        ClassifierSpec {
            algorithm: self.algorithm.clone(),
            seed,
        }
    }

    pub fn from_toml(text: &str) -> Result<ClassifierSpec> {
        let spec: ClassifierSpec =
            toml::from_str(text).map_err(|e| Error::Config(format!("model spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("model spec: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum ModelState {
    Gbt(gbt::GbtModel),
    Etc(etc::EtcModel),
    LogReg(logreg::LogRegModel),
    Lda(lda::LdaModel),
}

const MODEL_FORMAT_VERSION: u32 = 1;

/// A fitted classifier: opaque state plus the column manifest and spec
/// echo. Immutable after fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub version: u32,
    pub spec: ClassifierSpec,
    pub columns: Vec<String>,
    state: ModelState,
}

/// Train a classifier on a feature matrix.
pub fn fit(spec: &ClassifierSpec, matrix: &FeatureMatrix, labels: &[bool]) -> Result<TrainedModel> {
    spec.validate()?;
    let state = match &spec.algorithm {
        Algorithm::Gbt(p) => ModelState::Gbt(gbt::fit(p, matrix, labels, spec.seed)?),
        Algorithm::Etc(p) => ModelState::Etc(etc::fit(p, matrix, labels, spec.seed)?),
        Algorithm::LogReg(p) => ModelState::LogReg(logreg::fit(p, matrix, labels)?),
        Algorithm::Lda(p) => ModelState::Lda(lda::fit(p, matrix, labels)?),
    };
    Ok(TrainedModel {
        version: MODEL_FORMAT_VERSION,
        spec: spec.clone(),
        columns: matrix.names().to_vec(),
        state,
    })
}

/// Score a matrix with a fitted model. The matrix's columns must match the
/// manifest the model was trained on, in order.
pub fn predict_score(model: &TrainedModel, matrix: &FeatureMatrix) -> Result<ScoreVector> {
    if matrix.names() != model.columns {
        return Err(Error::Model(format!(
            "feature columns do not match the model manifest ({} vs {} columns)",
            matrix.n_cols(),
            model.columns.len()
        )));
    }
    let scores = match &model.state {
        ModelState::Gbt(m) => gbt::predict(m, matrix),
        ModelState::Etc(m) => etc::predict(m, matrix),
        ModelState::LogReg(m) => logreg::predict(m, matrix),
        ModelState::Lda(m) => lda::predict(m, matrix),
    };
    ScoreVector::new(scores)
}

/// Split-count feature importance of a tree model: how many internal nodes
/// split on each column, keyed by column name.
pub fn feature_importance(model: &TrainedModel) -> Result<BTreeMap<String, u64>> {
    let counts = match &model.state {
        ModelState::Gbt(m) => &m.split_counts,
        ModelState::Etc(m) => &m.split_counts,
        _ => {
            return Err(Error::Model(format!(
                "split-count importance requires a tree model, got {}",
                model.spec.algorithm.name()
            )))
        }
    };
    Ok(counts
        .iter()
        .map(|(&j, &c)| (model.columns[j].clone(), c))
        .collect())
}

/// Versioned structured-text model file.
pub fn save_model<W: Write>(writer: W, model: &TrainedModel) -> Result<()> {
    serde_json::to_writer(writer, model).map_err(|e| Error::Model(format!("save: {e}")))
}

pub fn load_model<R: Read>(reader: R) -> Result<TrainedModel> {
    let model: TrainedModel =
        serde_json::from_reader(reader).map_err(|e| Error::Model(format!("load: {e}")))?;
    if model.version != MODEL_FORMAT_VERSION {
        return Err(Error::Model(format!(
            "model file version {} is not supported (expected {MODEL_FORMAT_VERSION})",
            model.version
        )));
    }
    Ok(model)
}
