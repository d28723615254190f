//! The evaluation runner: extract, fit, score and aggregate per fold.

use super::SplitPlan;
use crate::data::{Dataset, MetadataMap};
use crate::error::{Error, Result};
use crate::features::{fit_extract, ExtractorConfig};
use crate::learners::{self, ClassifierSpec};
use crate::metrics::{auc_rank, TieMode};
use crate::rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Per-fold result. Folds whose test side holds a single class are skipped
/// with a reason instead of failing the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldOutcome {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub auc: Option<f64>,
    pub skipped_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: String,
    pub extractor: String,
    pub algorithm: String,
    pub per_fold: Vec<FoldOutcome>,
    pub computed_folds: usize,
    pub skipped_folds: usize,
    pub mean_auc: f64,
    pub std_auc: f64,
}

impl EvalReport {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Eval(format!("report: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<EvalReport> {
        toml::from_str(text).map_err(|e| Error::Eval(format!("report: {e}")))
    }
}

/// Evaluate a (extractor, learner) pair over a split plan.
///
/// Features are extracted independently for the train and test partitions
/// of each fold; where the extractor carries fit-state (FS3's pruning),
/// the column set is chosen on the training side and replayed on the test
/// side. Fold AUC uses the conventional half-credit tie handling.
pub fn evaluate(
    dataset: &Dataset,
    metadata: &MetadataMap,
    extractor: &ExtractorConfig,
    spec: &ClassifierSpec,
    plan: &SplitPlan,
) -> Result<EvalReport> {
    plan.validate(dataset)?;
    spec.validate()?;
    extractor.validate()?;

    let outcomes: Vec<Result<FoldOutcome>> = plan
        .folds
        .par_iter()
        .enumerate()
        .map(|(k, fold)| {
            let outcome = run_fold(dataset, metadata, extractor, spec, k, fold);
            outcome.map(|mut o| {
                o.fold = k;
                o
            })
        })
        .collect();

    let mut per_fold = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        per_fold.push(o?);
    }

    let computed: Vec<f64> = per_fold.iter().filter_map(|o| o.auc).collect();
    if computed.is_empty() {
        return Err(Error::Eval("every fold was skipped".into()));
    }
    let mean = computed.iter().sum::<f64>() / computed.len() as f64;
    let std = (computed.iter().map(|a| (a - mean).powi(2)).sum::<f64>()
        / computed.len() as f64)
        .sqrt();

    Ok(EvalReport {
        protocol: plan.protocol.clone(),
        extractor: extractor.feature_set.name().into(),
        algorithm: spec.algorithm.name().into(),
        computed_folds: computed.len(),
        skipped_folds: per_fold.len() - computed.len(),
        mean_auc: mean,
        std_auc: std,
        per_fold,
    })
}

fn run_fold(
    dataset: &Dataset,
    metadata: &MetadataMap,
    extractor: &ExtractorConfig,
    spec: &ClassifierSpec,
    fold_idx: usize,
    fold: &super::Fold,
) -> Result<FoldOutcome> {
    let n_train = fold.train.len();
    let n_test = fold.test.len();
    let skip = |reason: String| {
        Ok(FoldOutcome {
            fold: fold_idx,
            n_train,
            n_test,
            auc: None,
            skipped_reason: Some(reason),
        })
    };
    if fold.train.is_empty() || fold.test.is_empty() {
        return skip("empty train or test side".into());
    }

    let test_labels: Vec<bool> = fold
        .test
        .iter()
        .map(|&i| dataset.records()[i].label.expect("validated"))
        .collect();
    let positives = test_labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == test_labels.len() {
        // Mirrors the study: AUC cannot be computed for such folds.
        return skip(format!(
            "single-class test fold ({positives} of {} positive)",
            test_labels.len()
        ));
    }

    let train_ds = dataset.subset(&fold.train)?;
    let test_ds = dataset.subset(&fold.test)?;
    let train_labels = train_ds.labels()?;

    let (train_matrix, fitted) = fit_extract(&train_ds, metadata, extractor)?;
    let test_matrix = fitted.transform(&test_ds, metadata)?;

    let fold_spec = spec.reseeded(rng::mix(spec.seed, fold_idx as u64));
    let model = learners::fit(&fold_spec, &train_matrix, &train_labels)?;
    let scores = learners::predict_score(&model, &test_matrix)?;

    let auc = auc_rank(scores.as_slice(), &test_labels, TieMode::Half)?;
    Ok(FoldOutcome {
        fold: fold_idx,
        n_train,
        n_test,
        auc: Some(auc),
        skipped_reason: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SeriesId;
    use crate::eval::{kfold_split, Fold};
    use crate::features::FeatureSet;
    use crate::ingest::{synth_generate, SynthConfig};
    use crate::learners::{Algorithm, GbtParams};
    use rand::seq::SliceRandom;

    fn quick_spec() -> ClassifierSpec {
        ClassifierSpec::new(
            Algorithm::Gbt(GbtParams {
                n_estimators: 15,
                ..GbtParams::default()
            }),
            5,
        )
    }

    #[test]
    fn perfect_single_feature_data_scores_auc_one() {
        // Plant an unmistakable signal in a series FS4 keeps: the label is
        // a function of the last-hour max geophone energy.
        let config = SynthConfig::heterogeneous(3, 200, 11);
        let out = synth_generate(&config).unwrap();
        let mut records = out.dataset.records().to_vec();
        for r in &mut records {
            let giveaway = if r.label == Some(true) { 1.0e7 } else { 0.0 };
            let mut series = r.hourly.get(SeriesId::MaxGenergy).to_vec();
            series[23] = giveaway;
            r.hourly.set(SeriesId::MaxGenergy, series);
        }
        let ds = Dataset::new(records, crate::data::DatasetMode::Contiguous).unwrap();

        let plan = kfold_split(&ds, 4, 3).unwrap();
        let report = evaluate(
            &ds,
            &out.metadata,
            &ExtractorConfig::for_set(FeatureSet::Fs4),
            &quick_spec(),
            &plan,
        )
        .unwrap();
        assert!(report.mean_auc > 0.999, "mean auc {}", report.mean_auc);
        assert_eq!(report.skipped_folds, 0);
    }

    #[test]
    fn shuffled_labels_score_near_half() {
        let config = SynthConfig::heterogeneous(3, 260, 13);
        let out = synth_generate(&config).unwrap();
        let mut records = out.dataset.records().to_vec();
        let mut labels: Vec<Option<bool>> = records.iter().map(|r| r.label).collect();
        labels.shuffle(&mut crate::rng::substream(3, 3));
        for (r, l) in records.iter_mut().zip(labels) {
            r.label = l;
        }
        let ds = Dataset::new(records, crate::data::DatasetMode::Contiguous).unwrap();

        let plan = kfold_split(&ds, 5, 7).unwrap();
        let report = evaluate(
            &ds,
            &out.metadata,
            &ExtractorConfig::for_set(FeatureSet::Fs4),
            &quick_spec(),
            &plan,
        )
        .unwrap();
        assert!(
            (report.mean_auc - 0.5).abs() < 0.05,
            "null mean auc {}",
            report.mean_auc
        );
    }

    #[test]
    fn single_class_folds_are_skipped_and_reported() {
        let config = SynthConfig::heterogeneous(3, 200, 17);
        let out = synth_generate(&config).unwrap();
        let ds = &out.dataset;
        // Build a plan with one useless fold: test indices drawn from the
        // quietest location, which never warns.
        let quiet = ds.by_location().iter().next().unwrap().1.clone();
        let rest: Vec<usize> = (0..ds.len()).filter(|i| !quiet.contains(i)).collect();
        let good = kfold_split(ds, 3, 1).unwrap();
        let mut folds = good.folds.clone();
        folds.push(Fold {
            train: rest,
            test: quiet,
        });
        let plan = SplitPlan {
            folds,
            ..good.clone()
        };
        let report = evaluate(
            ds,
            &out.metadata,
            &ExtractorConfig::for_set(FeatureSet::Fs4),
            &quick_spec(),
            &plan,
        )
        .unwrap();
        assert_eq!(report.skipped_folds, 1);
        assert!(report.per_fold[3].skipped_reason.is_some());
        let text = report.to_toml().unwrap();
        assert_eq!(EvalReport::from_toml(&text).unwrap(), report);
    }

    #[test]
    fn all_folds_skipped_is_an_error() {
        let config = SynthConfig::heterogeneous(2, 150, 19);
        let out = synth_generate(&config).unwrap();
        let ds = &out.dataset;
        let quiet = ds.by_location().iter().next().unwrap().1.clone();
        let rest: Vec<usize> = (0..ds.len()).filter(|i| !quiet.contains(i)).collect();
        let plan = SplitPlan {
            protocol: "custom".into(),
            seed: None,
            params: Default::default(),
            folds: vec![Fold {
                train: rest,
                test: quiet,
            }],
        };
        let err = evaluate(
            ds,
            &out.metadata,
            &ExtractorConfig::for_set(FeatureSet::Fs4),
            &quick_spec(),
            &plan,
        )
        .unwrap_err();
        assert!(err.to_string().contains("skipped"));
    }
}
