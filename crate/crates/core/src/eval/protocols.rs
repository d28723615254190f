//! The four split protocols.

use super::{Fold, GapMode, ProtocolConfig, SplitPlan};
use crate::data::{Dataset, LocationId};
use crate::error::{Error, Result};
use crate::rng;
use rand::seq::index::sample as sample_indices;
use rand::seq::SliceRandom;
use std::collections::BTreeSet;

const KFOLD_STREAM: u64 = 0x6b66;
const TRTS_STREAM: u64 = 0x7472;

fn require_labeled(dataset: &Dataset) -> Result<()> {
    if !dataset.is_labeled() {
        return Err(Error::Eval("split protocols need a labeled dataset".into()));
    }
    Ok(())
}

/// Random assignment of instances to k folds; fold sizes differ by at most
/// one.
pub fn kfold_split(dataset: &Dataset, k: usize, seed: u64) -> Result<SplitPlan> {
    require_labeled(dataset)?;
    let n = dataset.len();
    if k < 2 {
        return Err(Error::Config("k must be >= 2".into()));
    }
    if k > n {
        return Err(Error::Config(format!("k = {k} exceeds {n} instances")));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::substream(seed, KFOLD_STREAM));

    let mut folds = Vec::with_capacity(k);
    for fold_idx in 0..k {
        let test: Vec<usize> = order
            .iter()
            .copied()
            .skip(fold_idx)
            .step_by(k)
            .collect();
        let test_set: BTreeSet<usize> = test.iter().copied().collect();
        let train = (0..n).filter(|i| !test_set.contains(i)).collect();
        let mut test = test;
        test.sort_unstable();
        folds.push(Fold { train, test });
    }

    Ok(SplitPlan {
        protocol: "kcv".into(),
        seed: Some(seed),
        params: [("k".to_string(), k.to_string())].into(),
        folds,
    })
}

/// Leave-one-location-out. Train-only locations and locations without a
/// single positive label never become test folds but always contribute to
/// training.
pub fn lolo_split(dataset: &Dataset, config: &ProtocolConfig) -> Result<SplitPlan> {
    require_labeled(dataset)?;
    config.validate()?;

    let mut folds = Vec::new();
    for (&loc, indices) in dataset.by_location() {
        if config.is_train_only(loc) {
            continue;
        }
        let has_positive = indices
            .iter()
            .any(|&i| dataset.records()[i].label == Some(true));
        if !has_positive {
            continue;
        }
        let test = indices.clone();
        let test_set: BTreeSet<usize> = test.iter().copied().collect();
        let train: Vec<usize> = (0..dataset.len()).filter(|i| !test_set.contains(i)).collect();
        if train.is_empty() {
            return Err(Error::Eval(format!(
                "location {loc} is the only data; nothing to train on"
            )));
        }
        folds.push(Fold { train, test });
    }
    if folds.is_empty() {
        return Err(Error::Eval(
            "no location is eligible to serve as a test fold".into(),
        ));
    }

    Ok(SplitPlan {
        protocol: "lolo".into(),
        seed: None,
        params: config.echo(&[]),
        folds,
    })
}

/// Chronological split of one location's (already position-sorted) indices
/// with the configured gap. Returns (train, test).
fn chronological_split(
    indices: &[usize],
    train_fraction: f64,
    gap: usize,
    mode: GapMode,
    loc: LocationId,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let m = indices.len();
    let split_point = (train_fraction * m as f64).floor() as usize;
    let (train_end, test_start) = match mode {
        GapMode::TrainSide => (split_point.saturating_sub(gap), split_point),
        GapMode::BothSides => {
            let half = gap / 2;
            (
                split_point.saturating_sub(gap - half),
                (split_point + half).min(m),
            )
        }
    };
    if train_end == 0 || test_start >= m {
        return Err(Error::Eval(format!(
            "location {loc} is too short ({m} instances) to host a {:.0}/{:.0} split with a {gap}-instance gap",
            100.0 * train_fraction,
            100.0 * (1.0 - train_fraction)
        )));
    }
    Ok((
        indices[..train_end].to_vec(),
        indices[test_start..].to_vec(),
    ))
}

/// TrTs1: per repeat, a few whole locations go to validation; every other
/// eligible location splits chronologically with the gap removed at the
/// boundary. Train-only locations contribute only to training.
pub fn trts1_split(dataset: &Dataset, config: &ProtocolConfig, seed: u64) -> Result<SplitPlan> {
    require_labeled(dataset)?;
    config.validate()?;
    let by_location = dataset.by_location();

    // Only non-train-only locations enter the holdout draw.
    let drawable: Vec<LocationId> = by_location
        .keys()
        .copied()
        .filter(|&l| !config.is_train_only(l))
        .collect();
    if drawable.len() <= config.holdout_series {
        return Err(Error::Eval(format!(
            "need more than {} locations to hold {} out",
            config.holdout_series, config.holdout_series
        )));
    }

    let mut folds = Vec::with_capacity(config.repeats_trts1);
    for repeat in 0..config.repeats_trts1 {
        let mut rng = rng::substream2(seed, TRTS_STREAM, repeat as u64);
        let holdout: BTreeSet<LocationId> =
            sample_indices(&mut rng, drawable.len(), config.holdout_series)
                .into_iter()
                .map(|i| drawable[i])
                .collect();

        let mut train = Vec::new();
        let mut test = Vec::new();
        for (&loc, indices) in by_location {
            if holdout.contains(&loc) {
                test.extend_from_slice(indices);
            } else if config.is_train_only(loc) {
                train.extend_from_slice(indices);
            } else {
                let (tr, te) = chronological_split(
                    indices,
                    config.train_fraction,
                    config.gap_hours as usize,
                    config.gap_mode,
                    loc,
                )?;
                train.extend(tr);
                test.extend(te);
            }
        }
        folds.push(Fold { train, test });
    }

    Ok(SplitPlan {
        protocol: "trts1".into(),
        seed: Some(seed),
        params: config.echo(&[
            ("repeats", config.repeats_trts1.to_string()),
            ("train_fraction", config.train_fraction.to_string()),
            ("holdout_series", config.holdout_series.to_string()),
        ]),
        folds,
    })
}

/// TrTs2: energy-guided repeated splits. Excluded locations are dropped
/// entirely; per repeat, a few random locations are test-only and every
/// other location contributes its configured-side share of samples to the
/// test set; locations flagged TSE-nonzero are first filtered to instances
/// with positive total seismic energy.
pub fn trts2_split(dataset: &Dataset, config: &ProtocolConfig, seed: u64) -> Result<SplitPlan> {
    require_labeled(dataset)?;
    config.validate()?;

    let mut roster: Vec<(LocationId, Vec<usize>)> = Vec::new();
    for (&loc, indices) in dataset.by_location() {
        if config.excluded_locations.contains(&loc.0) {
            continue;
        }
        let filtered: Vec<usize> = if config.tse_nonzero_locations.contains(&loc.0) {
            indices
                .iter()
                .copied()
                .filter(|&i| dataset.records()[i].scalars.total_seismic_energy() > 0.0)
                .collect()
        } else {
            indices.clone()
        };
        if !filtered.is_empty() {
            roster.push((loc, filtered));
        }
    }
    if roster.len() < config.holdout_series + 1 {
        return Err(Error::Eval(format!(
            "{} locations remain after exclusion; need at least {}",
            roster.len(),
            config.holdout_series + 1
        )));
    }

    let mut folds = Vec::with_capacity(config.repeats_trts2);
    for repeat in 0..config.repeats_trts2 {
        let mut rng = rng::substream2(seed, TRTS_STREAM ^ 2, repeat as u64);
        let holdout: BTreeSet<LocationId> =
            sample_indices(&mut rng, roster.len(), config.holdout_series)
                .into_iter()
                .map(|i| roster[i].0)
                .collect();

        let mut train = Vec::new();
        let mut test = Vec::new();
        for (loc, indices) in &roster {
            if holdout.contains(loc) {
                test.extend_from_slice(indices);
                continue;
            }
            let m = indices.len();
            let k_test = (config.test_fraction * m as f64).floor() as usize;
            let from_start = config.start_side_locations.contains(&loc.0);
            if from_start {
                test.extend_from_slice(&indices[..k_test]);
                train.extend_from_slice(&indices[k_test..]);
            } else {
                train.extend_from_slice(&indices[..m - k_test]);
                test.extend_from_slice(&indices[m - k_test..]);
            }
        }
        folds.push(Fold { train, test });
    }

    Ok(SplitPlan {
        protocol: "trts2".into(),
        seed: Some(seed),
        params: config.echo(&[
            ("repeats", config.repeats_trts2.to_string()),
            ("test_fraction", config.test_fraction.to_string()),
            ("excluded", format!("{:?}", config.excluded_locations)),
        ]),
        folds,
    })
}
