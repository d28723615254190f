//! Score blending: standardized averaging and weighted sorted-order rank
//! averaging.
//!
//! AUC depends only on score ranks, so blends only need to agree on scale
//! (standardization) or abandon scale entirely (rank averaging). Weights
//! are normalized internally; only their ratios matter.

use crate::data::ScoreVector;
use crate::error::{Error, Result};

/// Scale scores so their population standard deviation is 1. Rank order is
/// preserved; constant inputs are an error (there is no scale to fix).
pub fn standardize(scores: &ScoreVector) -> Result<ScoreVector> {
    let xs = scores.as_slice();
    if xs.is_empty() {
        return Err(Error::Metric("cannot standardize an empty vector".into()));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    if var == 0.0 {
        return Err(Error::Metric(
            "cannot standardize a zero-variance score vector".into(),
        ));
    }
    let sd = var.sqrt();
    ScoreVector::new(xs.iter().map(|x| x / sd).collect())
}

fn check_blend_inputs(inputs: &[ScoreVector], weights: &[f64]) -> Result<usize> {
    if inputs.is_empty() {
        return Err(Error::Metric("blend needs at least one input".into()));
    }
    if inputs.len() != weights.len() {
        return Err(Error::Metric(format!(
            "{} inputs for {} weights",
            inputs.len(),
            weights.len()
        )));
    }
    let n = inputs[0].len();
    for (i, v) in inputs.iter().enumerate() {
        if v.len() != n {
            return Err(Error::Metric(format!(
                "input {i} has length {}, expected {n}",
                v.len()
            )));
        }
    }
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::Metric("weights must be finite and >= 0".into()));
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::Metric("weights must not all be zero".into()));
    }
    Ok(n)
}

/// Weighted mean of standardized inputs.
pub fn blend_standardized(inputs: &[ScoreVector], weights: &[f64]) -> Result<ScoreVector> {
    let n = check_blend_inputs(inputs, weights)?;
    let total: f64 = weights.iter().sum();
    let mut out = vec![0.0; n];
    for (v, &w) in inputs.iter().zip(weights) {
        let std = standardize(v)?;
        for (o, s) in out.iter_mut().zip(std.as_slice()) {
            *o += w / total * s;
        }
    }
    ScoreVector::new(out)
}

/// Sorted-order positions of a score vector, 1-based, ties receiving the
/// average of the positions they span.
pub fn ranks(scores: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));
    let mut out = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // Positions i+1 ..= j span the tie group; everyone gets the mean.
        let rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            out[idx] = rank;
        }
        i = j;
    }
    out
}

/// Sorted-order position averaging: replace each input by its ranks, then
/// weighted-average per instance. Invariant to strictly monotone transforms
/// of each input independently.
pub fn rank_average(inputs: &[ScoreVector], weights: &[f64]) -> Result<ScoreVector> {
    let n = check_blend_inputs(inputs, weights)?;
    let total: f64 = weights.iter().sum();
    let mut out = vec![0.0; n];
    for (v, &w) in inputs.iter().zip(weights) {
        let r = ranks(v.as_slice());
        for (o, ri) in out.iter_mut().zip(r) {
            *o += w / total * ri;
        }
    }
    ScoreVector::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{auc_rank, TieMode};

    fn sv(xs: &[f64]) -> ScoreVector {
        ScoreVector::new(xs.to_vec()).unwrap()
    }

    fn pop_std(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
    }

    #[test]
    fn standardize_fixes_unit_std() {
        let v = sv(&[2.0, 4.0, 6.0, 8.0]);
        let out = standardize(&v).unwrap();
        assert!((pop_std(out.as_slice()) - 1.0).abs() < 1e-12);
        // std 2 in, deviations halved out.
        let sd_in = pop_std(v.as_slice());
        for (x, y) in v.iter().zip(out.iter()) {
            assert!((y - x / sd_in).abs() < 1e-12);
        }
    }

    #[test]
    fn standardize_preserves_auc() {
        let v = sv(&[0.3, 0.9, 0.1, 0.7]);
        let labels = [false, true, false, true];
        let before = auc_rank(v.as_slice(), &labels, TieMode::Half).unwrap();
        let after = auc_rank(standardize(&v).unwrap().as_slice(), &labels, TieMode::Half).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn standardize_rejects_constant_vectors() {
        assert!(standardize(&sv(&[0.5, 0.5, 0.5])).is_err());
    }

    #[test]
    fn single_input_blend_is_rank_identical() {
        let v = sv(&[0.2, 0.8, 0.5]);
        let labels = [false, true, false];
        for out in [
            blend_standardized(std::slice::from_ref(&v), &[1.0]).unwrap(),
            rank_average(std::slice::from_ref(&v), &[1.0]).unwrap(),
        ] {
            let a = auc_rank(v.as_slice(), &labels, TieMode::Half).unwrap();
            let b = auc_rank(out.as_slice(), &labels, TieMode::Half).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn average_ranks_for_ties() {
        assert_eq!(ranks(&[0.1, 0.5, 0.5, 0.9]), vec![1.0, 2.5, 2.5, 4.0]);
    }

    #[test]
    fn zero_weight_inputs_are_ignored() {
        let a = sv(&[0.1, 0.9, 0.4]);
        let b = sv(&[9.0, 1.0, 5.0]);
        let out = rank_average(&[a.clone(), a.clone(), b], &[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(out.as_slice(), &ranks(a.as_slice())[..]);
    }

    #[test]
    fn weighted_rank_average_matches_hand_computation() {
        // Three 5-element vectors, weights 1/3/2; ranks worked out by hand.
        let m1 = sv(&[0.10, 0.20, 0.30, 0.40, 0.50]); // ranks 1 2 3 4 5
        let m2 = sv(&[0.90, 0.10, 0.80, 0.20, 0.70]); // ranks 5 1 4 2 3
        let m3 = sv(&[0.50, 0.50, 0.10, 0.90, 0.20]); // ranks 3.5 3.5 1 5 2
        let out = rank_average(&[m1, m2, m3], &[1.0, 3.0, 2.0]).unwrap();
        let expect = [
            (1.0 + 3.0 * 5.0 + 2.0 * 3.5) / 6.0,
            (2.0 + 3.0 * 1.0 + 2.0 * 3.5) / 6.0,
            (3.0 + 3.0 * 4.0 + 2.0 * 1.0) / 6.0,
            (4.0 + 3.0 * 2.0 + 2.0 * 5.0) / 6.0,
            (5.0 + 3.0 * 3.0 + 2.0 * 2.0) / 6.0,
        ];
        for (got, want) in out.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn rank_average_ignores_monotone_transforms() {
        let a = sv(&[0.1, 0.9, 0.4, 0.7]);
        let b = sv(&[3.0, 1.0, 2.0, 5.0]);
        let blended = rank_average(&[a.clone(), b.clone()], &[2.0, 1.0]).unwrap();
        let a_t = sv(&a.iter().map(|x| (x * 4.0).exp() + 1.0).collect::<Vec<_>>());
        let blended_t = rank_average(&[a_t, b], &[2.0, 1.0]).unwrap();
        assert_eq!(blended.as_slice(), blended_t.as_slice());
    }

    #[test]
    fn joint_permutation_of_inputs_is_invariant() {
        let a = sv(&[0.1, 0.9, 0.4]);
        let b = sv(&[0.5, 0.3, 0.8]);
        let x = rank_average(&[a.clone(), b.clone()], &[1.0, 2.0]).unwrap();
        let y = rank_average(&[b, a], &[2.0, 1.0]).unwrap();
        assert_eq!(x.as_slice(), y.as_slice());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let res = rank_average(&[sv(&[0.1, 0.2]), sv(&[0.3])], &[1.0, 1.0]);
        assert!(res.is_err());
    }
}
