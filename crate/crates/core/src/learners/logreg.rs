//! L1/L2-regularized logistic regression.
//!
//! Minimizes `P(w) + C * sum_i cw_i * log(1 + exp(-y_i (x_i.w + b)))`
//! with `P` the l1 or l2 penalty on the weights (never the intercept) and
//! `C` the inverse regularization strength. The optimizer is FISTA with
//! backtracking line search: deterministic, no data-order dependence, and
//! the l1 penalty enters only through its soft-threshold prox, so one code
//! path serves both penalties.
//!
//! Features are standardized internally by default (the penalty then acts
//! on the standardized scale); fitted coefficients are folded back to raw
//! units before being stored.

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Penalty {
    L1,
    #[default]
    L2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogRegParams {
    pub penalty: Penalty,
    /// Inverse regularization strength.
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub class_weight_pos: Option<f64>,
    pub standardize: bool,
}

impl Default for LogRegParams {
    fn default() -> Self {
        LogRegParams {
            penalty: Penalty::L2,
            c: 1.0,
            tol: 1e-9,
            max_iter: 5000,
            class_weight_pos: None,
            standardize: true,
        }
    }
}

impl LogRegParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) {
            return Err(Error::Config("logreg: C must be > 0".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config("logreg: tol must be > 0".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("logreg: max_iter must be >= 1".into()));
        }
        if let Some(w) = self.class_weight_pos {
            if !(w > 0.0) {
                return Err(Error::Config("logreg: class weight must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    /// Raw-unit coefficients, one per column.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Smooth part of the objective and its gradient at `(w, b)`:
/// `C * sum_i cw_i * log(1 + exp(-y_i m_i))` plus `0.5 ||w||^2` when `l2`.
/// Exposed so the analytic gradient can be checked against finite
/// differences.
pub fn logistic_objective_grad(
    columns: &[Vec<f64>],
    labels: &[bool],
    instance_weights: &[f64],
    w: &[f64],
    b: f64,
    c: f64,
    l2: bool,
) -> (f64, Vec<f64>, f64) {
    let n = labels.len();
    let d = columns.len();
    debug_assert_eq!(w.len(), d);

    let mut margins = vec![b; n];
    for (j, col) in columns.iter().enumerate() {
        if w[j] != 0.0 {
            for (m, &x) in margins.iter_mut().zip(col) {
                *m += w[j] * x;
            }
        }
    }

    let mut obj = 0.0;
    let mut residual = vec![0.0; n]; // cw * (sigma(m) - y)
    for i in 0..n {
        let y = if labels[i] { 1.0 } else { 0.0 };
        let m = margins[i];
        // log(1 + exp(-ym)) written stably for both signs.
        let ym = if labels[i] { m } else { -m };
        let loss = if ym > 0.0 {
            (-ym).exp().ln_1p()
        } else {
            -ym + ym.exp().ln_1p()
        };
        obj += instance_weights[i] * loss;
        let p = 1.0 / (1.0 + (-m).exp());
        residual[i] = instance_weights[i] * (p - y);
    }
    obj *= c;

    let mut grad_w = vec![0.0; d];
    for (j, col) in columns.iter().enumerate() {
        grad_w[j] = c * col.iter().zip(&residual).map(|(&x, &r)| x * r).sum::<f64>();
    }
    let grad_b = c * residual.iter().sum::<f64>();

    if l2 {
        obj += 0.5 * w.iter().map(|v| v * v).sum::<f64>();
        for (g, &v) in grad_w.iter_mut().zip(w) {
            *g += v;
        }
    }
    (obj, grad_w, grad_b)
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

pub fn fit(params: &LogRegParams, matrix: &FeatureMatrix, labels: &[bool]) -> Result<LogRegModel> {
    params.validate()?;
    let n = matrix.n_rows();
    let d = matrix.n_cols();
    if labels.len() != n {
        return Err(Error::Model(format!("{} labels for {n} rows", labels.len())));
    }
    let positives = labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == n {
        return Err(Error::Model(
            "logistic regression needs both classes in the training set".into(),
        ));
    }

    let pos_weight = params.class_weight_pos.unwrap_or(1.0);
    let instance_weights: Vec<f64> = labels
        .iter()
        .map(|&y| if y { pos_weight } else { 1.0 })
        .collect();

    // Optionally standardize columns; constant columns keep scale 1 so
    // they simply contribute nothing.
    let (columns, means, scales): (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) = if params.standardize {
        let mut cols = Vec::with_capacity(d);
        let mut means = Vec::with_capacity(d);
        let mut scales = Vec::with_capacity(d);
        for j in 0..d {
            let col = matrix.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            let scale = if var > 0.0 { var.sqrt() } else { 1.0 };
            cols.push(col.iter().map(|v| (v - mean) / scale).collect());
            means.push(mean);
            scales.push(scale);
        }
        (cols, means, scales)
    } else {
        (
            (0..d).map(|j| matrix.column(j).to_vec()).collect(),
            vec![0.0; d],
            vec![1.0; d],
        )
    };

    let l2 = params.penalty == Penalty::L2;
    let objective = |w: &[f64], b: f64| -> (f64, Vec<f64>, f64) {
        logistic_objective_grad(&columns, labels, &instance_weights, w, b, params.c, l2)
    };
    let penalized = |smooth: f64, w: &[f64]| -> f64 {
        if l2 {
            smooth // the l2 term already lives in the smooth part
        } else {
            smooth + w.iter().map(|v| v.abs()).sum::<f64>()
        }
    };

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut w_prev = w.clone();
    let mut b_prev = b;
    let mut momentum = 1.0_f64;
    let mut step = 1.0_f64;
    let (mut smooth, mut grad_w, mut grad_b) = objective(&w, b);
    let mut total = penalized(smooth, &w);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iter {
        iterations += 1;

        // Extrapolated point (FISTA momentum).
        let beta = (momentum - 1.0) / {
            let next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
            momentum = next;
            next
        };
        let y_w: Vec<f64> = w
            .iter()
            .zip(&w_prev)
            .map(|(&cur, &prev)| cur + beta * (cur - prev))
            .collect();
        let y_b = b + beta * (b - b_prev);
        let (y_smooth, y_grad_w, y_grad_b) = objective(&y_w, y_b);

        // Backtracking proximal step from the extrapolated point.
        let mut accepted = false;
        for _ in 0..60 {
            let mut cand_w: Vec<f64> = y_w
                .iter()
                .zip(&y_grad_w)
                .map(|(&v, &g)| v - step * g)
                .collect();
            if !l2 {
                for v in cand_w.iter_mut() {
                    *v = soft_threshold(*v, step);
                }
            }
            let cand_b = y_b - step * y_grad_b;
            let (cand_smooth, cand_gw, cand_gb) = objective(&cand_w, cand_b);
            let diff_sq: f64 = cand_w
                .iter()
                .zip(&y_w)
                .map(|(&a, &c)| (a - c) * (a - c))
                .sum::<f64>()
                + (cand_b - y_b).powi(2);
            let linearized: f64 = y_smooth
                + cand_w
                    .iter()
                    .zip(&y_w)
                    .zip(&y_grad_w)
                    .map(|((&a, &c), &g)| g * (a - c))
                    .sum::<f64>()
                + y_grad_b * (cand_b - y_b)
                + diff_sq / (2.0 * step);
            if cand_smooth <= linearized + 1e-12 {
                w_prev = std::mem::replace(&mut w, cand_w);
                b_prev = std::mem::replace(&mut b, cand_b);
                smooth = cand_smooth;
                grad_w = cand_gw;
                grad_b = cand_gb;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break; // step underflow; treat current point as final
        }

        let new_total = penalized(smooth, &w);
        if new_total > total + 1e-12 {
            // Momentum overshoot: restart it.
            momentum = 1.0;
        }
        let improvement = (total - new_total).abs();
        total = new_total;
        if improvement <= params.tol * total.abs().max(1.0) {
            converged = true;
            break;
        }
        step *= 1.1; // let the step relearn a larger scale
    }
    let _ = (grad_w, grad_b);

    // Fold standardized-space coefficients back to raw units.
    let mut raw_w = vec![0.0; d];
    let mut raw_b = b;
    for j in 0..d {
        raw_w[j] = w[j] / scales[j];
        raw_b -= w[j] * means[j] / scales[j];
    }

    Ok(LogRegModel {
        weights: raw_w,
        bias: raw_b,
        iterations,
        converged,
    })
}

pub fn predict(model: &LogRegModel, matrix: &FeatureMatrix) -> Vec<f64> {
    let n = matrix.n_rows();
    let mut margins = vec![model.bias; n];
    for (j, &wj) in model.weights.iter().enumerate() {
        if wj != 0.0 {
            let col = matrix.column(j);
            for (m, &x) in margins.iter_mut().zip(col) {
                *m += wj * x;
            }
        }
    }
    margins.iter().map(|&m| 1.0 / (1.0 + (-m).exp())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Provenance;
    use crate::metrics::{auc_rank, TieMode};
    use crate::rng;
    use rand::Rng;

    fn matrix(cols: Vec<Vec<f64>>) -> FeatureMatrix {
        let names = (0..cols.len()).map(|i| format!("f{i}")).collect();
        FeatureMatrix::new(names, cols, Provenance::default()).unwrap()
    }

    #[test]
    fn separable_data_is_fit() {
        let xs: Vec<f64> = (0..40).map(|i| i as f64 / 10.0).collect();
        let labels: Vec<bool> = (0..40).map(|i| i >= 20).collect();
        let m = matrix(vec![xs]);
        let model = fit(&LogRegParams::default(), &m, &labels).unwrap();
        let scores = predict(&model, &m);
        assert_eq!(auc_rank(&scores, &labels, TieMode::Half).unwrap(), 1.0);
    }

    #[test]
    fn extreme_regularization_flattens_scores() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let labels: Vec<bool> = (0..30).map(|i| i % 2 == 0).collect();
        let m = matrix(vec![xs]);
        for penalty in [Penalty::L1, Penalty::L2] {
            let params = LogRegParams {
                penalty,
                c: 1e-12,
                ..LogRegParams::default()
            };
            let model = fit(&params, &m, &labels).unwrap();
            assert!(model.weights[0].abs() < 1e-6, "{:?}", model.weights);
            let scores = predict(&model, &m);
            let spread = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - scores.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(spread < 1e-6, "spread {spread}");
        }
    }

    #[test]
    fn l1_produces_sparser_weights_than_l2() {
        let mut rng = rng::substream(31, 0);
        let n = 200;
        let signal: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let labels: Vec<bool> = signal.iter().map(|&s| s > 0.5).collect();
        let noise: Vec<Vec<f64>> = (0..8)
            .map(|_| (0..n).map(|_| rng.random::<f64>()).collect())
            .collect();
        let mut cols = vec![signal];
        cols.extend(noise);
        let m = matrix(cols);

        let l1 = fit(
            &LogRegParams {
                penalty: Penalty::L1,
                c: 0.05,
                ..LogRegParams::default()
            },
            &m,
            &labels,
        )
        .unwrap();
        let zero_l1 = l1.weights.iter().filter(|w| w.abs() < 1e-9).count();
        assert!(zero_l1 >= 4, "expected sparsity, weights {:?}", l1.weights);
        // The signal column survives.
        assert!(l1.weights[0].abs() > 1e-3);
    }

    #[test]
    fn single_class_is_an_error() {
        let m = matrix(vec![vec![1.0, 2.0]]);
        assert!(fit(&LogRegParams::default(), &m, &[true, true]).is_err());
    }

    #[test]
    fn analytic_gradient_matches_central_differences() {
        let mut rng = rng::substream(77, 1);
        for case in 0..20 {
            let n = 12 + case % 5;
            let d = 3 + case % 3;
            let columns: Vec<Vec<f64>> = (0..d)
                .map(|_| (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect())
                .collect();
            let mut labels: Vec<bool> = (0..n).map(|_| rng.random()).collect();
            labels[0] = true;
            labels[1] = false;
            let weights_i = vec![1.0; n];
            let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
            let b: f64 = rng.random::<f64>() - 0.5;
            let c = 0.7;

            let (_, grad_w, grad_b) =
                logistic_objective_grad(&columns, &labels, &weights_i, &w, b, c, true);

            let eps = 1e-6;
            let f = |w: &[f64], b: f64| {
                logistic_objective_grad(&columns, &labels, &weights_i, w, b, c, true).0
            };
            for j in 0..d {
                let mut wp = w.clone();
                wp[j] += eps;
                let mut wm = w.clone();
                wm[j] -= eps;
                let numeric = (f(&wp, b) - f(&wm, b)) / (2.0 * eps);
                let denom = grad_w[j].abs().max(1.0);
                assert!(
                    ((grad_w[j] - numeric) / denom).abs() <= 1e-6,
                    "dw[{j}]: analytic {} numeric {numeric}",
                    grad_w[j]
                );
            }
            let numeric_b = (f(&w, b + eps) - f(&w, b - eps)) / (2.0 * eps);
            assert!(((grad_b - numeric_b) / grad_b.abs().max(1.0)).abs() <= 1e-6);
        }
    }
}
