//! Two-class linear discriminant with shrinkage-regularized covariance.
//!
//! The pooled within-class covariance `S` (biased, normalized by n) is
//! shrunk toward a scaled identity:
//!
//! `Sigma = (1 - lambda) S + lambda (tr(S)/d) I`
//!
//! with `lambda` picked automatically by the Ledoit-Wolf analytic
//! estimator computed on the class-centered data. The discriminant
//! direction solves `Sigma w = mu_1 - mu_0`; scores are the raw
//! discriminant values (any monotone score is fine for rank metrics).

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shrinkage {
    Fixed(f64),
    Mode(ShrinkageMode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShrinkageMode {
    Auto,
    None,
}

impl Default for Shrinkage {
    fn default() -> Self {
        Shrinkage::Mode(ShrinkageMode::Auto)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct LdaParams {
    pub shrinkage: Shrinkage,
}

impl LdaParams {
    pub fn validate(&self) -> Result<()> {
        if let Shrinkage::Fixed(v) = self.shrinkage {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config("lda: fixed shrinkage must be in [0, 1]".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// The shrinkage intensity actually used.
    pub lambda: f64,
}

/// Ledoit-Wolf shrinkage intensity for rows already centered (here:
/// class-centered). Uses the closed form
/// `beta = (sum_i ||x_i||^4 / n - ||S||_F^2) / (n d)`,
/// `delta = ||S - mu I||_F^2 / d`, `lambda = min(beta, delta) / delta`.
fn ledoit_wolf_lambda(centered_rows: &[Vec<f64>], s: &[f64], d: usize) -> f64 {
    let n = centered_rows.len() as f64;
    let mu = (0..d).map(|j| s[j * d + j]).sum::<f64>() / d as f64;

    let mut delta = 0.0;
    for j in 0..d {
        for k in 0..d {
            let target = if j == k { mu } else { 0.0 };
            delta += (s[j * d + k] - target).powi(2);
        }
    }
    delta /= d as f64;
    if delta <= 0.0 {
        return 0.0;
    }

    let s_frob_sq: f64 = s.iter().map(|v| v * v).sum();
    let quad_sum: f64 = centered_rows
        .iter()
        .map(|row| row.iter().map(|v| v * v).sum::<f64>().powi(2))
        .sum();
    let beta = ((quad_sum / n - s_frob_sq) / (n * d as f64)).max(0.0);
    (beta.min(delta) / delta).clamp(0.0, 1.0)
}

/// Solve the symmetric positive-definite system `A x = b` by Cholesky,
/// adding diagonal jitter on failure.
fn cholesky_solve(a: &[f64], b: &[f64], d: usize) -> Result<Vec<f64>> {
    let mut jitter = 0.0;
    let scale = (0..d).map(|j| a[j * d + j]).sum::<f64>() / d as f64;
    for _ in 0..8 {
        match try_cholesky(a, d, jitter) {
            Some(l) => {
                // Forward then backward substitution.
                let mut y = b.to_vec();
                for i in 0..d {
                    let mut sum = y[i];
                    for k in 0..i {
                        sum -= l[i * d + k] * y[k];
                    }
                    y[i] = sum / l[i * d + i];
                }
                let mut x = y;
                for i in (0..d).rev() {
                    let mut sum = x[i];
                    for k in i + 1..d {
                        sum -= l[k * d + i] * x[k];
                    }
                    x[i] = sum / l[i * d + i];
                }
                return Ok(x);
            }
            None => {
                jitter = if jitter == 0.0 {
                    scale.max(1e-300) * 1e-10
                } else {
                    jitter * 100.0
                };
            }
        }
    }
    Err(Error::Model("covariance factorization failed".into()))
}

fn try_cholesky(a: &[f64], d: usize, jitter: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut sum = a[i * d + j] + if i == j { jitter } else { 0.0 };
            for k in 0..j {
                sum -= l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i * d + i] = sum.sqrt();
            } else {
                l[i * d + j] = sum / l[j * d + j];
            }
        }
    }
    Some(l)
}

pub fn fit(params: &LdaParams, matrix: &FeatureMatrix, labels: &[bool]) -> Result<LdaModel> {
    params.validate()?;
    let n = matrix.n_rows();
    let d = matrix.n_cols();
    if labels.len() != n {
        return Err(Error::Model(format!("{} labels for {n} rows", labels.len())));
    }
    let n1 = labels.iter().filter(|&&y| y).count();
    let n0 = n - n1;
    if n0 == 0 || n1 == 0 {
        return Err(Error::Model(
            "discriminant analysis needs both classes in the training set".into(),
        ));
    }

    let mut mu0 = vec![0.0; d];
    let mut mu1 = vec![0.0; d];
    for j in 0..d {
        let col = matrix.column(j);
        for (i, &v) in col.iter().enumerate() {
            if labels[i] {
                mu1[j] += v;
            } else {
                mu0[j] += v;
            }
        }
        mu0[j] /= n0 as f64;
        mu1[j] /= n1 as f64;
    }

    // Class-centered rows and pooled covariance (biased).
    let centered: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mu = if labels[i] { &mu1 } else { &mu0 };
            (0..d).map(|j| matrix.value(i, j) - mu[j]).collect()
        })
        .collect();
    let mut s = vec![0.0; d * d];
    for row in &centered {
        for j in 0..d {
            let vj = row[j];
            if vj == 0.0 {
                continue;
            }
            for k in j..d {
                s[j * d + k] += vj * row[k];
            }
        }
    }
    for j in 0..d {
        for k in j..d {
            s[j * d + k] /= n as f64;
            s[k * d + j] = s[j * d + k];
        }
    }

    let lambda = match params.shrinkage {
        Shrinkage::Fixed(v) => v,
        Shrinkage::Mode(ShrinkageMode::None) => 0.0,
        Shrinkage::Mode(ShrinkageMode::Auto) => ledoit_wolf_lambda(&centered, &s, d),
    };

    let mu = (0..d).map(|j| s[j * d + j]).sum::<f64>() / d as f64;
    let mut sigma = vec![0.0; d * d];
    for j in 0..d {
        for k in 0..d {
            let target = if j == k { mu } else { 0.0 };
            sigma[j * d + k] = (1.0 - lambda) * s[j * d + k] + lambda * target;
        }
    }

    let diff: Vec<f64> = (0..d).map(|j| mu1[j] - mu0[j]).collect();
    let weights = cholesky_solve(&sigma, &diff, d)?;

    let mut bias = (n1 as f64 / n0 as f64).ln();
    for j in 0..d {
        bias -= 0.5 * weights[j] * (mu0[j] + mu1[j]);
    }

    Ok(LdaModel {
        weights,
        bias,
        lambda,
    })
}

pub fn predict(model: &LdaModel, matrix: &FeatureMatrix) -> Vec<f64> {
    let n = matrix.n_rows();
    let mut out = vec![model.bias; n];
    for (j, &wj) in model.weights.iter().enumerate() {
        if wj != 0.0 {
            for (o, &x) in out.iter_mut().zip(matrix.column(j)) {
                *o += wj * x;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Provenance;
    use crate::metrics::{auc_rank, TieMode};
    use crate::rng;
    use rand_distr::{Distribution, Normal};

    fn matrix(cols: Vec<Vec<f64>>) -> FeatureMatrix {
        let names = (0..cols.len()).map(|i| format!("f{i}")).collect();
        FeatureMatrix::new(names, cols, Provenance::default()).unwrap()
    }

    fn gaussian_classes(seed: u64, n_per_class: usize, d: usize, shift: f64) -> (FeatureMatrix, Vec<bool>) {
        let mut rng = rng::substream(seed, 0);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let n = 2 * n_per_class;
        let mut cols = vec![vec![0.0; n]; d];
        let mut labels = vec![false; n];
        for i in 0..n {
            let positive = i >= n_per_class;
            labels[i] = positive;
            for (j, col) in cols.iter_mut().enumerate() {
                let mean = if positive && j < 2 { shift } else { 0.0 };
                col[i] = mean + normal.sample(&mut rng);
            }
        }
        (matrix(cols), labels)
    }

    #[test]
    fn identity_covariance_classes_are_separated() {
        let (m, labels) = gaussian_classes(3, 150, 4, 2.5);
        let model = fit(&LdaParams::default(), &m, &labels).unwrap();
        let scores = predict(&model, &m);
        let auc = auc_rank(&scores, &labels, TieMode::Half).unwrap();
        assert!(auc > 0.95, "auc {auc}");
        // The identity target is exactly right for this data, so auto
        // shrinkage pushes hard toward it.
        assert!(model.lambda > 0.0 && model.lambda <= 1.0, "lambda {}", model.lambda);
    }

    #[test]
    fn full_shrinkage_matches_nearest_mean_direction() {
        // With lambda = 1 the covariance is a scaled identity, so the
        // discriminant reduces to projection on the class-mean difference.
        let (m, labels) = gaussian_classes(5, 100, 5, 1.5);
        let model = fit(
            &LdaParams {
                shrinkage: Shrinkage::Fixed(1.0),
            },
            &m,
            &labels,
        )
        .unwrap();

        // Oracle: closed-form discriminant on the same data.
        let n = m.n_rows();
        let n1 = labels.iter().filter(|&&y| y).count();
        let n0 = n - n1;
        let mut diff = vec![0.0; m.n_cols()];
        for j in 0..m.n_cols() {
            let col = m.column(j);
            let mut s0 = 0.0;
            let mut s1 = 0.0;
            for (i, &v) in col.iter().enumerate() {
                if labels[i] {
                    s1 += v;
                } else {
                    s0 += v;
                }
            }
            diff[j] = s1 / n1 as f64 - s0 / n0 as f64;
        }
        // Direction equality up to the positive scale 1/mu.
        let ratio = model.weights[0] / diff[0];
        assert!(ratio > 0.0);
        for j in 0..m.n_cols() {
            assert!(
                (model.weights[j] - ratio * diff[j]).abs() < 1e-9 * (1.0 + diff[j].abs()),
                "component {j}"
            );
        }
    }

    #[test]
    fn zero_shrinkage_beats_identity_on_correlated_noise() {
        // Two highly correlated features where the signal lives in the
        // difference; plain LDA must use the covariance to find it.
        let mut rng = rng::substream(9, 2);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let n = 400;
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut labels = vec![false; n];
        for i in 0..n {
            let shared: f64 = normal.sample(&mut rng);
            let private: f64 = normal.sample(&mut rng);
            labels[i] = i % 2 == 0;
            let shift = if labels[i] { 0.6 } else { 0.0 };
            a[i] = shared + 0.1 * private + shift;
            b[i] = shared - 0.1 * private;
        }
        let m = matrix(vec![a, b]);
        let full = fit(
            &LdaParams {
                shrinkage: Shrinkage::Mode(ShrinkageMode::None),
            },
            &m,
            &labels,
        )
        .unwrap();
        let auc = auc_rank(&predict(&full, &m), &labels, TieMode::Half).unwrap();
        assert!(auc > 0.9, "auc {auc}");
    }

    #[test]
    fn single_class_is_an_error() {
        let m = matrix(vec![vec![1.0, 2.0]]);
        assert!(fit(&LdaParams::default(), &m, &[false, false]).is_err());
    }

    #[test]
    fn cholesky_solves_a_known_system() {
        // A = [[4,2],[2,3]], b = [8, 7] -> x = [1.25, 1.5].
        let a = vec![4.0, 2.0, 2.0, 3.0];
        let b = vec![8.0, 7.0];
        let x = cholesky_solve(&a, &b, 2).unwrap();
        assert!((x[0] - 1.25).abs() < 1e-12);
        assert!((x[1] - 1.5).abs() < 1e-12);
    }
}
