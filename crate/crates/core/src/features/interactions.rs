//! Pairwise feature products.

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};

/// Canonical interaction column name: the lexicographically smaller input
/// first, so `(a, b)` and `(b, a)` name the same column.
pub fn interaction_name(a: &str, b: &str) -> String {
    if a <= b {
        format!("{a}*{b}")
    } else {
        format!("{b}*{a}")
    }
}

/// Append one product column per pair. Pairs naming the same canonical
/// interaction are deduplicated; unknown column names are an error.
pub fn make_interactions(
    matrix: &FeatureMatrix,
    pairs: &[(String, String)],
) -> Result<FeatureMatrix> {
    let mut out = matrix.clone();
    for (a, b) in pairs {
        let name = interaction_name(a, b);
        if out.index_of(&name).is_some() {
            continue;
        }
        let ca = matrix
            .column_by_name(a)
            .ok_or_else(|| Error::Schema(format!("unknown column {a:?}")))?;
        let cb = matrix
            .column_by_name(b)
            .ok_or_else(|| Error::Schema(format!("unknown column {b:?}")))?;
        let product = ca.iter().zip(cb).map(|(x, y)| x * y).collect();
        out.push_column(name, product)?;
    }
    Ok(out)
}

/// All unordered pairs of distinct names, in deterministic order.
pub fn all_pairs(names: &[String]) -> Vec<(String, String)> {
    let mut out = Vec::with_capacity(names.len() * (names.len().saturating_sub(1)) / 2);
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            out.push((names[i].clone(), names[j].clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Provenance;

    fn matrix(names: &[&str], cols: Vec<Vec<f64>>) -> FeatureMatrix {
        FeatureMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            cols,
            Provenance::new("test", "0"),
        )
        .unwrap()
    }

    #[test]
    fn self_pair_squares() {
        let m = matrix(&["x"], vec![vec![2.0, -3.0]]);
        let out = make_interactions(&m, &[("x".into(), "x".into())]).unwrap();
        assert_eq!(out.column_by_name("x*x").unwrap(), &[4.0, 9.0]);
    }

    #[test]
    fn ones_pair_copies() {
        let m = matrix(&["x", "ones"], vec![vec![2.0, 5.0], vec![1.0, 1.0]]);
        let out = make_interactions(&m, &[("x".into(), "ones".into())]).unwrap();
        assert_eq!(out.column_by_name("ones*x").unwrap(), &[2.0, 5.0]);
    }

    #[test]
    fn unknown_column_is_an_error() {
        let m = matrix(&["x"], vec![vec![1.0]]);
        assert!(make_interactions(&m, &[("x".into(), "y".into())]).is_err());
    }

    #[test]
    fn all_unordered_pairs_of_ten_columns_is_45() {
        // Oracle: C(10, 2).
        let names: Vec<String> = (0..10).map(|i| format!("c{i}")).collect();
        let pairs = all_pairs(&names);
        assert_eq!(pairs.len(), 45);

        let cols: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 1.0]).collect();
        let m = FeatureMatrix::new(names, cols, Provenance::new("t", "0")).unwrap();
        let out = make_interactions(&m, &pairs).unwrap();
        assert_eq!(out.n_cols(), 10 + 45);
    }

    #[test]
    fn reversed_pairs_deduplicate() {
        let m = matrix(&["a", "b"], vec![vec![2.0], vec![3.0]]);
        let out =
            make_interactions(&m, &[("a".into(), "b".into()), ("b".into(), "a".into())]).unwrap();
        assert_eq!(out.n_cols(), 3);
    }
}
