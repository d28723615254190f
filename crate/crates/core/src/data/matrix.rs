//! Named numeric feature matrices; the only input learners see.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Which extractor produced a matrix, and under which configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Provenance {
    pub extractor: String,
    pub config_hash: String,
}

impl Provenance {
    pub fn new(extractor: impl Into<String>, config_hash: impl Into<String>) -> Self {
        Provenance {
            extractor: extractor.into(),
            config_hash: config_hash.into(),
        }
    }
}

/// `n` rows by `d` uniquely named columns of finite reals, stored
/// column-major (learners scan columns far more often than rows).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    provenance: Provenance,
    /// Row count for matrices that do not have any columns yet.
    #[serde(skip)]
    n_rows_hint: Option<usize>,
}

impl FeatureMatrix {
    pub fn new(
        names: Vec<String>,
        columns: Vec<Vec<f64>>,
        provenance: Provenance,
    ) -> Result<FeatureMatrix> {
        if names.len() != columns.len() {
            return Err(Error::Schema(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let mut seen = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if let Some(prev) = seen.insert(name.clone(), i) {
                return Err(Error::Schema(format!(
                    "duplicate column name {name:?} at positions {prev} and {i}"
                )));
            }
        }
        let n_rows = columns.first().map(Vec::len).unwrap_or(0);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(Error::Schema(format!(
                    "column {name:?} has {} rows, expected {n_rows}",
                    col.len()
                )));
            }
            if let Some(v) = col.iter().find(|v| !v.is_finite()) {
                return Err(Error::Schema(format!(
                    "column {name:?} contains a non-finite value {v}"
                )));
            }
        }
        Ok(FeatureMatrix {
            names,
            columns,
            provenance,
            n_rows_hint: None,
        })
    }

    /// An `n x 0` matrix to push columns into.
    pub fn empty(n_rows: usize, provenance: Provenance) -> FeatureMatrix {
        FeatureMatrix {
            names: Vec::new(),
            columns: Vec::new(),
            provenance,
            n_rows_hint: Some(n_rows),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.columns
            .first()
            .map(Vec::len)
            .or(self.n_rows_hint)
            .unwrap_or(0)
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn column(&self, idx: usize) -> &[f64] {
        &self.columns[idx]
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.index_of(name).map(|i| self.column(i))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }

    /// One row as a dense vector; allocates, intended for small matrices.
    pub fn row(&self, row: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[row]).collect()
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if self.names.iter().any(|n| *n == name) {
            return Err(Error::Schema(format!("duplicate column name {name:?}")));
        }
        let expect = self.n_rows();
        if !self.columns.is_empty() || self.n_rows_hint.is_some() {
            if values.len() != expect {
                return Err(Error::Schema(format!(
                    "column {name:?} has {} rows, expected {expect}",
                    values.len()
                )));
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Schema(format!(
                "column {name:?} contains a non-finite value {v}"
            )));
        }
        self.names.push(name);
        self.columns.push(values);
        Ok(())
    }

    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect())
            .collect();
        FeatureMatrix {
            names: self.names.clone(),
            columns,
            provenance: self.provenance.clone(),
            n_rows_hint: Some(rows.len()),
        }
    }

    pub fn select_columns(&self, indices: &[usize]) -> Result<FeatureMatrix> {
        let mut names = Vec::with_capacity(indices.len());
        let mut columns = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n_cols() {
                return Err(Error::Schema(format!("column index {i} out of range")));
            }
            names.push(self.names[i].clone());
            columns.push(self.columns[i].clone());
        }
        FeatureMatrix::new(names, columns, self.provenance.clone())
    }

    pub fn select_by_names(&self, names: &[String]) -> Result<FeatureMatrix> {
        let indices = names
            .iter()
            .map(|n| {
                self.index_of(n)
                    .ok_or_else(|| Error::Schema(format!("unknown column {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.select_columns(&indices)
    }

    /// Append all columns of `other` (same row count, disjoint names).
    pub fn hstack(&self, other: &FeatureMatrix) -> Result<FeatureMatrix> {
        let mut out = self.clone();
        for (name, col) in other.names.iter().zip(&other.columns) {
            out.push_column(name.clone(), col.clone())?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(names: &[&str], cols: Vec<Vec<f64>>) -> FeatureMatrix {
        FeatureMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            cols,
            Provenance::new("test", "0"),
        )
        .unwrap()
    }

    #[test]
    fn duplicate_names_rejected() {
        let res = FeatureMatrix::new(
            vec!["a".into(), "a".into()],
            vec![vec![1.0], vec![2.0]],
            Provenance::default(),
        );
        assert!(res.is_err());
    }

    #[test]
    fn nan_rejected() {
        let res = FeatureMatrix::new(
            vec!["a".into()],
            vec![vec![f64::NAN]],
            Provenance::default(),
        );
        assert!(res.is_err());
    }

    #[test]
    fn row_and_column_access_agree() {
        let mx = m(&["a", "b"], vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(mx.row(1), vec![2.0, 4.0]);
        assert_eq!(mx.column_by_name("b").unwrap(), &[3.0, 4.0]);
    }

    #[test]
    fn select_rows_keeps_order() {
        let mx = m(&["a"], vec![vec![10.0, 20.0, 30.0]]);
        let sub = mx.select_rows(&[2, 0]);
        assert_eq!(sub.column(0), &[30.0, 10.0]);
    }
}
