//! Feature-matrix persistence: CSV plus a sidecar manifest.
//!
//! The manifest names the extractor, its config hash and the full column
//! list, so a predict run can verify it is feeding a model the columns it
//! was trained on.

use crate::data::{FeatureMatrix, InstanceId, Provenance};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixManifest {
    pub extractor: String,
    pub config_hash: String,
    pub columns: Vec<String>,
}

impl MatrixManifest {
    pub fn from_matrix(matrix: &FeatureMatrix) -> MatrixManifest {
        MatrixManifest {
            extractor: matrix.provenance().extractor.clone(),
            config_hash: matrix.provenance().config_hash.clone(),
            columns: matrix.names().to_vec(),
        }
    }

    pub fn verify(&self, matrix: &FeatureMatrix) -> Result<()> {
        if self.columns != matrix.names() {
            return Err(Error::Schema(
                "matrix columns do not match the manifest".into(),
            ));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Schema(format!("manifest: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<MatrixManifest> {
        toml::from_str(text).map_err(|e| Error::Schema(format!("manifest: {e}")))
    }
}

/// Write `instance_id` plus one column per feature. Floats use the shortest
/// round-trip representation, so rereads are bit-exact.
pub fn write_matrix_csv<W: Write>(
    writer: W,
    ids: &[InstanceId],
    matrix: &FeatureMatrix,
) -> Result<()> {
    if ids.len() != matrix.n_rows() {
        return Err(Error::Schema(format!(
            "{} ids for {} rows",
            ids.len(),
            matrix.n_rows()
        )));
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["instance_id".to_string()];
    header.extend(matrix.names().iter().cloned());
    w.write_record(&header)?;
    for (row, id) in ids.iter().enumerate() {
        let mut rec = Vec::with_capacity(matrix.n_cols() + 1);
        rec.push(id.to_string());
        for col in 0..matrix.n_cols() {
            rec.push(matrix.value(row, col).to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a matrix CSV back; provenance is restored from the manifest.
pub fn read_matrix_csv<R: Read>(
    reader: R,
    manifest: &MatrixManifest,
) -> Result<(Vec<InstanceId>, FeatureMatrix)> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let mut expected = vec!["instance_id".to_string()];
    expected.extend(manifest.columns.iter().cloned());
    if header != expected {
        return Err(Error::Schema(
            "feature CSV header does not match the manifest".into(),
        ));
    }
    let n_cols = manifest.columns.len();
    let mut ids = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); n_cols];
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let id: u64 = parse(&rec, 0, row, "instance_id")?;
        ids.push(InstanceId(id));
        for c in 0..n_cols {
            columns[c].push(parse(&rec, c + 1, row, &manifest.columns[c])?);
        }
    }
    let matrix = FeatureMatrix::new(
        manifest.columns.clone(),
        columns,
        Provenance::new(manifest.extractor.clone(), manifest.config_hash.clone()),
    )?;
    Ok((ids, matrix))
}

fn parse<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    col: usize,
    row: usize,
    name: &str,
) -> Result<T> {
    let raw = rec.get(col).ok_or_else(|| Error::Parse {
        row,
        column: name.into(),
        message: "missing cell".into(),
    })?;
    raw.parse().map_err(|_| Error::Parse {
        row,
        column: name.into(),
        message: format!("cannot parse {raw:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trips_bit_exact() {
        let matrix = FeatureMatrix::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.1, 2.0e-17, 3.5], vec![1.0 / 3.0, -7.25, 0.0]],
            Provenance::new("fs4", "abc"),
        )
        .unwrap();
        let ids: Vec<InstanceId> = (0..3).map(InstanceId).collect();
        let manifest = MatrixManifest::from_matrix(&matrix);

        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, &ids, &matrix).unwrap();
        let (ids2, matrix2) = read_matrix_csv(buf.as_slice(), &manifest).unwrap();
        assert_eq!(ids, ids2);
        assert_eq!(matrix, matrix2);
        manifest.verify(&matrix2).unwrap();
    }

    #[test]
    fn manifest_mismatch_is_detected() {
        let matrix = FeatureMatrix::new(
            vec!["a".into()],
            vec![vec![1.0]],
            Provenance::new("fs4", "abc"),
        )
        .unwrap();
        let mut manifest = MatrixManifest::from_matrix(&matrix);
        manifest.columns = vec!["other".into()];
        assert!(manifest.verify(&matrix).is_err());
    }
}
