//! Small file formats shared across commands: score files and label files.
//!
//! Both are two-column CSVs keyed by instance id, so blends and reports can
//! verify they are talking about the same instances.

use crate::data::{InstanceId, ScoreVector};
use crate::error::{Error, Result};
use std::io::{Read, Write};

pub fn write_scores<W: Write>(writer: W, ids: &[InstanceId], scores: &ScoreVector) -> Result<()> {
    if ids.len() != scores.len() {
        return Err(Error::Schema(format!(
            "{} ids for {} scores",
            ids.len(),
            scores.len()
        )));
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["instance_id", "score"])?;
    for (id, s) in ids.iter().zip(scores.iter()) {
        w.write_record([id.to_string(), s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scores<R: Read>(reader: R) -> Result<(Vec<InstanceId>, ScoreVector)> {
    let mut r = csv::Reader::from_reader(reader);
    check_header(&mut r, &["instance_id", "score"])?;
    let mut ids = Vec::new();
    let mut scores = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        ids.push(InstanceId(parse_cell(&rec, 0, i + 1, "instance_id")?));
        scores.push(parse_cell(&rec, 1, i + 1, "score")?);
    }
    Ok((ids, ScoreVector::new(scores)?))
}

pub fn write_labels<W: Write>(writer: W, ids: &[InstanceId], labels: &[bool]) -> Result<()> {
    if ids.len() != labels.len() {
        return Err(Error::Schema(format!(
            "{} ids for {} labels",
            ids.len(),
            labels.len()
        )));
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["instance_id", "label"])?;
    for (id, &y) in ids.iter().zip(labels) {
        w.write_record([id.to_string(), if y { "1".into() } else { "0".to_string() }])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_labels<R: Read>(reader: R) -> Result<(Vec<InstanceId>, Vec<bool>)> {
    let mut r = csv::Reader::from_reader(reader);
    check_header(&mut r, &["instance_id", "label"])?;
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        ids.push(InstanceId(parse_cell(&rec, 0, i + 1, "instance_id")?));
        let raw = rec.get(1).unwrap_or("");
        labels.push(match raw {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Parse {
                    row: i + 1,
                    column: "label".into(),
                    message: format!("expected 0 or 1, got {other:?}"),
                })
            }
        });
    }
    Ok((ids, labels))
}

fn check_header<R: Read>(r: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = r.headers()?.clone();
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(Error::Schema(format!(
            "expected header {expected:?}, found {got:?}"
        )));
    }
    Ok(())
}

fn parse_cell<T: std::str::FromStr>(
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
