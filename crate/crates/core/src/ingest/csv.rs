//! Manifest-driven CSV parsing and writing for datasets and metadata.
//!
//! The exact byte layout of the source files is configurable: a
//! [`ColumnManifest`] lists the expected columns in order, and the parser
//! refuses headers that do not match. [`ColumnManifest::standard`] gives
//! the documented default ordering used by everything in this crate:
//!
//! `instance_id, chrono, main_working_id, <4 assessments>, <8 general>,
//! <series.1 .. series.24 for each of the 22 series>[, label]`

use crate::data::remap_geological_assessment;
use crate::data::{
    blank_record, validate_instance, AssessmentLevel, Dataset, DatasetMode, InstanceId,
    InstanceRecord, LocationId, LocationMetadata, MetadataMap, SeriesId, ASSESSMENT_FIELDS,
    GENERAL_FIELDS, HOURS_PER_WINDOW,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Ordered list of expected dataset columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnManifest {
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Role {
    InstanceId,
    Chrono,
    MainWorkingId,
    Assessment(usize),
    General(usize),
    Hourly(SeriesId, usize),
    Label,
}

impl ColumnManifest {
    /// The documented default layout; `labeled` appends the label column.
    pub fn standard(labeled: bool) -> ColumnManifest {
        let mut columns = vec!["instance_id".to_string(), "chrono".to_string(), "main_working_id".to_string()];
        columns.extend(ASSESSMENT_FIELDS.iter().map(|s| s.to_string()));
        columns.extend(GENERAL_FIELDS.iter().map(|s| s.to_string()));
        for id in SeriesId::ALL {
            for h in 1..=HOURS_PER_WINDOW {
                columns.push(format!("{}.{h}", id.name()));
            }
        }
        if labeled {
            columns.push("label".to_string());
        }
        ColumnManifest { columns }
    }

    pub fn is_labeled(&self) -> bool {
        self.columns.iter().any(|c| c == "label")
    }

    fn roles(&self) -> Result<Vec<Role>> {
        self.columns
            .iter()
            .map(|name| {
                if name == "instance_id" {
                    return Ok(Role::InstanceId);
                }
                if name == "chrono" {
                    return Ok(Role::Chrono);
                }
                if name == "main_working_id" {
                    return Ok(Role::MainWorkingId);
                }
                if name == "label" {
                    return Ok(Role::Label);
                }
                if let Some(i) = ASSESSMENT_FIELDS.iter().position(|f| f == name) {
                    return Ok(Role::Assessment(i));
                }
                if let Some(i) = GENERAL_FIELDS.iter().position(|f| f == name) {
                    return Ok(Role::General(i));
                }
                if let Some((series, hour)) = name.rsplit_once('.') {
                    if let (Some(id), Ok(h)) = (SeriesId::from_name(series), hour.parse::<usize>())
                    {
                        if (1..=HOURS_PER_WINDOW).contains(&h) {
                            return Ok(Role::Hourly(id, h - 1));
                        }
                    }
                }
                Err(Error::Schema(format!("unknown column {name:?} in manifest")))
            })
            .collect()
    }
}

/// Parse a dataset CSV against a manifest. Every schema problem is
/// reported with its (1-based data row, column name) location; record
/// invariants are checked as rows are built.
pub fn parse_dataset_csv<R: Read>(
    reader: R,
    manifest: &ColumnManifest,
    mode: DatasetMode,
) -> Result<Dataset> {
    let roles = manifest.roles()?;
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != manifest.columns {
        for want in &manifest.columns {
            if !header.contains(want) {
                return Err(Error::Schema(format!("missing column {want:?}")));
            }
        }
        return Err(Error::Schema(
            "header does not match the manifest column order".into(),
        ));
    }

    let labeled = manifest.is_labeled();
    let mut records = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        if rec.len() != roles.len() {
            return Err(Error::Schema(format!(
                "row {row} has {} cells, expected {}",
                rec.len(),
                roles.len()
            )));
        }
        let mut out = blank_record(0, 0);
        out.label = if labeled { Some(false) } else { None };
        for (col, role) in roles.iter().enumerate() {
            let raw = rec.get(col).unwrap_or("");
            let colname = &manifest.columns[col];
            let fail = |message: String| Error::Parse {
                row,
                column: colname.clone(),
                message,
            };
            match *role {
                Role::InstanceId => {
                    out.id = InstanceId(raw.parse().map_err(|_| fail(format!("bad id {raw:?}")))?)
                }
                Role::Chrono => {
                    out.chrono = if raw.is_empty() {
                        None
                    } else {
                        Some(raw.parse().map_err(|_| fail(format!("bad index {raw:?}")))?)
                    }
                }
                Role::MainWorkingId => {
                    let id =
                        LocationId(raw.parse().map_err(|_| fail(format!("bad id {raw:?}")))?);
                    out.location = id;
                    out.scalars.main_working_id = id;
                }
                Role::Assessment(f) => {
                    out.scalars.assessments[f] = AssessmentLevel::from_letter(raw)
                        .map_err(|e| fail(e.to_string()))?
                }
                Role::General(f) => {
                    out.scalars.general[f] =
                        raw.parse().map_err(|_| fail(format!("non-numeric cell {raw:?}")))?
                }
                Role::Hourly(id, h) => {
                    let v: f64 =
                        raw.parse().map_err(|_| fail(format!("non-numeric cell {raw:?}")))?;
                    out.hourly.set_hour(id, h, v);
                }
                Role::Label => {
                    out.label = Some(match raw {
                        "0" => false,
                        "1" => true,
                        _ => return Err(fail(format!("label must be 0 or 1, got {raw:?}"))),
                    })
                }
            }
        }
        if let Some(violation) = validate_instance(&out).into_iter().next() {
            return Err(Error::Parse {
                row,
                column: violation.field.clone(),
                message: violation.to_string(),
            });
        }
        records.push(out);
    }
    Dataset::new(records, mode)
}

/// Write a dataset in the standard layout (labels included when present).
pub fn write_dataset_csv<W: Write>(writer: W, dataset: &Dataset) -> Result<()> {
    let manifest = ColumnManifest::standard(dataset.is_labeled());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(&manifest.columns)?;
    let roles = manifest.roles()?;
    for rec in dataset.records() {
        let mut cells = Vec::with_capacity(roles.len());
        for role in &roles {
            cells.push(match *role {
                Role::InstanceId => rec.id.to_string(),
                Role::Chrono => rec.chrono.map(|c| c.to_string()).unwrap_or_default(),
                Role::MainWorkingId => rec.location.to_string(),
                Role::Assessment(f) => rec.scalars.assessments[f].letter().to_string(),
                Role::General(f) => rec.scalars.general[f].to_string(),
                Role::Hourly(id, h) => rec.hourly.get(id)[h].to_string(),
                Role::Label => if rec.label == Some(true) { "1" } else { "0" }.to_string(),
            });
        }
        w.write_record(&cells)?;
    }
    w.flush()?;
    Ok(())
}

const METADATA_COLUMNS: [&str; 7] = [
    "main_working_id",
    "main_working_name",
    "region_name",
    "bed_name",
    "main_working_type",
    "main_working_height",
    "geological_assessment",
];

/// Parse the per-location metadata file. All rows are passed through the
/// geological-assessment remap, so downstream code only ever sees `a`/`b`.
pub fn parse_metadata_csv<R: Read>(reader: R) -> Result<MetadataMap> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<&str> = r.headers()?.iter().collect();
    if header != METADATA_COLUMNS {
        return Err(Error::Schema(format!(
            "metadata header {header:?} does not match {METADATA_COLUMNS:?}"
        )));
    }
    let mut map = MetadataMap::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let cell = |col: usize| rec.get(col).unwrap_or("").to_string();
        let fail = |column: &str, message: String| Error::Parse {
            row,
            column: column.into(),
            message,
        };
        let id = LocationId(
            cell(0)
                .parse()
                .map_err(|_| fail("main_working_id", format!("bad id {:?}", cell(0))))?,
        );
        let height: f64 = cell(5)
            .parse()
            .map_err(|_| fail("main_working_height", format!("non-numeric {:?}", cell(5))))?;
        let assessment = AssessmentLevel::from_letter(&cell(6))
            .map_err(|e| fail("geological_assessment", e.to_string()))?;
        let meta = remap_geological_assessment(&LocationMetadata {
            main_working_id: id,
            main_working_name: cell(1),
            region_name: cell(2),
            bed_name: cell(3),
            main_working_type: cell(4),
            main_working_height: height,
            geological_assessment: assessment,
        });
        meta.validate()
            .map_err(|e| fail("main_working_height", e.to_string()))?;
        if map.insert(id, meta).is_some() {
            return Err(Error::Schema(format!("duplicate location id {id}")));
        }
    }
    Ok(map)
}

pub fn write_metadata_csv<W: Write>(writer: W, metadata: &MetadataMap) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(METADATA_COLUMNS)?;
    for meta in metadata.values() {
        w.write_record([
            meta.main_working_id.to_string(),
            meta.main_working_name.clone(),
            meta.region_name.clone(),
            meta.bed_name.clone(),
            meta.main_working_type.clone(),
            meta.main_working_height.to_string(),
            meta.geological_assessment.letter().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

// Re-exported for fixture construction in tests.
#[doc(hidden)]
pub fn record_with(
    id: u64,
    location: u32,
    chrono: u64,
    label: bool,
    mut fill: impl FnMut(&mut InstanceRecord),
) -> InstanceRecord {
    let mut r = blank_record(id, location);
    r.chrono = Some(chrono);
    r.label = Some(label);
    fill(&mut r);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_dataset() -> Dataset {
        let records = (0..3)
            .map(|i| {
                record_with(i, 725, 24 + i, i == 2, |r| {
                    r.hourly.set_hour(SeriesId::SumE3, 5, 300.0 + i as f64);
                    r.hourly.set_hour(SeriesId::CountE3, 5, 1.0);
                    r.scalars.general[3] = 0.125 + i as f64;
                })
            })
            .collect();
        Dataset::new(records, DatasetMode::Contiguous).unwrap()
    }

    #[test]
    fn three_row_file_parses_to_three_records() {
        let mut buf = Vec::new();
        write_dataset_csv(&mut buf, &small_dataset()).unwrap();
        let ds = parse_dataset_csv(
            buf.as_slice(),
            &ColumnManifest::standard(true),
            DatasetMode::Contiguous,
        )
        .unwrap();
        assert_eq!(ds.len(), 3);
        assert!(ds.is_labeled());
    }

    #[test]
    fn round_trip_is_identity() {
        let ds = small_dataset();
        let mut buf = Vec::new();
        write_dataset_csv(&mut buf, &ds).unwrap();
        let back = parse_dataset_csv(
            buf.as_slice(),
            &ColumnManifest::standard(true),
            DatasetMode::Contiguous,
        )
        .unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn missing_label_column_is_named() {
        let ds = small_dataset();
        let mut buf = Vec::new();
        write_dataset_csv(&mut buf, &ds).unwrap();
        // Ask for a labeled parse of an unlabeled header.
        let unlabeled = {
            let mut records = ds.records().to_vec();
            for r in &mut records {
                r.label = None;
            }
            Dataset::new(records, DatasetMode::Contiguous).unwrap()
        };
        let mut buf2 = Vec::new();
        write_dataset_csv(&mut buf2, &unlabeled).unwrap();
        let err = parse_dataset_csv(
            buf2.as_slice(),
            &ColumnManifest::standard(true),
            DatasetMode::Contiguous,
        )
        .unwrap_err();
        assert!(err.to_string().contains("label"), "{err}");
    }

    #[test]
    fn corrupt_cell_reports_row_and_column() {
        let ds = small_dataset();
        let mut buf = Vec::new();
        write_dataset_csv(&mut buf, &ds).unwrap();
        let text = String::from_utf8(buf).unwrap();
        // Oracle: the mutation coordinates. Row 2's count_e3.12 cell.
        let mutated = {
            let mut lines: Vec<String> = text.lines().map(String::from).collect();
            let header: Vec<&str> = lines[0].split(',').collect();
            let col = header.iter().position(|c| *c == "count_e3.12").unwrap();
            let mut cells: Vec<String> = lines[2].split(',').map(String::from).collect();
            cells[col] = "x".into();
            lines[2] = cells.join(",");
            lines.join("\n")
        };
        let err = parse_dataset_csv(
            mutated.as_bytes(),
            &ColumnManifest::standard(true),
            DatasetMode::Contiguous,
        )
        .unwrap_err();
        match err {
            Error::Parse { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "count_e3.12");
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn metadata_round_trip_remap_and_duplicates() {
        let csv = "main_working_id,main_working_name,region_name,bed_name,main_working_type,main_working_height,geological_assessment\n\
                   725,W-1,R-1,B-1,longwall,2.8,c\n\
                   777,W-2,R-1,B-2,longwall,3.1,a\n";
        let map = parse_metadata_csv(csv.as_bytes()).unwrap();
        assert_eq!(map.len(), 2);
        // Remap applied on entry.
        assert_eq!(
            map[&LocationId(725)].geological_assessment,
            AssessmentLevel::B
        );

        let mut buf = Vec::new();
        write_metadata_csv(&mut buf, &map).unwrap();
        let again = parse_metadata_csv(buf.as_slice()).unwrap();
        assert_eq!(map, again);

        let dup = "main_working_id,main_working_name,region_name,bed_name,main_working_type,main_working_height,geological_assessment\n\
                   725,W-1,R-1,B-1,longwall,2.8,a\n\
                   725,W-1,R-1,B-1,longwall,2.8,a\n";
        let err = parse_metadata_csv(dup.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("725"));

        let bad_height = "main_working_id,main_working_name,region_name,bed_name,main_working_type,main_working_height,geological_assessment\n\
                   725,W-1,R-1,B-1,longwall,-1.5,a\n";
        assert!(parse_metadata_csv(bad_height.as_bytes()).is_err());
    }
}
