//! Feature set 4: deliberately simple, to leave little room for
//! overfitting.
//!
//! Only the quantity (count) and maximum series are used; averages and
//! sums are left out. Each gets max and std over 8-hour windows at 4-hour
//! increments (offsets 0, 4, 8, 12, 16). Of the scalars,
//! `main_working_id` is dropped; of the metadata, only
//! `geological_assessment` is kept. Documented arity with ordinal
//! encoding: 13 x 2 x 5 + 8 + 4 + 1 = 143.

use super::encode::assessment_columns;
use super::stats::{window_stat, Stat, WindowSpec};
use super::ExtractorConfig;
use crate::data::{Dataset, FeatureMatrix, MetadataMap, SeriesId, GENERAL_FIELDS};
use crate::error::{Error, Result};

/// Count-type and max-type series.
const QUANTITY_AND_MAX: [SeriesId; 13] = [
    SeriesId::CountE2,
    SeriesId::CountE3,
    SeriesId::CountE4,
    SeriesId::CountE5,
    SeriesId::CountE6Plus,
    SeriesId::TotalNumberOfBumps,
    SeriesId::NumberOfRockBursts,
    SeriesId::NumberOfDestressingBlasts,
    SeriesId::HighestBumpEnergy,
    SeriesId::MaxGactivity,
    SeriesId::MaxGenergy,
    SeriesId::MaxDifferenceInGactivity,
    SeriesId::MaxDifferenceInGenergy,
];

const OFFSETS: [usize; 5] = [0, 4, 8, 12, 16];
const WINDOW_LEN: usize = 8;

pub fn extract(
    dataset: &Dataset,
    metadata: &MetadataMap,
    config: &ExtractorConfig,
) -> Result<FeatureMatrix> {
    let records = dataset.records();
    let mut m = FeatureMatrix::empty(records.len(), config.provenance());

    for id in QUANTITY_AND_MAX {
        let name = id.name();
        for offset in OFFSETS {
            let spec = WindowSpec::with_offset(WINDOW_LEN, offset);
            for stat in [Stat::Max, Stat::Std] {
                let col = records
                    .iter()
                    .map(|r| window_stat(r.hourly.get(id), &spec, stat))
                    .collect();
                m.push_column(format!("{name}_{}_{}", stat.label(), spec.label()), col)?;
            }
        }
    }

    for (f, name) in GENERAL_FIELDS.iter().enumerate() {
        m.push_column(*name, records.iter().map(|r| r.scalars.general[f]).collect())?;
    }

    for (name, col) in assessment_columns(dataset, config.encoding) {
        m.push_column(name, col)?;
    }

    let geo = records
        .iter()
        .map(|r| {
            metadata
                .get(&r.location)
                .map(|meta| meta.geological_assessment.ordinal())
                .ok_or_else(|| Error::Schema(format!("missing metadata for location {}", r.location)))
        })
        .collect::<Result<Vec<f64>>>()?;
    m.push_column("geological_assessment", geo)?;

    Ok(m)
}

pub fn arity(config: &ExtractorConfig) -> usize {
    let encoding_cols = match config.encoding {
        super::Encoding::OneHot => 16,
        super::Encoding::Ordinal => 4,
    };
    QUANTITY_AND_MAX.len() * OFFSETS.len() * 2 + 8 + encoding_cols + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::blank_record;
    use crate::data::DatasetMode;
    use crate::features::fs1::tests::meta_for;
    use crate::features::FeatureSet;

    fn config() -> ExtractorConfig {
        ExtractorConfig::for_set(FeatureSet::Fs4)
    }

    #[test]
    fn all_zero_dataset_gives_zero_aggregates() {
        let ds = Dataset::new(vec![blank_record(1, 7)], DatasetMode::Independent).unwrap();
        let m = extract(&ds, &meta_for(&[7]), &config()).unwrap();
        for offset in OFFSETS {
            let name = format!("max_genergy_max_w8o{offset}");
            let lookup = if offset == 0 { "max_genergy_max_w8".to_string() } else { name };
            assert_eq!(m.column_by_name(&lookup).unwrap(), &[0.0]);
        }
    }

    #[test]
    fn spike_at_hour_24_hits_only_the_zero_offset_window() {
        let mut r = blank_record(1, 7);
        r.hourly.set_hour(SeriesId::HighestBumpEnergy, 23, 900.0);
        let ds = Dataset::new(vec![r], DatasetMode::Independent).unwrap();
        let m = extract(&ds, &meta_for(&[7]), &config()).unwrap();
        assert_eq!(
            m.column_by_name("highest_bump_energy_max_w8").unwrap(),
            &[900.0]
        );
        for offset in [4, 8, 12, 16] {
            let col = m
                .column_by_name(&format!("highest_bump_energy_max_w8o{offset}"))
                .unwrap();
            assert_eq!(col, &[0.0], "offset {offset}");
        }
    }

    #[test]
    fn column_count_matches_documented_arity() {
        let ds = Dataset::new(vec![blank_record(1, 7)], DatasetMode::Independent).unwrap();
        let m = extract(&ds, &meta_for(&[7]), &config()).unwrap();
        assert_eq!(m.n_cols(), arity(&config()));
        assert_eq!(arity(&config()), 143);
        assert!(m.index_of("main_working_id").is_none());
    }
}
