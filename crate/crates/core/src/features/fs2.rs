//! Feature set 2: multi-window summaries appended to the raw series.
//!
//! The `max*` geophone series are dropped (they track the corresponding
//! averages closely); the 14 remaining series families get
//! min/max/std/nonzero-indicator/hours-since-nonzero over the last 2, 4, 8
//! and 24 hours, appended to the raw hourly values they were computed
//! from. The two `avg_difference_in_*` series additionally contribute
//! absolute maxima over the last 2 and 24 hours. Categoricals are one-hot
//! encoded. Documented arity: 14 x 20 + 14 x 24 + 4 + 8 + 16 = 644.

use super::encode::{assessment_columns, Encoding};
use super::stats::{window_stat, Stat, WindowSpec};
use super::ExtractorConfig;
use crate::data::{Dataset, FeatureMatrix, SeriesId, GENERAL_FIELDS, HOURS_PER_WINDOW};
use crate::error::Result;

/// The 14 series families summarized by FS2 (and reused by FS3).
pub(crate) const FAMILIES: [SeriesId; 14] = [
    SeriesId::CountE2,
    SeriesId::CountE3,
    SeriesId::CountE4,
    SeriesId::CountE5,
    SeriesId::CountE6Plus,
    SeriesId::SumE2,
    SeriesId::SumE3,
    SeriesId::SumE4,
    SeriesId::SumE5,
    SeriesId::SumE6Plus,
    SeriesId::NumberOfRockBursts,
    SeriesId::NumberOfDestressingBlasts,
    SeriesId::AvgGactivity,
    SeriesId::AvgGenergy,
];

pub(crate) const WINDOWS: [usize; 4] = [2, 4, 8, 24];
pub(crate) const BASE_STATS: [Stat; 5] = [
    Stat::Min,
    Stat::Max,
    Stat::Std,
    Stat::NonzeroIndicator,
    Stat::HoursSinceLastNonzero,
];

pub fn extract(dataset: &Dataset, config: &ExtractorConfig) -> Result<FeatureMatrix> {
    let records = dataset.records();
    let mut m = FeatureMatrix::empty(records.len(), config.provenance());

    for id in FAMILIES {
        let name = id.name();
        for len in WINDOWS {
            let spec = WindowSpec::last(len);
            for stat in BASE_STATS {
                let col = records
                    .iter()
                    .map(|r| window_stat(r.hourly.get(id), &spec, stat))
                    .collect();
                m.push_column(format!("{name}_{}_{}", stat.label(), spec.label()), col)?;
            }
        }
        // The raw hourly values the statistics were computed from.
        for h in 1..=HOURS_PER_WINDOW {
            let col = records.iter().map(|r| r.hourly.get(id)[h - 1]).collect();
            m.push_column(format!("{name}.{h}"), col)?;
        }
    }

    for id in [
        SeriesId::AvgDifferenceInGactivity,
        SeriesId::AvgDifferenceInGenergy,
    ] {
        for len in [2, 24] {
            let spec = WindowSpec::last(len);
            let col = records
                .iter()
                .map(|r| window_stat(r.hourly.get(id), &spec, Stat::AbsMax))
                .collect();
            m.push_column(format!("{}_abs_max_{}", id.name(), spec.label()), col)?;
        }
    }

    for (f, name) in GENERAL_FIELDS.iter().enumerate() {
        m.push_column(*name, records.iter().map(|r| r.scalars.general[f]).collect())?;
    }

    for (name, col) in assessment_columns(dataset, Encoding::OneHot) {
        m.push_column(name, col)?;
    }

    Ok(m)
}

/// Documented arity of the FS2 grid.
pub fn arity() -> usize {
    FAMILIES.len() * (WINDOWS.len() * BASE_STATS.len() + HOURS_PER_WINDOW) + 2 * 2 + 8 + 16
}
