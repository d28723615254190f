//! Feature set 1: aggregation-focused compression of the hourly series.
//!
//! Documented default grid (129 columns):
//!
//! - 8 general features, passed through;
//! - 4 assessments as ordinal integers plus their average (5);
//! - `main_working_height` with Gaussian noise (1);
//! - per energy band: 24-hour count sum, energy sum and mean energy (15);
//! - 24-hour sums of bumps, rock bursts, destressing blasts and highest
//!   bump energies (4);
//! - per geophone series: whole-window mean/std/max (plus abs-mean and
//!   abs-max for the four difference series, which can be negative),
//!   short-window means over the last 2..=6 hours, the last-hour value,
//!   and std + regression slope over the last 5 hours (4 x 11 + 4 x 13 =
//!   96). The short windows follow the importance analysis: hours nearest
//!   the forecast period carry most of the signal.

use super::encode::{assessment_average, assessment_columns, Encoding};
use super::noise::add_height_noise;
use super::stats::{mean_energy, window_stat, Stat, WindowSpec};
use super::ExtractorConfig;
use crate::data::{Dataset, FeatureMatrix, MetadataMap, SeriesId, GENERAL_FIELDS};
use crate::error::{Error, Result};

const BAND_NAMES: [&str; 5] = ["e2", "e3", "e4", "e5", "e6plus"];

fn difference_series(id: SeriesId) -> bool {
    matches!(
        id,
        SeriesId::MaxDifferenceInGactivity
            | SeriesId::MaxDifferenceInGenergy
            | SeriesId::AvgDifferenceInGactivity
            | SeriesId::AvgDifferenceInGenergy
    )
}

pub fn extract(
    dataset: &Dataset,
    metadata: &MetadataMap,
    config: &ExtractorConfig,
) -> Result<FeatureMatrix> {
    let n = dataset.len();
    let mut m = FeatureMatrix::empty(n, config.provenance());
    let records = dataset.records();

    for (f, name) in GENERAL_FIELDS.iter().enumerate() {
        m.push_column(*name, records.iter().map(|r| r.scalars.general[f]).collect())?;
    }

    for (name, col) in assessment_columns(dataset, Encoding::Ordinal) {
        m.push_column(name, col)?;
    }
    m.push_column("assessment_mean", assessment_average(dataset))?;

    let heights = records
        .iter()
        .map(|r| {
            metadata
                .get(&r.location)
                .map(|meta| meta.main_working_height)
                .ok_or_else(|| Error::Schema(format!("missing metadata for location {}", r.location)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let ids: Vec<_> = records.iter().map(|r| r.id).collect();
    m.push_column(
        "main_working_height_noised",
        add_height_noise(&heights, &ids, config.height_noise_sigma, config.noise_seed),
    )?;

    let full = WindowSpec::full();
    for (band, (&count_id, &sum_id)) in SeriesId::COUNT_BANDS
        .iter()
        .zip(SeriesId::SUM_BANDS.iter())
        .enumerate()
    {
        let counts: Vec<f64> = records
            .iter()
            .map(|r| window_stat(r.hourly.get(count_id), &full, Stat::Mean) * 24.0)
            .collect();
        let sums: Vec<f64> = records
            .iter()
            .map(|r| window_stat(r.hourly.get(sum_id), &full, Stat::Mean) * 24.0)
            .collect();
        let means: Vec<f64> = records
            .iter()
            .map(|r| mean_energy(r.hourly.get(sum_id), r.hourly.get(count_id), &full))
            .collect();
        let b = BAND_NAMES[band];
        m.push_column(format!("count_{b}_sum24"), counts)?;
        m.push_column(format!("sum_{b}_sum24"), sums)?;
        m.push_column(format!("mean_energy_{b}"), means)?;
    }

    for id in [
        SeriesId::TotalNumberOfBumps,
        SeriesId::NumberOfRockBursts,
        SeriesId::NumberOfDestressingBlasts,
        SeriesId::HighestBumpEnergy,
    ] {
        let col = records
            .iter()
            .map(|r| r.hourly.get(id).iter().sum())
            .collect();
        m.push_column(format!("{}_sum24", id.name()), col)?;
    }

    let recent = WindowSpec::last(config.recent_window);
    for id in SeriesId::GEOPHONE {
        let name = id.name();
        let col = |stat: Stat, spec: &WindowSpec| -> Vec<f64> {
            records
                .iter()
                .map(|r| window_stat(r.hourly.get(id), spec, stat))
                .collect()
        };
        m.push_column(format!("{name}_mean"), col(Stat::Mean, &full))?;
        m.push_column(format!("{name}_std"), col(Stat::Std, &full))?;
        m.push_column(format!("{name}_max"), col(Stat::Max, &full))?;
        if difference_series(id) {
            m.push_column(format!("{name}_abs_mean"), col(Stat::AbsMean, &full))?;
            m.push_column(format!("{name}_abs_max"), col(Stat::AbsMax, &full))?;
        }
        for gamma in 2..=config.mean_gamma_max {
            let w = WindowSpec::last(gamma);
            m.push_column(format!("{name}_mean_last{gamma}"), col(Stat::Mean, &w))?;
        }
        m.push_column(format!("{name}_last"), col(Stat::LastValue, &full))?;
        m.push_column(
            format!("{name}_std_last{}", config.recent_window),
            col(Stat::Std, &recent),
        )?;
        m.push_column(
            format!("{name}_slope_last{}", config.recent_window),
            col(Stat::OlsSlope, &recent),
        )?;
    }

    Ok(m)
}

/// Documented arity of the default grid as a function of the config.
pub fn arity(config: &ExtractorConfig) -> usize {
    let short_means = config.mean_gamma_max - 1; // gammas 2..=max
    let per_plain = 3 + short_means + 3;
    let per_diff = per_plain + 2;
    8 + 5 + 1 + 15 + 4 + 4 * per_plain + 4 * per_diff
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::data::blank_record;
    use crate::data::{AssessmentLevel, DatasetMode, InstanceRecord, LocationId, LocationMetadata};
    use crate::features::FeatureSet;

    pub(crate) fn meta_for(locations: &[u32]) -> MetadataMap {
        locations
            .iter()
            .map(|&l| {
                (
                    LocationId(l),
                    LocationMetadata {
                        main_working_id: LocationId(l),
                        main_working_name: format!("W-{l}"),
                        region_name: "R".into(),
                        bed_name: "B".into(),
                        main_working_type: "longwall".into(),
                        main_working_height: 2.5,
                        geological_assessment: AssessmentLevel::A,
                    },
                )
            })
            .collect()
    }

    fn config() -> ExtractorConfig {
        let mut c = ExtractorConfig::for_set(FeatureSet::Fs1);
        c.height_noise_sigma = 0.0;
        c
    }

    fn dataset(records: Vec<InstanceRecord>) -> Dataset {
        Dataset::new(records, DatasetMode::Independent).unwrap()
    }

    #[test]
    fn all_zero_instance_gives_zero_aggregates() {
        let mut r = blank_record(1, 7);
        r.scalars.assessments = [AssessmentLevel::B; 4];
        let ds = dataset(vec![r]);
        let m = extract(&ds, &meta_for(&[7]), &config()).unwrap();

        for name in ["count_e2_sum24", "sum_e5_sum24", "mean_energy_e3", "avg_genergy_mean"] {
            assert_eq!(m.column_by_name(name).unwrap(), &[0.0], "{name}");
        }
        // Assessment columns reflect the letters.
        assert_eq!(m.column_by_name("latest_seismic_assessment").unwrap(), &[2.0]);
        assert_eq!(m.column_by_name("assessment_mean").unwrap(), &[2.0]);
    }

    #[test]
    fn linear_genergy_has_unit_slope() {
        let mut r = blank_record(1, 7);
        let line: Vec<f64> = (1..=24).map(|h| h as f64).collect();
        r.hourly.set(SeriesId::AvgGenergy, line);
        let ds = dataset(vec![r]);
        let m = extract(&ds, &meta_for(&[7]), &config()).unwrap();
        let slope = m.column_by_name("avg_genergy_slope_last5").unwrap()[0];
        assert!((slope - 1.0).abs() < 1e-12);
        assert_eq!(m.column_by_name("avg_genergy_last").unwrap(), &[24.0]);
    }

    #[test]
    fn column_count_matches_documented_arity() {
        let ds = dataset(vec![blank_record(1, 7)]);
        let m = extract(&ds, &meta_for(&[7]), &config()).unwrap();
        assert_eq!(m.n_cols(), arity(&config()));
    }

    #[test]
    fn missing_metadata_is_an_error() {
        let ds = dataset(vec![blank_record(1, 9)]);
        assert!(extract(&ds, &meta_for(&[7]), &config()).is_err());
    }
}
