//! Feature set 3: derived log-series, richer statistics, fits and
//! correlations, followed by constant/correlation pruning.
//!
//! Five series are derived from the originals with a `log(x + 1)`
//! transform (differences and averages can be zero, so the +1 keeps the
//! transform finite):
//!
//! - `log_max_avg_diff_genergy` and `log_max_avg_diff_gactivity`: spread
//!   between the max and avg geophone records;
//! - `log_max_avg_diff_in_genergy` / `..gactivity`: the same spread for
//!   the difference series;
//! - `log_ave_energy`: per-hour mean bump energy from the sum and count
//!   bands (0 when no bumps).
//!
//! The 14 FS2 families plus these 5 get the FS2 statistics over windows
//! {2,4,8,24} and quantiles/increase-counts/positive-counts over windows
//! {4,8,24}; three named series get a linear fit against the hour index;
//! two series pairs get Pearson correlations. After extraction, constant
//! columns are dropped and one of every pair correlated above the
//! threshold is removed ([`super::prune`]); the post-prune column set is
//! data-dependent and recorded in the fitted extractor.

use super::encode::assessment_columns;
use super::fs2::{BASE_STATS, FAMILIES, WINDOWS};
use super::stats::{ols, pearson, window_stat, Stat, WindowSpec};
use super::ExtractorConfig;
use crate::data::{Dataset, FeatureMatrix, InstanceRecord, SeriesId, GENERAL_FIELDS, HOURS_PER_WINDOW};
use crate::error::Result;

pub(crate) const EXTRA_WINDOWS: [usize; 3] = [4, 8, 24];
pub(crate) const EXTRA_STATS: [Stat; 5] = [
    Stat::Quantile(0.25),
    Stat::Quantile(0.5),
    Stat::Quantile(0.75),
    Stat::CountIncreases,
    Stat::CountPositives,
];

const DERIVED_NAMES: [&str; 5] = [
    "log_max_avg_diff_genergy",
    "log_max_avg_diff_gactivity",
    "log_max_avg_diff_in_genergy",
    "log_max_avg_diff_in_gactivity",
    "log_ave_energy",
];

/// The three series fitted linearly against the hour index 1..24.
const FIT_SERIES: [&str; 3] = ["avg_difference_in_gactivity", "avg_gactivity", "log_ave_energy"];

fn log1p_spread(hi: &[f64], lo: &[f64]) -> Vec<f64> {
    hi.iter()
        .zip(lo)
        .map(|(h, l)| (h - l).max(0.0).ln_1p())
        .collect()
}

fn derived_series(record: &InstanceRecord) -> [(String, Vec<f64>); 5] {
    let h = &record.hourly;
    let ave_energy: Vec<f64> = (0..HOURS_PER_WINDOW)
        .map(|hr| {
            let count: f64 = SeriesId::COUNT_BANDS.iter().map(|&b| h.get(b)[hr]).sum();
            if count == 0.0 {
                0.0
            } else {
                let sum: f64 = SeriesId::SUM_BANDS.iter().map(|&b| h.get(b)[hr]).sum();
                (sum / count).ln_1p()
            }
        })
        .collect();
    [
        (
            DERIVED_NAMES[0].into(),
            log1p_spread(h.get(SeriesId::MaxGenergy), h.get(SeriesId::AvgGenergy)),
        ),
        (
            DERIVED_NAMES[1].into(),
            log1p_spread(h.get(SeriesId::MaxGactivity), h.get(SeriesId::AvgGactivity)),
        ),
        (
            DERIVED_NAMES[2].into(),
            log1p_spread(
                h.get(SeriesId::MaxDifferenceInGenergy),
                h.get(SeriesId::AvgDifferenceInGenergy),
            ),
        ),
        (
            DERIVED_NAMES[3].into(),
            log1p_spread(
                h.get(SeriesId::MaxDifferenceInGactivity),
                h.get(SeriesId::AvgDifferenceInGactivity),
            ),
        ),
        (DERIVED_NAMES[4].into(), ave_energy),
    ]
}

/// Extract the raw (pre-prune) FS3 matrix.
pub fn extract(dataset: &Dataset, config: &ExtractorConfig) -> Result<FeatureMatrix> {
    let records = dataset.records();
    let n = records.len();
    let mut m = FeatureMatrix::empty(n, config.provenance());

    // Materialize every record's series map (originals + derived) once.
    let series_per_record: Vec<Vec<(String, Vec<f64>)>> = records
        .iter()
        .map(|r| {
            let mut all: Vec<(String, Vec<f64>)> = FAMILIES
                .iter()
                .map(|&id| (id.name().to_string(), r.hourly.get(id).to_vec()))
                .collect();
            all.extend(derived_series(r));
            all
        })
        .collect();
    let series_names: Vec<String> = series_per_record[0].iter().map(|(n, _)| n.clone()).collect();

    for (s, name) in series_names.iter().enumerate() {
        for len in WINDOWS {
            let spec = WindowSpec::last(len);
            for stat in BASE_STATS {
                let col = series_per_record
                    .iter()
                    .map(|rec| window_stat(&rec[s].1, &spec, stat))
                    .collect();
                m.push_column(format!("{name}_{}_{}", stat.label(), spec.label()), col)?;
            }
        }
        for len in EXTRA_WINDOWS {
            let spec = WindowSpec::last(len);
            for stat in EXTRA_STATS {
                let col = series_per_record
                    .iter()
                    .map(|rec| window_stat(&rec[s].1, &spec, stat))
                    .collect();
                m.push_column(format!("{name}_{}_{}", stat.label(), spec.label()), col)?;
            }
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

    for fit_name in FIT_SERIES {
        // The fitted difference series is not part of the stat grid above,
        // so fetch fit inputs directly from the records.
        let fits: Vec<(f64, f64, f64)> = records
            .iter()
            .zip(&series_per_record)
            .map(|(r, derived)| match fit_name {
                "avg_difference_in_gactivity" => {
                    ols(r.hourly.get(SeriesId::AvgDifferenceInGactivity), 1)
                }
                "avg_gactivity" => ols(r.hourly.get(SeriesId::AvgGactivity), 1),
                _ => {
                    let (_, values) = derived
                        .iter()
                        .find(|(n, _)| n == fit_name)
                        .expect("fit series exists");
                    ols(values, 1)
                }
            })
            .collect();
        m.push_column(
            format!("{fit_name}_fit_slope"),
            fits.iter().map(|f| f.0).collect(),
        )?;
        m.push_column(
            format!("{fit_name}_fit_intercept"),
            fits.iter().map(|f| f.1).collect(),
        )?;
        m.push_column(
            format!("{fit_name}_fit_r2"),
            fits.iter().map(|f| f.2).collect(),
        )?;
    }

    let corr = |a: SeriesId, b: SeriesId| -> Vec<f64> {
        records
            .iter()
            .map(|r| pearson(r.hourly.get(a), r.hourly.get(b)))
            .collect()
    };
    m.push_column(
        "corr_avg_difference_gactivity_genergy",
        corr(
            SeriesId::AvgDifferenceInGactivity,
            SeriesId::AvgDifferenceInGenergy,
        ),
    )?;
    m.push_column(
        "corr_avg_gactivity_genergy",
        corr(SeriesId::AvgGactivity, SeriesId::AvgGenergy),
    )?;

    for (f, name) in GENERAL_FIELDS.iter().enumerate() {
        m.push_column(*name, records.iter().map(|r| r.scalars.general[f]).collect())?;
    }

    for (name, col) in assessment_columns(dataset, config.encoding) {
        m.push_column(name, col)?;
    }

    Ok(m)
}

/// Documented pre-prune arity.
pub fn arity(config: &ExtractorConfig) -> usize {
    let families = FAMILIES.len() + DERIVED_NAMES.len();
    let per_family = WINDOWS.len() * BASE_STATS.len() + EXTRA_WINDOWS.len() * EXTRA_STATS.len();
    let encoding_cols = match config.encoding {
        super::Encoding::OneHot => 16,
        super::Encoding::Ordinal => 4,
    };
    families * per_family + 4 + FIT_SERIES.len() * 3 + 2 + 8 + encoding_cols
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::blank_record;
    use crate::data::DatasetMode;
    use crate::features::{fit_extract, FeatureSet};

    fn config() -> ExtractorConfig {
        ExtractorConfig::for_set(FeatureSet::Fs3)
    }

    fn noisy_record(id: u64, salt: u64) -> InstanceRecord {
        // Deterministic pseudo-random series so pruning has variance to
        // work with.
        let mut r = blank_record(id, 7);
        let hourly = crate::data::HourlySeriesSet::from_fn(|sid, h| {
            let x = crate::rng::mix(salt, (sid as usize as u64) << 8 | h as u64);
            if sid.is_count_like() {
                (x % 4) as f64
            } else {
                (x % 1000) as f64 / 10.0
            }
        });
        r.hourly = hourly;
        r
    }

    #[test]
    fn identical_series_give_unit_correlation() {
        let mut r = blank_record(1, 7);
        let line: Vec<f64> = (1..=24).map(|h| (h * h) as f64).collect();
        r.hourly.set(SeriesId::AvgGactivity, line.clone());
        r.hourly.set(SeriesId::AvgGenergy, line);
        let ds = Dataset::new(vec![r], DatasetMode::Independent).unwrap();
        let m = extract(&ds, &config()).unwrap();
        assert!(
            (m.column_by_name("corr_avg_gactivity_genergy").unwrap()[0] - 1.0).abs() < 1e-12
        );
    }

    #[test]
    fn perfectly_linear_series_has_r2_one() {
        let mut r = blank_record(1, 7);
        let line: Vec<f64> = (1..=24).map(|h| 2.0 * h as f64 + 3.0).collect();
        r.hourly.set(SeriesId::AvgGactivity, line);
        let ds = Dataset::new(vec![r], DatasetMode::Independent).unwrap();
        let m = extract(&ds, &config()).unwrap();
        assert!((m.column_by_name("avg_gactivity_fit_r2").unwrap()[0] - 1.0).abs() < 1e-12);
        assert!((m.column_by_name("avg_gactivity_fit_slope").unwrap()[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn fit_matches_closed_form_least_squares() {
        // Fixed noisy series; oracle is the closed-form normal equation
        // computed right here, independent of the stats module.
        let ys: Vec<f64> = (1..=24)
            .map(|h| 0.7 * h as f64 + ((h * 37) % 11) as f64 * 0.3)
            .collect();
        let mut r = blank_record(1, 7);
        r.hourly.set(SeriesId::AvgGactivity, ys.clone());
        let ds = Dataset::new(vec![r], DatasetMode::Independent).unwrap();
        let m = extract(&ds, &config()).unwrap();

        let n = 24.0;
        let sx: f64 = (1..=24).map(|h| h as f64).sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = (1..=24).map(|h| (h * h) as f64).sum();
        let sxy: f64 = ys.iter().enumerate().map(|(i, y)| (i + 1) as f64 * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        let ss_tot: f64 = ys.iter().map(|y| (y - sy / n).powi(2)).sum();
        let ss_res: f64 = ys
            .iter()
            .enumerate()
            .map(|(i, y)| (y - (intercept + slope * (i + 1) as f64)).powi(2))
            .sum();
        let r2 = 1.0 - ss_res / ss_tot;

        assert!((m.column_by_name("avg_gactivity_fit_slope").unwrap()[0] - slope).abs() < 1e-9);
        assert!(
            (m.column_by_name("avg_gactivity_fit_intercept").unwrap()[0] - intercept).abs() < 1e-9
        );
        assert!((m.column_by_name("avg_gactivity_fit_r2").unwrap()[0] - r2).abs() < 1e-9);
    }

    #[test]
    fn pruning_leaves_no_constant_columns() {
        let records: Vec<_> = (0..30).map(|i| noisy_record(i, i * 31 + 5)).collect();
        let ds = Dataset::new(records, DatasetMode::Independent).unwrap();
        let (m, fitted) = fit_extract(&ds, &Default::default(), &config()).unwrap();
        assert!(m.n_cols() < arity(&config()));
        for j in 0..m.n_cols() {
            let col = m.column(j);
            assert!(
                col.iter().any(|&v| v != col[0]),
                "constant column {} survived",
                m.names()[j]
            );
        }
        // The fitted column set replays on new data.
        let m2 = fitted.transform(&ds, &Default::default()).unwrap();
        assert_eq!(m.names(), m2.names());
    }

    #[test]
    fn raw_column_count_matches_documented_arity() {
        let ds = Dataset::new(vec![blank_record(1, 7)], DatasetMode::Independent).unwrap();
        let m = extract(&ds, &config()).unwrap();
        assert_eq!(m.n_cols(), arity(&config()));
    }
}
