//! Windowed statistics over hourly series; the shared vocabulary of all
//! four feature extractors.

use crate::data::HOURS_PER_WINDOW;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A window of `len` hours ending `offset` hours before the most recent
/// hour. `offset = 0` anchors the window at hour 24.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub len: usize,
    pub offset: usize,
}

impl WindowSpec {
    /// Last `len` hours.
    pub fn last(len: usize) -> WindowSpec {
        WindowSpec { len, offset: 0 }
    }

    pub fn with_offset(len: usize, offset: usize) -> WindowSpec {
        WindowSpec { len, offset }
    }

    /// The whole 24-hour window.
    pub fn full() -> WindowSpec {
        WindowSpec::last(HOURS_PER_WINDOW)
    }

    pub fn validate(&self) -> Result<()> {
        if self.len < 1 || self.len > HOURS_PER_WINDOW {
            return Err(Error::Config(format!(
                "window length {} outside 1..=24",
                self.len
            )));
        }
        if self.offset + self.len > HOURS_PER_WINDOW {
            return Err(Error::Config(format!(
                "window (len {}, offset {}) extends before hour 1",
                self.len, self.offset
            )));
        }
        Ok(())
    }

    pub fn slice<'a>(&self, series: &'a [f64]) -> &'a [f64] {
        let end = series.len() - self.offset;
        &series[end - self.len..end]
    }

    /// 1-based hour of the first entry of the window (hour 24 = most
    /// recent). Used as the abscissa for regression statistics.
    pub fn start_hour(&self) -> usize {
        HOURS_PER_WINDOW - self.offset - self.len + 1
    }

    /// Short label used in feature-column names, e.g. `w8o4`.
    pub fn label(&self) -> String {
        if self.offset == 0 {
            format!("w{}", self.len)
        } else {
            format!("w{}o{}", self.len, self.offset)
        }
    }
}

/// A statistic computable over a window of hourly values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stat {
    Min,
    Max,
    Mean,
    Std,
    AbsMean,
    AbsMax,
    Quantile(f64),
    /// 1 if any entry is non-zero, else 0.
    NonzeroIndicator,
    /// Hours back to the most recent non-zero entry: 0 when hour 24 is
    /// non-zero, and the window length when the whole window is zero
    /// (a sentinel meaning "at least this long").
    HoursSinceLastNonzero,
    /// Number of strict hour-over-hour increases within the window.
    CountIncreases,
    /// Number of strictly positive entries.
    CountPositives,
    /// Slope of the least-squares line of value on (1-based) hour index.
    OlsSlope,
    OlsIntercept,
    /// Coefficient of determination of the same fit; 0 for constant
    /// windows.
    OlsR2,
    /// Value at the most recent hour of the window.
    LastValue,
}

impl Stat {
    /// Label used in feature-column names.
    pub fn label(&self) -> String {
        match self {
            Stat::Min => "min".into(),
            Stat::Max => "max".into(),
            Stat::Mean => "mean".into(),
            Stat::Std => "std".into(),
            Stat::AbsMean => "abs_mean".into(),
            Stat::AbsMax => "abs_max".into(),
            Stat::Quantile(q) => format!("q{:02}", (q * 100.0).round() as u32),
            Stat::NonzeroIndicator => "nonzero".into(),
            Stat::HoursSinceLastNonzero => "hours_since_nonzero".into(),
            Stat::CountIncreases => "increases".into(),
            Stat::CountPositives => "positives".into(),
            Stat::OlsSlope => "slope".into(),
            Stat::OlsIntercept => "intercept".into(),
            Stat::OlsR2 => "r2".into(),
            Stat::LastValue => "last".into(),
        }
    }
}

/// Evaluate one statistic over one window of a series.
///
/// Conventions: standard deviation is the population one (divide by the
/// window length); quantiles interpolate linearly between order statistics.
pub fn window_stat(series: &[f64], spec: &WindowSpec, kind: Stat) -> f64 {
    let w = spec.slice(series);
    match kind {
        Stat::Min => w.iter().copied().fold(f64::INFINITY, f64::min),
        Stat::Max => w.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Stat::Mean => mean(w),
        Stat::Std => pop_std(w),
        Stat::AbsMean => w.iter().map(|v| v.abs()).sum::<f64>() / w.len() as f64,
        Stat::AbsMax => w.iter().map(|v| v.abs()).fold(0.0, f64::max),
        Stat::Quantile(q) => quantile(w, q),
        Stat::NonzeroIndicator => {
            if w.iter().any(|&v| v != 0.0) {
                1.0
            } else {
                0.0
            }
        }
        Stat::HoursSinceLastNonzero => {
            match w.iter().rev().position(|&v| v != 0.0) {
                Some(k) => k as f64,
                None => w.len() as f64,
            }
        }
        Stat::CountIncreases => w
            .windows(2)
            .filter(|pair| pair[1] > pair[0])
            .count() as f64,
        Stat::CountPositives => w.iter().filter(|&&v| v > 0.0).count() as f64,
        Stat::OlsSlope => ols(w, spec.start_hour()).0,
        Stat::OlsIntercept => ols(w, spec.start_hour()).1,
        Stat::OlsR2 => ols(w, spec.start_hour()).2,
        Stat::LastValue => w[w.len() - 1],
    }
}

fn mean(w: &[f64]) -> f64 {
    w.iter().sum::<f64>() / w.len() as f64
}

fn pop_std(w: &[f64]) -> f64 {
    let m = mean(w);
    (w.iter().map(|v| (v - m).powi(2)).sum::<f64>() / w.len() as f64).sqrt()
}

/// Linear interpolation between order statistics at position `q * (n - 1)`.
pub fn quantile(w: &[f64], q: f64) -> f64 {
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Least-squares fit of `values` against consecutive hour indices starting
/// at `start_hour`; returns `(slope, intercept, r2)`. Degenerate fits
/// (single point, constant values) return slope 0 / intercept mean / r2 0.
pub fn ols(values: &[f64], start_hour: usize) -> (f64, f64, f64) {
    let n = values.len() as f64;
    if values.len() < 2 {
        return (0.0, mean(values), 0.0);
    }
    let xs = || (0..values.len()).map(|i| (start_hour + i) as f64);
    let x_mean = xs().sum::<f64>() / n;
    let y_mean = mean(values);
    let sxx: f64 = xs().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs()
        .zip(values)
        .map(|(x, &y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_tot: f64 = values.iter().map(|&y| (y - y_mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return (slope, intercept, 0.0);
    }
    let ss_res: f64 = xs()
        .zip(values)
        .map(|(x, &y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    (slope, intercept, 1.0 - ss_res / ss_tot)
}

/// Pearson correlation; defined as 0 when either input has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = mean(a);
    let mb = mean(b);
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    (cov / n) / ((va / n).sqrt() * (vb / n).sqrt())
}

/// Window mean energy: total energy divided by total count, 0 when the
/// window holds no events.
pub fn mean_energy(sum_series: &[f64], count_series: &[f64], spec: &WindowSpec) -> f64 {
    let sums = spec.slice(sum_series);
    let counts = spec.slice(count_series);
    let total_count: f64 = counts.iter().sum();
    if total_count == 0.0 {
        return 0.0;
    }
    sums.iter().sum::<f64>() / total_count
}
