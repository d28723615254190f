//! The 22 hourly measurement series of one observation window.

use serde::{Deserialize, Serialize};

/// Hours covered by one observation window. Index 23 (hour 24) is the most
/// recent hour prior to the forecasting period.
pub const HOURS_PER_WINDOW: usize = 24;

/// Identifier of one of the 22 hourly series.
///
/// The magnitude-band suffix `e2..e6plus` buckets bump energies by order of
/// magnitude: band `e3` covers `(10^2, 10^3]` J and `e6plus` everything
/// above `10^5` J.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesId {
    CountE2,
    CountE3,
    CountE4,
    CountE5,
    CountE6Plus,
    SumE2,
    SumE3,
    SumE4,
    SumE5,
    SumE6Plus,
    TotalNumberOfBumps,
    NumberOfRockBursts,
    NumberOfDestressingBlasts,
    HighestBumpEnergy,
    MaxGactivity,
    MaxGenergy,
    AvgGactivity,
    AvgGenergy,
    MaxDifferenceInGactivity,
    MaxDifferenceInGenergy,
    AvgDifferenceInGactivity,
    AvgDifferenceInGenergy,
}

impl SeriesId {
    /// All series in canonical (schema) order.
    pub const ALL: [SeriesId; 22] = [
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
        SeriesId::TotalNumberOfBumps,
        SeriesId::NumberOfRockBursts,
        SeriesId::NumberOfDestressingBlasts,
        SeriesId::HighestBumpEnergy,
        SeriesId::MaxGactivity,
        SeriesId::MaxGenergy,
        SeriesId::AvgGactivity,
        SeriesId::AvgGenergy,
        SeriesId::MaxDifferenceInGactivity,
        SeriesId::MaxDifferenceInGenergy,
        SeriesId::AvgDifferenceInGactivity,
        SeriesId::AvgDifferenceInGenergy,
    ];

    /// Per-band bump counts, ordered `e2..e6plus`.
    pub const COUNT_BANDS: [SeriesId; 5] = [
        SeriesId::CountE2,
        SeriesId::CountE3,
        SeriesId::CountE4,
        SeriesId::CountE5,
        SeriesId::CountE6Plus,
    ];

    /// Per-band bump energy sums, ordered `e2..e6plus`.
    pub const SUM_BANDS: [SeriesId; 5] = [
        SeriesId::SumE2,
        SeriesId::SumE3,
        SeriesId::SumE4,
        SeriesId::SumE5,
        SeriesId::SumE6Plus,
    ];

    /// The 8 geophone series.
    pub const GEOPHONE: [SeriesId; 8] = [
        SeriesId::MaxGactivity,
        SeriesId::MaxGenergy,
        SeriesId::AvgGactivity,
        SeriesId::AvgGenergy,
        SeriesId::MaxDifferenceInGactivity,
        SeriesId::MaxDifferenceInGenergy,
        SeriesId::AvgDifferenceInGactivity,
        SeriesId::AvgDifferenceInGenergy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesId::CountE2 => "count_e2",
            SeriesId::CountE3 => "count_e3",
            SeriesId::CountE4 => "count_e4",
            SeriesId::CountE5 => "count_e5",
            SeriesId::CountE6Plus => "count_e6plus",
            SeriesId::SumE2 => "sum_e2",
            SeriesId::SumE3 => "sum_e3",
            SeriesId::SumE4 => "sum_e4",
            SeriesId::SumE5 => "sum_e5",
            SeriesId::SumE6Plus => "sum_e6plus",
            SeriesId::TotalNumberOfBumps => "total_number_of_bumps",
            SeriesId::NumberOfRockBursts => "number_of_rock_bursts",
            SeriesId::NumberOfDestressingBlasts => "number_of_destressing_blasts",
            SeriesId::HighestBumpEnergy => "highest_bump_energy",
            SeriesId::MaxGactivity => "max_gactivity",
            SeriesId::MaxGenergy => "max_genergy",
            SeriesId::AvgGactivity => "avg_gactivity",
            SeriesId::AvgGenergy => "avg_genergy",
            SeriesId::MaxDifferenceInGactivity => "max_difference_in_gactivity",
            SeriesId::MaxDifferenceInGenergy => "max_difference_in_genergy",
            SeriesId::AvgDifferenceInGactivity => "avg_difference_in_gactivity",
            SeriesId::AvgDifferenceInGenergy => "avg_difference_in_genergy",
        }
    }

    pub fn from_name(name: &str) -> Option<SeriesId> {
        SeriesId::ALL.iter().copied().find(|s| s.name() == name)
    }

    /// Series whose entries are event counts (non-negative integers).
    pub fn is_count_like(self) -> bool {
        matches!(
            self,
            SeriesId::CountE2
                | SeriesId::CountE3
                | SeriesId::CountE4
                | SeriesId::CountE5
                | SeriesId::CountE6Plus
                | SeriesId::TotalNumberOfBumps
                | SeriesId::NumberOfRockBursts
                | SeriesId::NumberOfDestressingBlasts
        )
    }

    /// Series constrained to be non-negative (energies).
    pub fn is_nonneg_energy(self) -> bool {
        matches!(
            self,
            SeriesId::SumE2
                | SeriesId::SumE3
                | SeriesId::SumE4
                | SeriesId::SumE5
                | SeriesId::SumE6Plus
                | SeriesId::HighestBumpEnergy
        )
    }

    fn index(self) -> usize {
        SeriesId::ALL.iter().position(|&s| s == self).unwrap()
    }
}

/// One window's worth of hourly measurements: 22 series of 24 entries each.
///
/// Series are stored as vectors rather than fixed arrays so that malformed
/// input (e.g. a 23-entry series) can be represented and reported by
/// validation instead of being unrepresentable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlySeriesSet {
    series: Vec<Vec<f64>>,
}

impl HourlySeriesSet {
    /// All 22 series identically zero.
    pub fn zeroed() -> Self {
        HourlySeriesSet {
            series: vec![vec![0.0; HOURS_PER_WINDOW]; SeriesId::ALL.len()],
        }
    }

    /// Build from a function of `(series, hour_index)` with hour index 0..23
    /// (23 = most recent hour).
    pub fn from_fn(mut f: impl FnMut(SeriesId, usize) -> f64) -> Self {
        let series = SeriesId::ALL
            .iter()
            .map(|&id| (0..HOURS_PER_WINDOW).map(|h| f(id, h)).collect())
            .collect();
        HourlySeriesSet { series }
    }

    pub fn get(&self, id: SeriesId) -> &[f64] {
        &self.series[id.index()]
    }

    pub fn set(&mut self, id: SeriesId, values: Vec<f64>) {
        self.series[id.index()] = values;
    }

    pub fn set_hour(&mut self, id: SeriesId, hour: usize, value: f64) {
        self.series[id.index()][hour] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (SeriesId, &[f64])> {
        SeriesId::ALL
            .iter()
            .map(move |&id| (id, self.get(id)))
    }

    /// Total number of stored hourly values (528 when well-formed).
    pub fn value_count(&self) -> usize {
        self.series.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_has_22_series() {
        assert_eq!(SeriesId::ALL.len(), 22);
        let mut names: Vec<_> = SeriesId::ALL.iter().map(|s| s.name()).collect();
        names.dedup();
        assert_eq!(names.len(), 22);
    }

    #[test]
    fn zeroed_set_counts_528_values() {
        assert_eq!(HourlySeriesSet::zeroed().value_count(), 22 * 24);
    }

    #[test]
    fn name_round_trip() {
        for id in SeriesId::ALL {
            assert_eq!(SeriesId::from_name(id.name()), Some(id));
        }
        assert_eq!(SeriesId::from_name("nope"), None);
    }
}
