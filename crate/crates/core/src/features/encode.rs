//! Categorical encodings for the expert assessments.

use crate::data::{AssessmentLevel, Dataset, ASSESSMENT_FIELDS};
use serde::{Deserialize, Serialize};

/// How ordered categories become numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    /// One 0/1 column per (field, level) pair.
    OneHot,
    /// One column per field, `a -> 1 .. d -> 4` (higher risk, higher
    /// integer).
    #[default]
    Ordinal,
}

/// Encode the four assessment fields of every record.
pub fn assessment_columns(dataset: &Dataset, encoding: Encoding) -> Vec<(String, Vec<f64>)> {
    let n = dataset.len();
    match encoding {
        Encoding::Ordinal => ASSESSMENT_FIELDS
            .iter()
            .enumerate()
            .map(|(f, name)| {
                let col = dataset
                    .records()
                    .iter()
                    .map(|r| r.scalars.assessments[f].ordinal())
                    .collect();
                (name.to_string(), col)
            })
            .collect(),
        Encoding::OneHot => {
            let mut out = Vec::with_capacity(ASSESSMENT_FIELDS.len() * AssessmentLevel::ALL.len());
            for (f, name) in ASSESSMENT_FIELDS.iter().enumerate() {
                for level in AssessmentLevel::ALL {
                    let mut col = vec![0.0; n];
                    for (i, r) in dataset.records().iter().enumerate() {
                        if r.scalars.assessments[f] == level {
                            col[i] = 1.0;
                        }
                    }
                    out.push((format!("{name}={}", level.letter()), col));
                }
            }
            out
        }
    }
}

/// Mean of the four ordinal assessment codes, per record.
pub fn assessment_average(dataset: &Dataset) -> Vec<f64> {
    dataset
        .records()
        .iter()
        .map(|r| {
            r.scalars
                .assessments
                .iter()
                .map(|a| a.ordinal())
                .sum::<f64>()
                / 4.0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::blank_record;
    use crate::data::DatasetMode;

    #[test]
    fn ordinal_and_onehot_agree_on_levels() {
        let mut r = blank_record(1, 5);
        r.scalars.assessments = [
            AssessmentLevel::A,
            AssessmentLevel::B,
            AssessmentLevel::C,
            AssessmentLevel::D,
        ];
        let ds = Dataset::new(vec![r], DatasetMode::Independent).unwrap();

        let ord = assessment_columns(&ds, Encoding::Ordinal);
        assert_eq!(ord.len(), 4);
        assert_eq!(ord[2].1, vec![3.0]);

        let hot = assessment_columns(&ds, Encoding::OneHot);
        assert_eq!(hot.len(), 16);
        let find = |name: &str| hot.iter().find(|(n, _)| n == name).unwrap().1.clone();
        assert_eq!(find("latest_comprehensive_assessment=c"), vec![1.0]);
        assert_eq!(find("latest_comprehensive_assessment=a"), vec![0.0]);

        assert_eq!(assessment_average(&ds), vec![2.5]);
    }
}
