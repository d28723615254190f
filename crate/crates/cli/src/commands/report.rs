use anyhow::{bail, Context, Result};
use minewarn_core::io::{read_labels, read_scores};
use minewarn_core::metrics::{pr_curve, MetricsReport, TieMode};
use std::fs;
use std::io::Write;
use std::path::PathBuf;

pub fn run(
    scores: PathBuf,
    labels: PathBuf,
    threshold: Option<f64>,
    tie_mode: String,
    out: PathBuf,
    pr_out: Option<PathBuf>,
) -> Result<()> {
    let tie_mode = match tie_mode.as_str() {
        "half" => TieMode::Half,
        "strict" => TieMode::Strict,
        other => bail!("unknown tie mode {other:?} (expected half or strict)"),
    };

    let (score_ids, score_values) =
        read_scores(fs::File::open(&scores).with_context(|| format!("opening {}", scores.display()))?)?;
    let (label_ids, label_values) =
        read_labels(fs::File::open(&labels).with_context(|| format!("opening {}", labels.display()))?)?;
    if score_ids != label_ids {
        bail!(
            "{} and {} describe different instance sets",
            scores.display(),
            labels.display()
        );
    }

    let report = MetricsReport::compute(score_values.as_slice(), &label_values, threshold, tie_mode)?;
    fs::write(&out, report.to_toml()?)?;

    if let Some(path) = pr_out {
        let curve = pr_curve(score_values.as_slice(), &label_values)?;
        let mut f = fs::File::create(&path)?;
        writeln!(f, "recall,precision")?;
        for (recall, precision) in curve {
            writeln!(f, "{recall},{precision}")?;
        }
    }

    eprintln!(
        "auc {:.4}, class-gain {:.4} at threshold {:.6} ({})",
        report.auc,
        report.derived.class_gain,
        report.threshold,
        if report.threshold_was_searched {
            "searched"
        } else {
            "given"
        }
    );
    Ok(())
}
