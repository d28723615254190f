use anyhow::{bail, Context, Result};
use minewarn_core::data::ScoreVector;
use minewarn_core::ensemble::{blend_standardized, rank_average};
use minewarn_core::io::{read_scores, write_scores};
use std::fs;
use std::path::PathBuf;

pub fn run(scores: Vec<PathBuf>, weights: String, method: String, out: PathBuf) -> Result<()> {
    let weights: Vec<f64> = weights
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<f64>()
                .with_context(|| format!("bad weight {w:?}"))
        })
        .collect::<Result<_>>()?;
    if weights.len() != scores.len() {
        bail!(
            "{} weights for {} score files",
            weights.len(),
            scores.len()
        );
    }

    let mut ids = None;
    let mut vectors: Vec<ScoreVector> = Vec::with_capacity(scores.len());
    for path in &scores {
        let (file_ids, vector) =
            read_scores(fs::File::open(path).with_context(|| format!("opening {}", path.display()))?)?;
        match &ids {
            None => ids = Some(file_ids),
            Some(first) => {
                if *first != file_ids {
                    bail!(
                        "{} scores a different instance set than {}",
                        path.display(),
                        scores[0].display()
                    );
                }
            }
        }
        vectors.push(vector);
    }
    let ids = ids.expect("at least one file (enforced by clap)");

    let blended = match method.as_str() {
        "rank" => rank_average(&vectors, &weights)?,
        "standardized" => blend_standardized(&vectors, &weights)?,
        other => bail!("unknown blend method {other:?} (expected rank or standardized)"),
    };
    write_scores(fs::File::create(&out)?, &ids, &blended)?;

    eprintln!(
        "blended {} score files ({}) into {}",
        vectors.len(),
        method,
        out.display()
    );
    Ok(())
}
