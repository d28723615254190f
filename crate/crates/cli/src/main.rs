//! `minewarn` — batch driver for the seismic-warning pipeline.
//!
//! Every command is a pure function of its input files, flags and seed:
//! rerunning with the same inputs produces byte-identical outputs. All
//! diagnostics go to stderr; the exit code is 0 iff the command succeeded.

mod commands;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "minewarn", version, about = "Coal-mine seismic-warning prediction pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset with persisted ground truth.
    Synth {
        /// Generator configuration (TOML). Omit for the built-in
        /// heterogeneous 8-location roster.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for dataset.csv, metadata.csv, events.csv and
        /// manifest.toml.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a feature extractor over a dataset.
    Extract {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        metadata: PathBuf,
        /// fs1, fs2, fs3 or fs4.
        #[arg(long)]
        extractor: String,
        /// Extractor configuration (TOML); the --extractor flag overrides
        /// its feature_set.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Noise substream seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Feature CSV path; a sidecar .manifest.toml and, for labeled
        /// data, a labels.csv are written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate an extractor/model pair under a split protocol.
    Evaluate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        metadata: PathBuf,
        #[arg(long)]
        extractor: String,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Model spec (TOML).
        #[arg(long)]
        model: PathBuf,
        /// kcv, lolo, trts1 or trts2.
        #[arg(long)]
        protocol: String,
        /// Protocol parameters (TOML).
        #[arg(long)]
        protocol_config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path (TOML).
        #[arg(long)]
        out: PathBuf,
        /// Also write the split plan for audit.
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Train a model on extracted features.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Model spec (TOML).
        #[arg(long)]
        model: PathBuf,
        /// Overrides the seed in the spec.
        #[arg(long)]
        seed: Option<u64>,
        /// Model file (JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Score extracted features with a trained model.
    Predict {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        model_file: PathBuf,
        /// Score CSV (instance_id, score).
        #[arg(long)]
        out: PathBuf,
    },
    /// Blend score files by weighted rank averaging or standardized
    /// averaging.
    Blend {
        /// Score files, repeatable; order matches --weights.
        #[arg(long = "scores", required = true)]
        scores: Vec<PathBuf>,
        /// Comma-separated weights, e.g. 1,3,2.
        #[arg(long)]
        weights: String,
        #[arg(long, default_value = "rank")]
        method: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute AUC, the class-gain threshold, the confusion matrix and the
    /// precision-recall curve for a score file against labels.
    Report {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Decision threshold; omitted means "search for the class-gain
        /// maximizer".
        #[arg(long)]
        threshold: Option<f64>,
        /// half or strict.
        #[arg(long, default_value = "half")]
        tie_mode: String,
        /// Report path (TOML).
        #[arg(long)]
        out: PathBuf,
        /// Precision-recall curve CSV.
        #[arg(long)]
        pr_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth { config, seed, out } => commands::synth::run(config, seed, out),
        Command::Extract {
            data,
            metadata,
            extractor,
            config,
            seed,
            out,
        } => commands::extract::run(data, metadata, extractor, config, seed, out),
        Command::Evaluate {
            data,
            metadata,
            extractor,
            config,
            model,
            protocol,
            protocol_config,
            seed,
            out,
            plan_out,
        } => commands::evaluate::run(
            data,
            metadata,
            extractor,
            config,
            model,
            protocol,
            protocol_config,
            seed,
            out,
            plan_out,
        ),
        Command::Train {
            features,
            labels,
            model,
            seed,
            out,
        } => commands::train::run(features, labels, model, seed, out),
        Command::Predict {
            features,
            model_file,
            out,
        } => commands::predict::run(features, model_file, out),
        Command::Blend {
            scores,
            weights,
            method,
            out,
        } => commands::blend::run(scores, weights, method, out),
        Command::Report {
            scores,
            labels,
            threshold,
            tie_mode,
            out,
            pr_out,
        } => commands::report::run(scores, labels, threshold, tie_mode, out, pr_out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
