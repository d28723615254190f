use anyhow::{Context, Result};
use minewarn_core::ingest::{
    synth_generate, write_dataset_csv, write_events_csv, write_metadata_csv, SynthConfig,
    SynthManifest,
};
use std::fs;
use std::path::PathBuf;

pub fn run(config: Option<PathBuf>, seed: Option<u64>, out: PathBuf) -> Result<()> {
    let mut config = match config {
        Some(path) => {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<SynthConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => SynthConfig::heterogeneous(8, 1200, 0),
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }

    let output = synth_generate(&config)?;

    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let dataset_path = out.join("dataset.csv");
    write_dataset_csv(fs::File::create(&dataset_path)?, &output.dataset)?;
    write_metadata_csv(fs::File::create(out.join("metadata.csv"))?, &output.metadata)?;
    write_events_csv(fs::File::create(out.join("events.csv"))?, &output.events)?;
    let manifest = SynthManifest::new(&config, &output);
    fs::write(out.join("manifest.toml"), manifest.to_toml()?)?;

    eprintln!(
        "wrote {} records, {} events for {} locations to {}",
        output.dataset.len(),
        output.events.len(),
        config.locations.len(),
        out.display()
    );
    Ok(())
}
