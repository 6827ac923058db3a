use std::path::PathBuf;

use clap::Args;
use jointaug_core::io::write_manifest;
use jointaug_core::{PairSampler, Result};

use super::Outcome;
use crate::settings::ConfigArgs;

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Number of pairs [default: 1000].
    #[arg(long)]
    pub count: Option<u64>,
    /// Manifest to write (JSONL).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

pub fn run(args: &SampleArgs) -> Result<Outcome> {
    let settings = args.config.resolve()?;
    let count = args.count.or(settings.count).unwrap_or(1000);
    let sampler = PairSampler::new(settings.config, settings.seed);
    let entries = sampler.batch(0..count)?;
    write_manifest(&entries, &args.out)?;
    log::info!("wrote {count} pairs to {}", args.out.display());
    Ok(Outcome::Success)
}
