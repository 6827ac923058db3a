use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::Args;
use jointaug_core::imageops::ImageBuffer;
use jointaug_core::io::{read_image, read_manifest, write_image, write_manifest};
use jointaug_core::pipeline::render_pair;
use jointaug_core::{Error, PairManifestEntry, PairSampler, Result};
use rayon::prelude::*;

use super::Outcome;
use crate::images::list_images;
use crate::output::create_dir;
use crate::settings::ConfigArgs;

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Directory of source images (.png, .ppm, .pgm).
    #[arg(long, value_name = "DIR")]
    pub input: PathBuf,
    /// Receives `<id>_a.png`, `<id>_b.png` and the manifest.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    /// Re-render the pairs recorded in this manifest instead of sampling.
    #[arg(long, value_name = "PATH")]
    pub replay: Option<PathBuf>,
    /// Manifest path [default: <out-dir>/manifest.jsonl].
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
}

fn write_views(out_dir: &Path, id: &str, views: &(ImageBuffer, ImageBuffer)) -> Result<()> {
    write_image(&views.0, out_dir.join(format!("{id}_a.png")))?;
    write_image(&views.1, out_dir.join(format!("{id}_b.png")))
}

fn load(path: &Path) -> Option<ImageBuffer> {
    read_image(path)
        .map_err(|e| log::warn!("skipping {}: {e}", path.display()))
        .ok()
}

fn render(img: &ImageBuffer, entry: &PairManifestEntry) -> Option<(ImageBuffer, ImageBuffer)> {
    render_pair(img, entry)
        .map_err(|e| log::warn!("skipping `{}`: {e}", entry.image_id))
        .ok()
}

pub fn run(args: &AugmentArgs) -> Result<Outcome> {
    let images = list_images(&args.input)?;
    create_dir(&args.out_dir)?;

    let results: Vec<Option<PairManifestEntry>> = match &args.replay {
        None => {
            let settings = args.config.resolve()?;
            let sampler = PairSampler::new(settings.config, settings.seed);
            images
                .par_iter()
                .enumerate()
                .map(|(k, (id, path))| {
                    let Some(img) = load(path) else {
                        return Ok(None);
                    };
                    let entry =
                        match sampler.pair_params_for(id, img.width(), img.height(), k as u64) {
                            Ok(e) => e,
                            Err(e) => {
                                log::warn!("skipping `{id}`: {e}");
                                return Ok(None);
                            }
                        };
                    let Some(views) = render(&img, &entry) else {
                        return Ok(None);
                    };
                    write_views(&args.out_dir, id, &views)?;
                    Ok(Some(entry))
                })
                .collect::<Result<_>>()?
        }
        Some(manifest) => {
            let entries = read_manifest(manifest)?;
            if entries.is_empty() {
                return Err(Error::UnsupportedInput(format!(
                    "{} has no entries",
                    manifest.display()
                )));
            }
            let by_id: HashMap<&str, &Path> = images
                .iter()
                .map(|(id, p)| (id.as_str(), p.as_path()))
                .collect();
            entries
                .into_par_iter()
                .map(|entry| {
                    let Some(path) = by_id.get(entry.image_id.as_str()) else {
                        log::warn!(
                            "skipping `{}`: no such image in {}",
                            entry.image_id,
                            args.input.display()
                        );
                        return Ok(None);
                    };
                    let Some(img) = load(path) else {
                        return Ok(None);
                    };
                    let Some(views) = render(&img, &entry) else {
                        return Ok(None);
                    };
                    write_views(&args.out_dir, &entry.image_id, &views)?;
                    Ok(Some(entry))
                })
                .collect::<Result<_>>()?
        }
    };

    let attempted = results.len();
    let written: Vec<PairManifestEntry> = results.into_iter().flatten().collect();
    let skipped = attempted - written.len();
    if written.is_empty() {
        return Err(Error::UnsupportedInput(format!(
            "none of the {attempted} images could be processed"
        )));
    }
    let manifest = args
        .manifest
        .clone()
        .unwrap_or_else(|| args.out_dir.join("manifest.jsonl"));
    write_manifest(&written, &manifest)?;
    if skipped > 0 {
        log::warn!("skipped {skipped} of {attempted} images");
    }
    log::info!(
        "wrote {} pairs to {}",
        written.len(),
        args.out_dir.display()
    );
    Ok(Outcome::Success)
}
