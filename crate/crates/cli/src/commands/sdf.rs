use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use jointaug_core::config::{Mode, BETA_LIMIT};
use jointaug_core::imageops::{crop_resize, ImageBuffer};
use jointaug_core::io::{read_features, read_image, read_manifest};
use jointaug_core::metrics::{sdf, ExternalFeatures, SdfReport, ToyEmbedding, View};
use jointaug_core::pipeline::{make_pair_spec, render_pair};
use jointaug_core::sampling::{pair_for_ratio, realize_crop, realize_crop_with};
use jointaug_core::{AugmentConfig, CropRegion, Error, PairManifestEntry, PairStream, Result};
use serde::Serialize;

use super::Outcome;
use crate::images::list_images;
use crate::output::{emit, to_pretty_json};
use crate::settings::ConfigArgs;

#[derive(Debug, Args)]
pub struct SdfArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Precomputed feature file (`dim=<D>` header); default is the toy embedding.
    #[arg(long, value_name = "PATH")]
    pub features: Option<PathBuf>,
    /// Source images, needed by the toy embedding.
    #[arg(long, value_name = "DIR")]
    pub images: Option<PathBuf>,
    /// Score the pairs recorded in a manifest instead of sampling new ones.
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
    /// identical, fixed-ratio:R, random-crop or joint-crop:BETA; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub pairing: Vec<Pairing>,
    /// Place fixed-ratio crops at the centre instead of at random.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub center_fixed: bool,
    /// Pairs per pairing [default: 1000].
    #[arg(long)]
    pub count: Option<u64>,
    /// JSON report [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

/// How the two views of a pair are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pairing {
    Identical,
    /// Area fractions with `s2 / s1 = R`.
    FixedRatio(f64),
    RandomCrop,
    JointCrop(f64),
}

impl FromStr for Pairing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, arg) = s.split_once(':').map_or((s, None), |(k, a)| (k, Some(a)));
        let number = |a: Option<&str>| -> std::result::Result<f64, String> {
            let a = a.ok_or_else(|| format!("`{kind}` needs a value, e.g. `{kind}:2`"))?;
            let parsed = match a.split_once(':') {
                Some((num, den)) => den
                    .parse::<f64>()
                    .ok()
                    .zip(num.parse::<f64>().ok())
                    .map(|(d, n)| d / n),
                None => a.parse().ok(),
            };
            parsed
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid number `{a}` in `{s}`"))
        };
        match kind {
            "identical" if arg.is_none() => Ok(Pairing::Identical),
            "random-crop" if arg.is_none() => Ok(Pairing::RandomCrop),
            "fixed-ratio" => Ok(Pairing::FixedRatio(number(arg)?)),
            "joint-crop" => Ok(Pairing::JointCrop(number(arg)?)),
            _ => Err(format!(
                "unknown pairing `{s}` (identical, fixed-ratio:R, random-crop, joint-crop:BETA)"
            )),
        }
    }
}

impl std::fmt::Display for Pairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pairing::Identical => f.write_str("identical"),
            Pairing::FixedRatio(r) => write!(f, "fixed-ratio:{r}"),
            Pairing::RandomCrop => f.write_str("random-crop"),
            Pairing::JointCrop(b) => write!(f, "joint-crop:{b}"),
        }
    }
}

#[derive(Debug, Serialize)]
struct PairingResult {
    pairing: String,
    #[serde(flatten)]
    report: SdfReport,
}

#[derive(Debug, Serialize)]
struct SdfDocument {
    embedding: &'static str,
    seed: u64,
    results: Vec<PairingResult>,
}

pub fn run(args: &SdfArgs) -> Result<Outcome> {
    let settings = args.config.resolve()?;
    let pairings = if args.pairing.is_empty() {
        vec![Pairing::JointCrop(settings.config.beta)]
    } else {
        args.pairing.clone()
    };

    let (embedding_name, results) = match &args.features {
        Some(path) => {
            let features = ExternalFeatures::new(read_features(path)?);
            ("features", features_mode(args, &features, &args.pairing)?)
        }
        None => {
            let dir = args
                .images
                .as_ref()
                .ok_or_else(|| Error::Config("the toy embedding needs --images".into()))?;
            let images = load_images(dir)?;
            let results = match &args.manifest {
                Some(path) => vec![manifest_toy(&read_manifest(path)?, &images)?],
                None => {
                    let count = args.count.or(settings.count).unwrap_or(1000) as usize;
                    pairings
                        .iter()
                        .map(|&p| {
                            let report = sampled_toy(
                                p,
                                &settings.config,
                                settings.seed,
                                count,
                                &images,
                                args.center_fixed,
                            )?;
                            Ok(PairingResult {
                                pairing: p.to_string(),
                                report,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            ("toy", results)
        }
    };

    let doc = SdfDocument {
        embedding: embedding_name,
        seed: settings.seed,
        results,
    };
    emit(args.report.as_deref(), &to_pretty_json(&doc)?)?;
    Ok(Outcome::Success)
}

fn load_images(dir: &std::path::Path) -> Result<Vec<(String, ImageBuffer)>> {
    let images: Vec<_> = list_images(dir)?
        .into_iter()
        .filter_map(|(id, path)| match read_image(&path) {
            Ok(img) => Some((id, img)),
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                None
            }
        })
        .collect();
    if images.is_empty() {
        return Err(Error::UnsupportedInput(format!(
            "no readable images in {}",
            dir.display()
        )));
    }
    Ok(images)
}

/// Feature lookups are keyed by the view file stems `cmd augment` writes.
fn features_mode(
    args: &SdfArgs,
    features: &ExternalFeatures,
    pairings: &[Pairing],
) -> Result<Vec<PairingResult>> {
    let manifest = args.manifest.as_ref().ok_or_else(|| {
        Error::Config("external features are looked up by view id and need --manifest".into())
    })?;
    let entries = read_manifest(manifest)?;
    let identical = match pairings {
        [] => false,
        [Pairing::Identical] => true,
        _ => {
            return Err(Error::Config(
                "with --features only `--pairing identical` can be combined with --manifest".into(),
            ))
        }
    };
    let ids: Vec<(String, String)> = entries
        .iter()
        .map(|e| {
            let a = format!("{}_a", e.image_id);
            let b = if identical {
                a.clone()
            } else {
                format!("{}_b", e.image_id)
            };
            (a, b)
        })
        .collect();
    let missing = features
        .table()
        .missing(ids.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]));
    if !missing.is_empty() {
        return Err(Error::MissingFeatures(missing));
    }
    let report = sdf(features, ids.len(), |k| {
        Ok((View::id_only(&ids[k].0), View::id_only(&ids[k].1)))
    })?;
    let label = if identical {
        "manifest-identical"
    } else {
        "manifest"
    };
    Ok(vec![PairingResult {
        pairing: label.into(),
        report,
    }])
}

fn manifest_toy(
    entries: &[PairManifestEntry],
    images: &[(String, ImageBuffer)],
) -> Result<PairingResult> {
    let by_id: HashMap<&str, &ImageBuffer> =
        images.iter().map(|(id, img)| (id.as_str(), img)).collect();
    let report = sdf(&ToyEmbedding, entries.len(), |k| {
        let entry = &entries[k];
        let img = by_id
            .get(entry.image_id.as_str())
            .ok_or_else(|| Error::UnsupportedInput(format!("no image for `{}`", entry.image_id)))?;
        let (a, b) = render_pair(img, entry)?;
        Ok((
            View::with_image(format!("{}_a", entry.image_id), a),
            View::with_image(format!("{}_b", entry.image_id), b),
        ))
    })?;
    Ok(PairingResult {
        pairing: "manifest".into(),
        report,
    })
}

fn sampled_toy(
    pairing: Pairing,
    config: &AugmentConfig,
    seed: u64,
    count: usize,
    images: &[(String, ImageBuffer)],
    center_fixed: bool,
) -> Result<SdfReport> {
    if let Pairing::FixedRatio(r) = pairing {
        let (lo, hi) = config.scale.ratio_support();
        if !(lo..=hi).contains(&r) {
            return Err(Error::Config(format!(
                "fixed ratio {r} is outside [{lo}, {hi}] for the scale bounds"
            )));
        }
    }
    let mut crop_config = config.clone();
    crop_config.blur_prob_a = 0.0;
    crop_config.blur_prob_b = 0.0;
    match pairing {
        Pairing::RandomCrop => crop_config.mode = Mode::RandomCrop,
        Pairing::JointCrop(beta) => {
            if beta.abs() > BETA_LIMIT {
                return Err(Error::Config(format!(
                    "pairing beta must lie in [-{BETA_LIMIT}, {BETA_LIMIT}], got {beta}"
                )));
            }
            crop_config.mode = Mode::JointCrop;
            crop_config.beta = beta;
        }
        Pairing::Identical | Pairing::FixedRatio(_) => {}
    }
    let out = config.out_size;

    sdf(&ToyEmbedding, count, |k| {
        let (id, img) = &images[k % images.len()];
        let (w, h) = (img.width(), img.height());
        let (a, b) = match pairing {
            Pairing::Identical => {
                let full = crop_resize(img, &CropRegion::full(w, h), out, out)?;
                (full.clone(), full)
            }
            Pairing::FixedRatio(r) => {
                let mut stream = PairStream::new(seed, k as u64);
                let scales = pair_for_ratio(r, config.scale, stream.next_open01());
                let (ca, cb) = if center_fixed {
                    (
                        realize_crop_with(scales.s1, w, h, config.aspect, [0.5; 3])?,
                        realize_crop_with(scales.s2, w, h, config.aspect, [0.5; 3])?,
                    )
                } else {
                    (
                        realize_crop(scales.s1, w, h, config.aspect, &mut stream)?,
                        realize_crop(scales.s2, w, h, config.aspect, &mut stream)?,
                    )
                };
                (
                    crop_resize(img, &ca.region, out, out)?,
                    crop_resize(img, &cb.region, out, out)?,
                )
            }
            Pairing::RandomCrop | Pairing::JointCrop(_) => {
                let entry = make_pair_spec(&crop_config, id, w, h, seed, k as u64)?;
                render_pair(img, &entry)?
            }
        };
        Ok((
            View::with_image(format!("{id}_a"), a),
            View::with_image(format!("{id}_b"), b),
        ))
    })
}
