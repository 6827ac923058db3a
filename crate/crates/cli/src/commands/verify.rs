use std::path::PathBuf;

use clap::Args;
use jointaug_core::config::{AugmentConfig, Mode};
use jointaug_core::distributions::{
    BaselineLogRatio, JcDistribution, RatioBounds, ReferenceDistribution,
};
use jointaug_core::metrics::{gof_report, ks_critical_value, GofReport};
use jointaug_core::sampling::color_bounds;
use jointaug_core::{JointKind, PairManifestEntry, PairSampler, Result};
use rayon::prelude::*;
use serde::Serialize;

use super::Outcome;
use crate::output::{emit, to_pretty_json};
use crate::settings::ConfigArgs;

/// Significance level behind the default KS threshold.
const ALPHA: f64 = 0.01;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Number of pairs [default: 100000].
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// KS threshold [default: the 1% critical value for the sample size].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Compare against JC at this β instead of the configured one.
    #[arg(long, allow_hyphen_values = true)]
    pub reference_beta: Option<f64>,
    /// JSON report [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// CSV histogram (`bin_center,empirical,analytical`).
    #[arg(long, value_name = "PATH")]
    pub histogram: Option<PathBuf>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    mode: Mode,
    beta: f64,
    reference_beta: Option<f64>,
    statistic: &'static str,
    seed: u64,
    pairs: u64,
    threshold: f64,
    passed: bool,
    #[serde(flatten)]
    gof: &'a GofReport,
}

/// Which log-ratio a mode controls, and the bounds it lives in.
fn statistic(config: &AugmentConfig) -> Result<(&'static str, RatioBounds)> {
    Ok(match config.mode {
        Mode::RandomCrop | Mode::JointCrop | Mode::JointCropOrBlur => {
            ("log_area_ratio", config.scale)
        }
        Mode::JointBlur => ("log_sigma_ratio", config.sigma),
        Mode::JointColor if config.color_target.brightness() => {
            ("log_brightness_ratio", color_bounds(config.color_factor)?)
        }
        Mode::JointColor => ("log_contrast_ratio", color_bounds(config.color_factor)?),
    })
}

fn extract(config: &AugmentConfig, e: &PairManifestEntry) -> Option<f64> {
    let (a, b) = (&e.view_a, &e.view_b);
    match config.mode {
        Mode::RandomCrop | Mode::JointCrop => Some((b.scale / a.scale).ln()),
        Mode::JointCropOrBlur => {
            (e.joint == Some(JointKind::Crop)).then(|| (b.scale / a.scale).ln())
        }
        Mode::JointBlur => Some((b.blur?.sigma / a.blur?.sigma).ln()),
        Mode::JointColor => {
            let (ca, cb) = (a.color?, b.color?);
            Some(if config.color_target.brightness() {
                (cb.brightness / ca.brightness).ln()
            } else {
                (cb.contrast / ca.contrast).ln()
            })
        }
    }
}

pub fn run(args: &VerifyArgs) -> Result<Outcome> {
    let settings = args.config.resolve()?;
    let count = args.count.or(settings.count).unwrap_or(100_000);
    let config = settings.config.clone();
    let (name, bounds) = statistic(&config)?;

    let reference: Box<dyn ReferenceDistribution> = match (config.mode, args.reference_beta) {
        (Mode::RandomCrop, None) => Box::new(BaselineLogRatio::new(bounds)),
        (_, reference_beta) => Box::new(JcDistribution::new(
            reference_beta.unwrap_or(config.beta),
            bounds,
        )?),
    };

    let sampler = PairSampler::new(settings.config, settings.seed);
    let samples: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|k| Ok(extract(&config, &sampler.pair_params(k)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let gof = gof_report(&samples, reference.as_ref(), args.bins)?;
    let threshold = args
        .threshold
        .unwrap_or_else(|| ks_critical_value(gof.sample_count, ALPHA));
    let passed = gof.ks_statistic < threshold;
    let report = VerifyReport {
        mode: config.mode,
        beta: config.beta,
        reference_beta: args.reference_beta,
        statistic: name,
        seed: settings.seed,
        pairs: count,
        threshold,
        passed,
        gof: &gof,
    };
    emit(args.report.as_deref(), &to_pretty_json(&report)?)?;
    if let Some(path) = &args.histogram {
        emit(Some(path), &gof.histogram_csv())?;
    }
    if passed {
        Ok(Outcome::Success)
    } else {
        log::warn!(
            "KS statistic {:.6} is not below the threshold {threshold:.6}",
            gof.ks_statistic
        );
        Ok(Outcome::VerificationFailed)
    }
}
