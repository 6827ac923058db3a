use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use jointaug_core::distributions::{tail_probability, BaselineLogRatio};
use jointaug_core::metrics::summation::mean_and_std;
use jointaug_core::metrics::{
    distance_profile, empirical_two_sided_tail, DistanceAnchor, DistanceProfile,
};
use jointaug_core::sampling::{sample_independent_areas, JointSampler};
use jointaug_core::{PairStream, RatioBounds, Result};
use rayon::prelude::*;
use serde::Serialize;

use super::Outcome;
use crate::output::{create_dir, emit, to_pretty_json};
use crate::settings::ConfigArgs;

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// β values to profile.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-2,-1,0,1,2"
    )]
    pub betas: Vec<f64>,
    /// Pairs per ratio statistic [default: 100000].
    #[arg(long)]
    pub count: Option<u64>,
    /// Pairs per distance profile.
    #[arg(long, default_value_t = 100_000)]
    pub distance_count: usize,
    /// Two-sided tail thresholds t > 1 for the independent baseline.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub tails: Vec<f64>,
    /// Crop point used for distances: top-left or center.
    #[arg(long, default_value = "top-left")]
    pub anchor: DistanceAnchor,
    /// JSON report [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Directory for `tails.csv`, `mean_abs_log_ratio.csv` and `distance.csv`.
    #[arg(long, value_name = "DIR")]
    pub csv_dir: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Tail {
    t: f64,
    analytical: f64,
    empirical: f64,
}

#[derive(Debug, Serialize)]
struct MeanAbs {
    /// `None` for the independent baseline.
    beta: Option<f64>,
    analytical: f64,
    empirical: f64,
    std_error: f64,
}

#[derive(Debug, Serialize)]
struct Distance {
    #[serde(flatten)]
    profile: DistanceProfile,
    std_error: f64,
}

#[derive(Debug, Serialize)]
struct StatsReport {
    seed: u64,
    pairs: u64,
    scale: RatioBounds,
    image_w: u32,
    image_h: u32,
    anchor: DistanceAnchor,
    tails: Vec<Tail>,
    baseline_mean_abs_log_ratio: MeanAbs,
    mean_abs_log_ratio: Vec<MeanAbs>,
    distance: Vec<Distance>,
}

fn mean_abs(beta: Option<f64>, analytical: f64, abs_logs: &[f64]) -> MeanAbs {
    let (mean, sd) = mean_and_std(abs_logs);
    MeanAbs {
        beta,
        analytical,
        empirical: mean,
        std_error: sd / (abs_logs.len() as f64).sqrt(),
    }
}

pub fn run(args: &StatsArgs) -> Result<Outcome> {
    let settings = args.config.resolve()?;
    let count = args.count.or(settings.count).unwrap_or(100_000);
    let (seed, config) = (settings.seed, &settings.config);
    let bounds = config.scale;

    let ratios: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|k| sample_independent_areas(bounds, &mut PairStream::new(seed, k)).ratio)
        .collect();
    let tails = args
        .tails
        .iter()
        .map(|&t| {
            Ok(Tail {
                t,
                analytical: tail_probability(t, bounds)?,
                empirical: empirical_two_sided_tail(&ratios, t),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let baseline_abs: Vec<f64> = ratios.iter().map(|r| r.ln().abs()).collect();
    let baseline = mean_abs(
        None,
        BaselineLogRatio::new(bounds).mean_abs(),
        &baseline_abs,
    );

    let mut per_beta = Vec::with_capacity(args.betas.len());
    let mut distance = Vec::with_capacity(args.betas.len());
    for &beta in &args.betas {
        let sampler = JointSampler::new(beta, bounds)?;
        let abs_logs: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|k| {
                sampler
                    .sample(&mut PairStream::new(seed, k))
                    .ratio
                    .ln()
                    .abs()
            })
            .collect();
        per_beta.push(mean_abs(
            Some(beta),
            sampler.distribution().mean_abs(),
            &abs_logs,
        ));

        let profile = distance_profile(
            beta,
            args.distance_count,
            config.image_w,
            config.image_h,
            bounds,
            config.aspect,
            seed,
            args.anchor,
        )?;
        distance.push(Distance {
            profile,
            std_error: profile.std_error(),
        });
    }

    let report = StatsReport {
        seed,
        pairs: count,
        scale: bounds,
        image_w: config.image_w,
        image_h: config.image_h,
        anchor: args.anchor,
        tails,
        baseline_mean_abs_log_ratio: baseline,
        mean_abs_log_ratio: per_beta,
        distance,
    };
    emit(args.report.as_deref(), &to_pretty_json(&report)?)?;
    if let Some(dir) = &args.csv_dir {
        write_csv(dir, &report)?;
    }
    Ok(Outcome::Success)
}

fn write_csv(dir: &std::path::Path, report: &StatsReport) -> Result<()> {
    create_dir(dir)?;
    let mut tails = String::from("t,analytical,empirical\n");
    for t in &report.tails {
        let _ = writeln!(tails, "{},{},{}", t.t, t.analytical, t.empirical);
    }
    let mut means = String::from("beta,analytical,empirical,std_error\n");
    for m in &report.mean_abs_log_ratio {
        let _ = writeln!(
            means,
            "{},{},{},{}",
            m.beta.unwrap_or(f64::NAN),
            m.analytical,
            m.empirical,
            m.std_error
        );
    }
    let mut dist = String::from("beta,sample_count,mean_distance,stddev,std_error\n");
    for d in &report.distance {
        let p = &d.profile;
        let _ = writeln!(
            dist,
            "{},{},{},{},{}",
            p.beta, p.sample_count, p.mean_distance, p.stddev, d.std_error
        );
    }
    emit(Some(&dir.join("tails.csv")), &tails)?;
    emit(Some(&dir.join("mean_abs_log_ratio.csv")), &means)?;
    emit(Some(&dir.join("distance.csv")), &dist)
}
