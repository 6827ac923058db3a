use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::ReferenceDistribution;
use crate::error::{Error, Result};

pub const MIN_GOF_SAMPLES: usize = 1000;
pub const MIN_GOF_BINS: usize = 10;

/// One histogram bin: its centre and a density value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityPoint {
    pub x: f64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub reference: String,
    pub sample_count: usize,
    /// Samples outside the reference support; excluded from the histogram.
    pub out_of_support: usize,
    /// Kolmogorov–Smirnov statistic `sup |F_n − F|`.
    pub ks_statistic: f64,
    /// `max |F_n − F|` over the histogram bin edges.
    pub max_cdf_deviation: f64,
    /// Empirical density per bin; integrates to 1 over the support.
    pub histogram: Vec<DensityPoint>,
    /// Reference density at the same bin centres.
    pub reference_density: Vec<DensityPoint>,
}

impl GofReport {
    /// `bin_center,empirical,analytical` rows.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_center,empirical,analytical\n");
        for (e, r) in self.histogram.iter().zip(&self.reference_density) {
            let _ = writeln!(out, "{},{},{}", e.x, e.density, r.density);
        }
        out
    }

    /// Empirical density at the bin containing `x`.
    pub fn empirical_density_at(&self, x: f64) -> Option<f64> {
        let first = self.histogram.first()?;
        let width = self.histogram.get(1).map_or(0.0, |b| b.x - first.x);
        self.histogram
            .iter()
            .find(|b| (x - b.x).abs() <= width / 2.0)
            .map(|b| b.density)
    }

    /// Whether the KS statistic is below the asymptotic critical value at
    /// level `alpha`.
    pub fn passes_ks(&self, alpha: f64) -> bool {
        self.ks_statistic < ks_critical_value(self.sample_count, alpha)
    }
}

/// Asymptotic one-sample KS critical value `sqrt(−ln(α/2) / 2) / sqrt(n)`.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Empirical `P(x ≥ t or x ≤ 1/t)` for ratio samples.
pub fn empirical_two_sided_tail(ratios: &[f64], t: f64) -> f64 {
    let hits = ratios
        .par_iter()
        .filter(|&&x| x >= t || x <= 1.0 / t)
        .count();
    hits as f64 / ratios.len() as f64
}

/// Compares samples against a reference law: KS statistic, CDF deviation
/// at bin edges and a density histogram over the reference support.
pub fn gof_report(
    samples: &[f64],
    reference: &dyn ReferenceDistribution,
    bins: usize,
) -> Result<GofReport> {
    if samples.is_empty() {
        return Err(Error::Precondition("no samples".into()));
    }
    if samples.len() < MIN_GOF_SAMPLES {
        return Err(Error::Precondition(format!(
            "goodness-of-fit needs at least {MIN_GOF_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if bins < MIN_GOF_BINS {
        return Err(Error::Precondition(format!(
            "need at least {MIN_GOF_BINS} bins, got {bins}"
        )));
    }
    if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::Precondition(format!("non-finite sample {bad}")));
    }

    let mut sorted = samples.to_vec();
    sorted.par_sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;

    let ks_statistic = sorted
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = reference.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .reduce(|| 0.0, f64::max);

    let (lo, hi) = reference.support();
    let width = (hi - lo) / bins as f64;
    let edge = |k: usize| if k == bins { hi } else { lo + k as f64 * width };

    let max_cdf_deviation = (0..=bins)
        .map(|k| {
            let e = edge(k);
            let below = sorted.partition_point(|&x| x <= e) as f64 / n;
            (below - reference.cdf(e)).abs()
        })
        .fold(0.0, f64::max);

    let mut counts = vec![0usize; bins];
    let mut inside = 0usize;
    for &x in &sorted {
        if (lo..=hi).contains(&x) {
            let k = (((x - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
            inside += 1;
        }
    }
    let norm = if inside == 0 {
        0.0
    } else {
        1.0 / (inside as f64 * width)
    };
    let centre = |k: usize| lo + (k as f64 + 0.5) * width;
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| DensityPoint {
            x: centre(k),
            density: c as f64 * norm,
        })
        .collect();
    let reference_density = (0..bins)
        .map(|k| DensityPoint {
            x: centre(k),
            density: reference.pdf(centre(k)),
        })
        .collect();

    Ok(GofReport {
        reference: reference.describe(),
        sample_count: sorted.len(),
        out_of_support: sorted.len() - inside,
        ks_statistic,
        max_cdf_deviation,
        histogram,
        reference_density,
    })
}
