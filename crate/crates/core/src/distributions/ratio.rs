//! Closed-form law of the area ratio between two independent uniform crops.
//!
//! For `s₁, s₂ ~ U[v_min, v_max]` independently, `X = s₁/s₂` (equivalently
//! `s₂/s₁`) lives on `[v_min/v_max, v_max/v_min]` with
//!
//! ```text
//! f(x) = (v_max² x² − v_min²) / (2 x² (v_max − v_min)²)   for x ≤ 1
//! f(x) = (v_max² − v_min² x²) / (2 x² (v_max − v_min)²)   for x > 1
//! ```
//!
//! At the usual `[0.2, 1]` this gives `F(x) = 25x/32 − 5/16 + 1/(32x)` below 1.

use crate::error::{ensure_finite, Error, Result};

use super::{RatioBounds, ReferenceDistribution};

pub fn randomcrop_ratio_pdf(x: f64, bounds: RatioBounds) -> f64 {
    let (lo, hi) = bounds.ratio_support();
    if !(lo..=hi).contains(&x) {
        return 0.0;
    }
    let (a, b) = (bounds.v_min(), bounds.v_max());
    let denom = 2.0 * x * x * (b - a) * (b - a);
    let num = if x <= 1.0 {
        b * b * x * x - a * a
    } else {
        b * b - a * a * x * x
    };
    (num / denom).max(0.0)
}

pub fn randomcrop_ratio_cdf(x: f64, bounds: RatioBounds) -> f64 {
    let (lo, hi) = bounds.ratio_support();
    if x <= lo {
        return 0.0;
    }
    if x >= hi {
        return 1.0;
    }
    if x <= 1.0 {
        lower_branch_cdf(x, bounds)
    } else {
        // X and 1/X share a law
        1.0 - lower_branch_cdf(1.0 / x, bounds)
    }
}

fn lower_branch_cdf(x: f64, bounds: RatioBounds) -> f64 {
    let (a, b) = (bounds.v_min(), bounds.v_max());
    let v = (0.5 * b * b * x - a * b + 0.5 * a * a / x) / ((b - a) * (b - a));
    v.clamp(0.0, 1.0)
}

/// Two-sided probability that the ratio is at least `t : 1` either way.
pub fn tail_probability(t: f64, bounds: RatioBounds) -> Result<f64> {
    ensure_finite("t", t)?;
    if t <= 1.0 {
        return Err(Error::param(
            "t",
            format!("tail threshold must exceed 1, got {t}"),
        ));
    }
    let p = randomcrop_ratio_cdf(1.0 / t, bounds) + 1.0 - randomcrop_ratio_cdf(t, bounds);
    Ok(p.clamp(0.0, 1.0))
}

/// The baseline ratio law itself, on `[v_min/v_max, v_max/v_min]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineRatio {
    bounds: RatioBounds,
}

impl BaselineRatio {
    pub fn new(bounds: RatioBounds) -> Self {
        Self { bounds }
    }
}

impl ReferenceDistribution for BaselineRatio {
    fn cdf(&self, x: f64) -> f64 {
        randomcrop_ratio_cdf(x, self.bounds)
    }

    fn pdf(&self, x: f64) -> f64 {
        randomcrop_ratio_pdf(x, self.bounds)
    }

    fn support(&self) -> (f64, f64) {
        self.bounds.ratio_support()
    }

    fn describe(&self) -> String {
        format!(
            "independent-uniform ratio, s in [{}, {}]",
            self.bounds.v_min(),
            self.bounds.v_max()
        )
    }
}

/// The baseline ratio law viewed on the log scale, where it is symmetric
/// about 0 and shares its support with JC(β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineLogRatio {
    bounds: RatioBounds,
}

impl BaselineLogRatio {
    pub fn new(bounds: RatioBounds) -> Self {
        Self { bounds }
    }

    /// E|log X| by Simpson quadrature on the log scale.
    pub fn mean_abs(&self) -> f64 {
        let span = self.bounds.log_span();
        let n = 20_000;
        let h = span / n as f64;
        let f = |y: f64| y * ReferenceDistribution::pdf(self, y);
        let mut acc = f(0.0) + f(span);
        for k in 1..n {
            acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        2.0 * acc * h / 3.0
    }
}

impl ReferenceDistribution for BaselineLogRatio {
    fn cdf(&self, y: f64) -> f64 {
        randomcrop_ratio_cdf(y.exp(), self.bounds)
    }

    fn pdf(&self, y: f64) -> f64 {
        let span = self.bounds.log_span();
        if !(-span..=span).contains(&y) {
            return 0.0;
        }
        let x = y.exp();
        randomcrop_ratio_pdf(x, self.bounds) * x
    }

    fn support(&self) -> (f64, f64) {
        let span = self.bounds.log_span();
        (-span, span)
    }

    fn describe(&self) -> String {
        format!(
            "independent-uniform log ratio, s in [{}, {}]",
            self.bounds.v_min(),
            self.bounds.v_max()
        )
    }
}
