//! Ratio distributions: JC(β), the truncated normal it is built from, and
//! the closed-form area-ratio law of two independent uniform crops.

mod jc;
pub mod normal;
mod ratio;
mod truncated;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

pub use jc::{jc_pdf, jc_sample, JcDistribution};
pub use ratio::{
    randomcrop_ratio_cdf, randomcrop_ratio_pdf, tail_probability, BaselineLogRatio, BaselineRatio,
};
pub use truncated::{truncated_normal_sample, TruncatedNormal};

/// A positive parameter range `[v_min, v_max]` and its log span
/// `ln(v_max / v_min)`, the half-width of the log-ratio support.
///
/// Used for crop-area fractions, blur sigmas and colour factors alike.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBounds", into = "RawBounds")]
pub struct RatioBounds {
    v_min: f64,
    v_max: f64,
    log_span: f64,
}

#[derive(Serialize, Deserialize)]
struct RawBounds {
    min: f64,
    max: f64,
}

impl TryFrom<RawBounds> for RatioBounds {
    type Error = Error;

    fn try_from(raw: RawBounds) -> Result<Self> {
        RatioBounds::new(raw.min, raw.max)
    }
}

impl From<RatioBounds> for RawBounds {
    fn from(b: RatioBounds) -> Self {
        RawBounds {
            min: b.v_min,
            max: b.v_max,
        }
    }
}

impl RatioBounds {
    pub fn new(v_min: f64, v_max: f64) -> Result<Self> {
        ensure_finite("v_min", v_min)?;
        ensure_finite("v_max", v_max)?;
        if v_min <= 0.0 {
            return Err(Error::param(
                "v_min",
                format!("must be positive, got {v_min}"),
            ));
        }
        if v_min >= v_max {
            return Err(Error::param(
                "v_max",
                format!("must exceed v_min ({v_min}), got {v_max}"),
            ));
        }
        let log_span = v_max.ln() - v_min.ln();
        Ok(Self {
            v_min,
            v_max,
            log_span,
        })
    }

    pub fn v_min(&self) -> f64 {
        self.v_min
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    pub fn log_span(&self) -> f64 {
        self.log_span
    }

    /// `[v_min / v_max, v_max / v_min]`.
    pub fn ratio_support(&self) -> (f64, f64) {
        (self.v_min / self.v_max, self.v_max / self.v_min)
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.v_min..=self.v_max).contains(&v)
    }

    /// Maps a unit draw onto `[v_min, v_max]`.
    #[inline]
    pub fn lerp(&self, u: f64) -> f64 {
        (self.v_min + (self.v_max - self.v_min) * u).clamp(self.v_min, self.v_max)
    }
}

/// A continuous law with known CDF and density, used as the reference in
/// goodness-of-fit reports.
pub trait ReferenceDistribution: Sync {
    fn cdf(&self, x: f64) -> f64;
    fn pdf(&self, x: f64) -> f64;
    /// Closed interval carrying all the mass.
    fn support(&self) -> (f64, f64);
    fn describe(&self) -> String;
}
