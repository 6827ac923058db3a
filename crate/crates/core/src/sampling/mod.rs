//! Paired parameter samplers.
//!
//! The joint samplers draw the log-ratio between the two views first, from
//! JC(β), and only then place the first value inside the range that keeps
//! both values in bounds. The independent baselines draw each value alone.

mod crop;

use serde::{Deserialize, Serialize};

use crate::distributions::{JcDistribution, RatioBounds};
use crate::error::{ensure_finite, Error, Result};
use crate::rng::PairStream;

pub use crop::{
    choose_aspect, feasible_aspect, realize_crop, realize_crop_with, AspectRange, CropRegion,
    RealizedCrop, MIN_IMAGE_SIDE,
};

/// Two correlated values and the ratio `second / first` that governed them.
///
/// Used for crop-area fractions, blur sigmas and colour factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedScale {
    pub s1: f64,
    pub s2: f64,
    pub ratio: f64,
}

/// Blur parameters for one view.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlurSpec {
    pub sigma: f64,
    pub kernel_size: u32,
}

impl BlurSpec {
    pub fn new(sigma: f64, kernel_size: u32) -> Result<Self> {
        let spec = Self { sigma, kernel_size };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("sigma", self.sigma)?;
        if self.sigma <= 0.0 {
            return Err(Error::param(
                "sigma",
                format!("must be positive, got {}", self.sigma),
            ));
        }
        if self.kernel_size < 3 || self.kernel_size.is_multiple_of(2) {
            return Err(Error::param(
                "kernel_size",
                format!("must be odd and >= 3, got {}", self.kernel_size),
            ));
        }
        Ok(())
    }
}

/// Colour-jitter factors for one view.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorSpec {
    pub brightness: f64,
    pub contrast: f64,
}

impl ColorSpec {
    pub const IDENTITY: ColorSpec = ColorSpec {
        brightness: 1.0,
        contrast: 1.0,
    };
}

/// The range `[max(v_min, v_min/r), min(v_max/r, v_max)]` of first values
/// whose partner `first · r` stays inside the bounds.
///
/// Collapses to a single point at the extreme ratios `v_max/v_min` and
/// `v_min/v_max`, where rounding can otherwise invert it.
pub fn joint_interval(ratio: f64, bounds: RatioBounds) -> (f64, f64) {
    let lo = bounds.v_min().max(bounds.v_min() / ratio);
    let hi = (bounds.v_max() / ratio).min(bounds.v_max());
    if hi < lo {
        (lo, lo)
    } else {
        (lo, hi)
    }
}

/// Places a pair with the given ratio inside `bounds` using one draw.
pub fn pair_for_ratio(ratio: f64, bounds: RatioBounds, u: f64) -> PairedScale {
    let (lo, hi) = joint_interval(ratio, bounds);
    let s1 = (lo + (hi - lo) * u).clamp(lo, hi);
    let s2 = (s1 * ratio).clamp(bounds.v_min(), bounds.v_max());
    PairedScale { s1, s2, ratio }
}

/// JC(β)-controlled pair sampler over one parameter range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSampler {
    dist: JcDistribution,
}

impl JointSampler {
    pub fn new(beta: f64, bounds: RatioBounds) -> Result<Self> {
        Ok(Self {
            dist: JcDistribution::new(beta, bounds)?,
        })
    }

    pub fn distribution(&self) -> &JcDistribution {
        &self.dist
    }

    pub fn bounds(&self) -> RatioBounds {
        self.dist.bounds()
    }

    /// Two draws: the log-ratio, then the position of the first value.
    pub fn sample(&self, stream: &mut PairStream) -> PairedScale {
        let log_ratio = self.dist.sample(stream.next_open01());
        pair_for_ratio(log_ratio.exp(), self.bounds(), stream.next_open01())
    }
}

/// JointCrop area fractions.
pub fn sample_joint_areas(
    beta: f64,
    bounds: RatioBounds,
    stream: &mut PairStream,
) -> Result<PairedScale> {
    Ok(JointSampler::new(beta, bounds)?.sample(stream))
}

/// The baseline: two independent uniform draws.
pub fn sample_independent_areas(bounds: RatioBounds, stream: &mut PairStream) -> PairedScale {
    let s1 = bounds.lerp(stream.next_open01());
    let s2 = bounds.lerp(stream.next_open01());
    PairedScale {
        s1,
        s2,
        ratio: s2 / s1,
    }
}

/// JointBlur: sigmas whose log-ratio follows JC(β) over `sigma_bounds`.
pub fn sample_joint_sigmas(
    beta: f64,
    sigma_bounds: RatioBounds,
    kernel_size: u32,
    stream: &mut PairStream,
) -> Result<(BlurSpec, BlurSpec)> {
    let pair = JointSampler::new(beta, sigma_bounds)?.sample(stream);
    Ok((
        BlurSpec::new(pair.s1, kernel_size)?,
        BlurSpec::new(pair.s2, kernel_size)?,
    ))
}

/// `[1 − f, 1 + f]`, the colour-jitter factor range.
pub fn color_bounds(factor_range: f64) -> Result<RatioBounds> {
    ensure_finite("color_factor", factor_range)?;
    if !(factor_range > 0.0 && factor_range < 1.0) {
        return Err(Error::param(
            "color_factor",
            format!("must lie in (0, 1) so factors stay positive, got {factor_range}"),
        ));
    }
    RatioBounds::new(1.0 - factor_range, 1.0 + factor_range)
}

/// JointColor: one property's factors for the two views.
pub fn sample_joint_color(
    beta: f64,
    factor_range: f64,
    stream: &mut PairStream,
) -> Result<PairedScale> {
    Ok(JointSampler::new(beta, color_bounds(factor_range)?)?.sample(stream))
}
