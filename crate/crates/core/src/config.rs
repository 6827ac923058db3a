//! Augmentation configuration shared by the CLI, the batch generator and
//! native bindings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::RatioBounds;
use crate::error::{ensure_finite, Error, Result};
use crate::sampling::{color_bounds, AspectRange, MIN_IMAGE_SIDE};

/// Largest |β| accepted; beyond this JC(β) is numerically a point mass.
pub const BETA_LIMIT: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Independent crops, the baseline.
    RandomCrop,
    JointCrop,
    JointBlur,
    JointColor,
    /// Per pair, either the crop or the blur is jointly controlled.
    JointCropOrBlur,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::RandomCrop,
        Mode::JointCrop,
        Mode::JointBlur,
        Mode::JointColor,
        Mode::JointCropOrBlur,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::RandomCrop => "random-crop",
            Mode::JointCrop => "joint-crop",
            Mode::JointBlur => "joint-blur",
            Mode::JointColor => "joint-color",
            Mode::JointCropOrBlur => "joint-crop-or-blur",
        }
    }

    /// Blur-apply probability for both views when the config leaves it unset.
    pub fn default_blur_prob(&self) -> f64 {
        match self {
            Mode::JointBlur | Mode::JointCropOrBlur => 1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown mode `{s}` (expected one of {})",
                    mode_names()
                ))
            })
    }
}

fn mode_names() -> String {
    Mode::ALL
        .iter()
        .map(Mode::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Which colour property JointColor controls; the other is jittered
/// independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorTarget {
    #[default]
    Brightness,
    Contrast,
    /// Both at once. Experimental.
    Both,
}

impl FromStr for ColorTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brightness" => Ok(ColorTarget::Brightness),
            "contrast" => Ok(ColorTarget::Contrast),
            "both" => Ok(ColorTarget::Both),
            _ => Err(Error::Config(format!(
                "unknown color target `{s}` (brightness, contrast, both)"
            ))),
        }
    }
}

impl ColorTarget {
    pub fn brightness(&self) -> bool {
        matches!(self, ColorTarget::Brightness | ColorTarget::Both)
    }

    pub fn contrast(&self) -> bool {
        matches!(self, ColorTarget::Contrast | ColorTarget::Both)
    }
}

/// Validated sampling configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentConfig {
    pub mode: Mode,
    pub beta: f64,
    pub scale: RatioBounds,
    pub sigma: RatioBounds,
    pub color_factor: f64,
    pub color_target: ColorTarget,
    pub aspect: AspectRange,
    pub out_size: u32,
    pub blur_prob_a: f64,
    pub blur_prob_b: f64,
    /// Probability that a joint-crop-or-blur pair controls the crop.
    pub crop_prob: f64,
    /// Source size assumed when sampling parameters without pixels.
    pub image_w: u32,
    pub image_h: u32,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        ConfigOverrides::default()
            .resolve()
            .expect("defaults are valid")
    }
}

/// Every configurable field, all optional. Unknown keys are rejected.
///
/// This is the on-disk (TOML/JSON) and mapping form of [`AugmentConfig`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub mode: Option<String>,
    pub beta: Option<f64>,
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub color_factor: Option<f64>,
    pub color_target: Option<String>,
    pub aspect_lo: Option<f64>,
    pub aspect_hi: Option<f64>,
    pub out_size: Option<u32>,
    pub blur_prob_a: Option<f64>,
    pub blur_prob_b: Option<f64>,
    pub crop_prob: Option<f64>,
    pub image_w: Option<u32>,
    pub image_h: Option<u32>,
}

macro_rules! take_some {
    ($dst:ident, $src:ident; $($field:ident),*) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl ConfigOverrides {
    /// Fields set in `other` replace those in `self`.
    pub fn merge(mut self, other: &ConfigOverrides) -> Self {
        take_some!(self, other; mode, beta, s_min, s_max, sigma_min, sigma_max, color_factor, color_target,
            aspect_lo, aspect_hi, out_size, blur_prob_a, blur_prob_b, crop_prob, image_w, image_h);
        self
    }

    pub fn resolve(&self) -> Result<AugmentConfig> {
        let mode = match &self.mode {
            Some(m) => m.parse()?,
            None => Mode::JointCrop,
        };
        let beta = self.beta.unwrap_or(0.0);
        ensure_finite("beta", beta)?;
        if beta.abs() > BETA_LIMIT {
            return Err(Error::param(
                "beta",
                format!("must lie in [-{BETA_LIMIT}, {BETA_LIMIT}], got {beta}"),
            ));
        }
        let scale = RatioBounds::new(self.s_min.unwrap_or(0.2), self.s_max.unwrap_or(1.0))?;
        if scale.v_max() > 1.0 {
            return Err(Error::param(
                "s_max",
                format!("area fraction cannot exceed 1, got {}", scale.v_max()),
            ));
        }
        let sigma = RatioBounds::new(self.sigma_min.unwrap_or(0.1), self.sigma_max.unwrap_or(2.0))?;
        let color_factor = self.color_factor.unwrap_or(0.4);
        color_bounds(color_factor)?;
        let color_target = match &self.color_target {
            Some(t) => t.parse()?,
            None => ColorTarget::default(),
        };
        let defaults = AspectRange::default();
        let aspect = AspectRange::new(
            self.aspect_lo.unwrap_or(defaults.lo),
            self.aspect_hi.unwrap_or(defaults.hi),
        )?;
        let out_size = self.out_size.unwrap_or(224);
        if out_size < MIN_IMAGE_SIDE {
            return Err(Error::param(
                "out_size",
                format!("must be at least {MIN_IMAGE_SIDE}, got {out_size}"),
            ));
        }
        let blur_prob_a = probability(
            "blur_prob_a",
            self.blur_prob_a.unwrap_or(mode.default_blur_prob()),
        )?;
        let blur_prob_b = probability(
            "blur_prob_b",
            self.blur_prob_b.unwrap_or(mode.default_blur_prob()),
        )?;
        let crop_prob = probability("crop_prob", self.crop_prob.unwrap_or(0.5))?;
        let image_w = self.image_w.unwrap_or(224);
        let image_h = self.image_h.unwrap_or(224);
        if image_w < MIN_IMAGE_SIDE || image_h < MIN_IMAGE_SIDE {
            return Err(Error::param(
                "image_w",
                format!("source size must be at least {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE}"),
            ));
        }
        Ok(AugmentConfig {
            mode,
            beta,
            scale,
            sigma,
            color_factor,
            color_target,
            aspect,
            out_size,
            blur_prob_a,
            blur_prob_b,
            crop_prob,
            image_w,
            image_h,
        })
    }
}

fn probability(name: &'static str, p: f64) -> Result<f64> {
    ensure_finite(name, p)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(
            name,
            format!("probability must lie in [0, 1], got {p}"),
        ));
    }
    Ok(p)
}

impl AugmentConfig {
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let overrides: ConfigOverrides =
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        overrides.resolve()
    }

    /// The fully-populated override set that resolves back to `self`.
    pub fn to_overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            mode: Some(self.mode.as_str().to_owned()),
            beta: Some(self.beta),
            s_min: Some(self.scale.v_min()),
            s_max: Some(self.scale.v_max()),
            sigma_min: Some(self.sigma.v_min()),
            sigma_max: Some(self.sigma.v_max()),
            color_factor: Some(self.color_factor),
            color_target: Some(
                match self.color_target {
                    ColorTarget::Brightness => "brightness",
                    ColorTarget::Contrast => "contrast",
                    ColorTarget::Both => "both",
                }
                .to_owned(),
            ),
            aspect_lo: Some(self.aspect.lo),
            aspect_hi: Some(self.aspect.hi),
            out_size: Some(self.out_size),
            blur_prob_a: Some(self.blur_prob_a),
            blur_prob_b: Some(self.blur_prob_b),
            crop_prob: Some(self.crop_prob),
            image_w: Some(self.image_w),
            image_h: Some(self.image_h),
        }
    }
}
