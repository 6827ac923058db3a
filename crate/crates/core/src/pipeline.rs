//! Pair specification and rendering.
//!
//! [`make_pair_spec`] turns `(config, seed, index)` into a complete record
//! of both views' parameters; [`render_pair`] realises such a record on an
//! image. The two are separate so that a manifest can be replayed exactly.

use rayon::prelude::*;

use crate::config::{AugmentConfig, Mode};
use crate::error::Result;
use crate::imageops::{
    adjust_brightness, adjust_contrast, crop_resize, gaussian_blur, kernel_size_for, ImageBuffer,
};
use crate::io::{JointKind, PairManifestEntry, ViewParams, SCHEMA_VERSION};
use crate::rng::PairStream;
use crate::sampling::{
    color_bounds, realize_crop, sample_independent_areas, BlurSpec, ColorSpec, JointSampler,
    PairedScale,
};

/// Image id used when parameters are sampled without a source image.
pub fn default_image_id(index: u64) -> String {
    format!("pair-{index:08}")
}

/// Builds the full parameter record for pair `index` of an image of
/// `image_w × image_h`.
///
/// All randomness comes from the counter stream keyed by
/// `(base_seed, index)`, drawn in a fixed order:
///
/// 1. crop-or-blur choice (joint-crop-or-blur only);
/// 2. the two area fractions;
/// 3. aspect and offsets of view A, then of view B;
/// 4. the two blur-apply coins, then the two sigmas;
/// 5. brightness pair, then contrast pair (joint-color only).
pub fn make_pair_spec(
    config: &AugmentConfig,
    image_id: &str,
    image_w: u32,
    image_h: u32,
    base_seed: u64,
    index: u64,
) -> Result<PairManifestEntry> {
    let mut stream = PairStream::new(base_seed, index);

    let joint = match config.mode {
        Mode::RandomCrop => None,
        Mode::JointCrop => Some(JointKind::Crop),
        Mode::JointBlur => Some(JointKind::Blur),
        Mode::JointColor => Some(JointKind::Color),
        Mode::JointCropOrBlur => {
            if stream.next_open01() < config.crop_prob {
                Some(JointKind::Crop)
            } else {
                Some(JointKind::Blur)
            }
        }
    };

    let areas = if joint == Some(JointKind::Crop) {
        JointSampler::new(config.beta, config.scale)?.sample(&mut stream)
    } else {
        sample_independent_areas(config.scale, &mut stream)
    };
    let crop_a = realize_crop(areas.s1, image_w, image_h, config.aspect, &mut stream)?;
    let crop_b = realize_crop(areas.s2, image_w, image_h, config.aspect, &mut stream)?;

    let apply_a = stream.next_open01() < config.blur_prob_a;
    let apply_b = stream.next_open01() < config.blur_prob_b;
    let sigmas = if joint == Some(JointKind::Blur) {
        JointSampler::new(config.beta, config.sigma)?.sample(&mut stream)
    } else {
        sample_independent_areas(config.sigma, &mut stream)
    };
    let kernel_size = kernel_size_for(config.out_size);
    let blur_a = apply_a
        .then(|| BlurSpec::new(sigmas.s1, kernel_size))
        .transpose()?;
    let blur_b = apply_b
        .then(|| BlurSpec::new(sigmas.s2, kernel_size))
        .transpose()?;

    let (color_a, color_b) = if config.mode == Mode::JointColor {
        let bounds = color_bounds(config.color_factor)?;
        let joint_sampler = JointSampler::new(config.beta, bounds)?;
        let draw = |controlled: bool, stream: &mut PairStream| -> PairedScale {
            if controlled {
                joint_sampler.sample(stream)
            } else {
                sample_independent_areas(bounds, stream)
            }
        };
        let b = draw(config.color_target.brightness(), &mut stream);
        let c = draw(config.color_target.contrast(), &mut stream);
        (
            Some(ColorSpec {
                brightness: b.s1,
                contrast: c.s1,
            }),
            Some(ColorSpec {
                brightness: b.s2,
                contrast: c.s2,
            }),
        )
    } else {
        (None, None)
    };

    Ok(PairManifestEntry {
        schema_version: SCHEMA_VERSION,
        image_id: image_id.to_owned(),
        index,
        seed: base_seed,
        mode: config.mode,
        beta: config.beta,
        joint,
        out_size: config.out_size,
        view_a: ViewParams {
            scale: areas.s1,
            aspect: crop_a.aspect,
            crop: crop_a.region,
            blur: blur_a,
            color: color_a,
        },
        view_b: ViewParams {
            scale: areas.s2,
            aspect: crop_b.aspect,
            crop: crop_b.region,
            blur: blur_b,
            color: color_b,
        },
    })
}

/// Produces one view: crop and resize, then colour, then blur.
pub fn render_view(img: &ImageBuffer, view: &ViewParams, out_size: u32) -> Result<ImageBuffer> {
    let mut out = crop_resize(img, &view.crop, out_size, out_size)?;
    if let Some(color) = view.color {
        out = adjust_brightness(&out, color.brightness)?;
        out = adjust_contrast(&out, color.contrast)?;
    }
    if let Some(blur) = view.blur {
        out = gaussian_blur(&out, &blur)?;
    }
    Ok(out)
}

pub fn render_pair(
    img: &ImageBuffer,
    entry: &PairManifestEntry,
) -> Result<(ImageBuffer, ImageBuffer)> {
    Ok((
        render_view(img, &entry.view_a, entry.out_size)?,
        render_view(img, &entry.view_b, entry.out_size)?,
    ))
}

/// A validated config bound to a base seed; the handle native bindings wrap.
///
/// Immutable after construction, so it can be shared across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSampler {
    config: AugmentConfig,
    seed: u64,
}

impl PairSampler {
    pub fn new(config: AugmentConfig, seed: u64) -> Self {
        Self { config, seed }
    }

    /// From a key/value mapping: the config keys plus an optional `seed`.
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let mut value = value;
        let seed = match value.as_object_mut().and_then(|m| m.remove("seed")) {
            None => 0,
            Some(v) => v.as_u64().ok_or_else(|| {
                crate::Error::Config(format!("`seed` must be a non-negative integer, got {v}"))
            })?,
        };
        Ok(Self::new(AugmentConfig::from_json(value)?, seed))
    }

    pub fn config(&self) -> &AugmentConfig {
        &self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> Mode {
        self.config.mode
    }

    pub fn beta(&self) -> f64 {
        self.config.beta
    }

    /// Parameters for pair `index` on the configured source size; identical
    /// to the corresponding `sample` manifest line.
    pub fn pair_params(&self, index: u64) -> Result<PairManifestEntry> {
        make_pair_spec(
            &self.config,
            &default_image_id(index),
            self.config.image_w,
            self.config.image_h,
            self.seed,
            index,
        )
    }

    /// Parameters for pair `index` on a concrete image.
    pub fn pair_params_for(
        &self,
        image_id: &str,
        image_w: u32,
        image_h: u32,
        index: u64,
    ) -> Result<PairManifestEntry> {
        make_pair_spec(&self.config, image_id, image_w, image_h, self.seed, index)
    }

    /// Samples and renders both views; the input is never modified.
    pub fn augment_pair(
        &self,
        img: &ImageBuffer,
        image_id: &str,
        index: u64,
    ) -> Result<(ImageBuffer, ImageBuffer)> {
        let entry = self.pair_params_for(image_id, img.width(), img.height(), index)?;
        render_pair(img, &entry)
    }

    /// Parameter records for `indices`, computed in parallel, returned in
    /// index order.
    pub fn batch(&self, indices: std::ops::Range<u64>) -> Result<Vec<PairManifestEntry>> {
        indices
            .into_par_iter()
            .map(|k| self.pair_params(k))
            .collect()
    }
}
