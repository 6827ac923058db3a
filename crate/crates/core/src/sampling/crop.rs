use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::rng::{uniform_index, PairStream};

/// Smallest image side the crop geometry accepts.
pub const MIN_IMAGE_SIDE: u32 = 8;

/// Integer crop rectangle: top-left `(i, j)` = (column, row), size `w × h`,
/// inside an image of `image_w × image_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CropRegion {
    pub i: u32,
    pub j: u32,
    pub w: u32,
    pub h: u32,
    pub image_w: u32,
    pub image_h: u32,
}

impl CropRegion {
    pub fn full(image_w: u32, image_h: u32) -> Self {
        Self {
            i: 0,
            j: 0,
            w: image_w,
            h: image_h,
            image_w,
            image_h,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let inside = self.w >= 1
            && self.h >= 1
            && u64::from(self.i) + u64::from(self.w) <= u64::from(self.image_w)
            && u64::from(self.j) + u64::from(self.h) <= u64::from(self.image_h);
        if inside {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "crop region {self:?} does not fit its image"
            )))
        }
    }

    /// Fraction of the image area covered.
    pub fn area_fraction(&self) -> f64 {
        f64::from(self.w) * f64::from(self.h) / (f64::from(self.image_w) * f64::from(self.image_h))
    }

    pub fn center(&self) -> (f64, f64) {
        (
            f64::from(self.i) + 0.5 * f64::from(self.w),
            f64::from(self.j) + 0.5 * f64::from(self.h),
        )
    }
}

/// Range of width/height ratios, sampled log-uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AspectRange {
    pub lo: f64,
    pub hi: f64,
}

impl Default for AspectRange {
    fn default() -> Self {
        Self {
            lo: 3.0 / 4.0,
            hi: 4.0 / 3.0,
        }
    }
}

impl AspectRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let range = Self { lo, hi };
        range.validate()?;
        Ok(range)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("aspect_lo", self.lo)?;
        ensure_finite("aspect_hi", self.hi)?;
        if !(self.lo > 0.0 && self.lo <= self.hi) {
            return Err(Error::param(
                "aspect_lo",
                format!("need 0 < lo <= hi, got [{}, {}]", self.lo, self.hi),
            ));
        }
        Ok(())
    }
}

/// A realised crop together with the continuous parameters behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizedCrop {
    pub region: CropRegion,
    /// Aspect ratio actually used, after clamping to the feasible interval.
    pub aspect: f64,
}

/// Aspect ratios for which an area fraction `scale` fits inside `W × H`:
/// `[scale·W/H, W/(scale·H)]`.
pub fn feasible_aspect(scale: f64, image_w: u32, image_h: u32) -> (f64, f64) {
    let (w, h) = (f64::from(image_w), f64::from(image_h));
    (scale * w / h, w / (scale * h))
}

/// Picks the aspect ratio for a crop of area fraction `scale` from one draw.
///
/// Log-uniform over the requested range intersected with the feasible one.
/// If the two do not overlap the feasible endpoint nearest the request is
/// used, so the crop area is never traded away for the aspect ratio.
pub fn choose_aspect(scale: f64, image_w: u32, image_h: u32, aspect: AspectRange, u: f64) -> f64 {
    let (f_lo, f_hi) = feasible_aspect(scale, image_w, image_h);
    let lo = aspect.lo.max(f_lo);
    let hi = aspect.hi.min(f_hi);
    if lo > hi {
        return if aspect.hi < f_lo { f_lo } else { f_hi };
    }
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (ln_lo + u * (ln_hi - ln_lo)).exp().clamp(lo, hi)
}

/// Deterministic core of [`realize_crop`]: three unit draws for aspect,
/// horizontal offset and vertical offset.
pub fn realize_crop_with(
    scale: f64,
    image_w: u32,
    image_h: u32,
    aspect: AspectRange,
    draws: [f64; 3],
) -> Result<RealizedCrop> {
    ensure_finite("scale", scale)?;
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::param(
            "scale",
            format!("area fraction must lie in (0, 1], got {scale}"),
        ));
    }
    if image_w < MIN_IMAGE_SIDE || image_h < MIN_IMAGE_SIDE {
        return Err(Error::UnsupportedInput(format!(
            "image {image_w}x{image_h} is smaller than {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE}"
        )));
    }
    aspect.validate()?;

    let r = choose_aspect(scale, image_w, image_h, aspect, draws[0]);
    let target = scale * f64::from(image_w) * f64::from(image_h);
    let w = ((target * r).sqrt().round() as u32).clamp(1, image_w);
    let h = ((target / r).sqrt().round() as u32).clamp(1, image_h);
    let i = uniform_index(draws[1], image_w - w);
    let j = uniform_index(draws[2], image_h - h);
    Ok(RealizedCrop {
        region: CropRegion {
            i,
            j,
            w,
            h,
            image_w,
            image_h,
        },
        aspect: r,
    })
}

/// Turns an area fraction into a pixel rectangle, consuming three draws.
pub fn realize_crop(
    scale: f64,
    image_w: u32,
    image_h: u32,
    aspect: AspectRange,
    stream: &mut PairStream,
) -> Result<RealizedCrop> {
    let draws = [
        stream.next_open01(),
        stream.next_open01(),
        stream.next_open01(),
    ];
    realize_crop_with(scale, image_w, image_h, aspect, draws)
}
