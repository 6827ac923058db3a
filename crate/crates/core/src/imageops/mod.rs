//! Pixel-level transforms on 8-bit rasters.
//!
//! Every transform works in an `f32` workspace and re-quantises once at the
//! end, rounding half away from zero and clamping to `[0, 255]`.

mod blur;
mod color;
mod resize;

use crate::error::{Error, Result};

pub use blur::{gaussian_blur, gaussian_kernel, kernel_size_for};
pub use color::{adjust_brightness, adjust_contrast, mean_luma};
pub use resize::crop_resize;

/// Row-major interleaved 8-bit raster with 1 (gray) or 3 (RGB) channels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::UnsupportedInput(format!(
                "empty image {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::UnsupportedInput(format!(
                "{channels} channels; only 1 or 3 are supported"
            )));
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Result<Self> {
        let len = width as usize * height as usize * channels as usize;
        Self::new(width, height, channels, vec![value; len])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }

    pub fn row_len(&self) -> usize {
        self.width as usize * self.channels as usize
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32, c: u8) -> u8 {
        self.data
            [(y as usize * self.width as usize + x as usize) * self.channels as usize + c as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, c: u8, v: u8) {
        let idx =
            (y as usize * self.width as usize + x as usize) * self.channels as usize + c as usize;
        self.data[idx] = v;
    }

    pub(crate) fn with_same_shape(&self, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), self.data.len());
        Self {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data,
        }
    }
}

/// `clamp(round_half_away(v), 0, 255)`, without a libm call.
///
/// `v - trunc(v)` is exact in f32, so the comparison with 0.5 decides the
/// rounding exactly.
#[inline]
pub(crate) fn quantize(v: f32) -> u8 {
    let v = v.clamp(0.0, 255.0);
    let t = v as u8;
    t + u8::from(v - f32::from(t) >= 0.5)
}
