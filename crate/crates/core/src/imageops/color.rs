use super::{quantize, ImageBuffer};
use crate::error::{ensure_finite, Error, Result};

fn check_factor(name: &'static str, v: f64) -> Result<f32> {
    ensure_finite(name, v)?;
    if v < 0.0 {
        return Err(Error::param(name, format!("must be non-negative, got {v}")));
    }
    Ok(v as f32)
}

/// Scales every sample by `b`.
pub fn adjust_brightness(img: &ImageBuffer, b: f64) -> Result<ImageBuffer> {
    let b = check_factor("brightness", b)?;
    let out = img
        .as_bytes()
        .iter()
        .map(|&v| quantize(f32::from(v) * b))
        .collect();
    Ok(img.with_same_shape(out))
}

/// Mean luma (0.299 R + 0.587 G + 0.114 B; the sample itself for gray).
pub fn mean_luma(img: &ImageBuffer) -> f64 {
    let px = img.as_bytes();
    let total: f64 = if img.channels() == 1 {
        px.iter().map(|&v| f64::from(v)).sum()
    } else {
        px.chunks_exact(3)
            .map(|p| 0.299 * f64::from(p[0]) + 0.587 * f64::from(p[1]) + 0.114 * f64::from(p[2]))
            .sum()
    };
    total / (img.width() as f64 * img.height() as f64)
}

/// Interpolates every sample towards the mean luma: `m(1 − c) + v c`.
pub fn adjust_contrast(img: &ImageBuffer, c: f64) -> Result<ImageBuffer> {
    let c = check_factor("contrast", c)?;
    let m = mean_luma(img) as f32;
    let offset = m * (1.0 - c);
    let out = img
        .as_bytes()
        .iter()
        .map(|&v| quantize(offset + f32::from(v) * c))
        .collect();
    Ok(img.with_same_shape(out))
}
