use rayon::prelude::*;

use super::{quantize, ImageBuffer};
use crate::error::{Error, Result};
use crate::sampling::BlurSpec;

/// Kernel side for a view of the given side: 10% of it, made odd, at least 3.
pub fn kernel_size_for(side: u32) -> u32 {
    let mut k = side / 10;
    if k.is_multiple_of(2) {
        k += 1;
    }
    k.max(3)
}

/// Normalised 1-D Gaussian taps, centre at index `size / 2`.
pub fn gaussian_kernel(sigma: f64, size: u32) -> Vec<f64> {
    let radius = (size / 2) as i64;
    let denom = 2.0 * sigma * sigma;
    let raw: Vec<f64> = (-radius..=radius)
        .map(|x| (-((x * x) as f64) / denom).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Mirror index into `0..len` without repeating the edge sample
/// (`-1 → 1`, `len → len - 2`). Valid while `|overshoot| < len`.
#[inline]
fn reflect(idx: isize, len: isize) -> usize {
    let mut i = idx;
    if i < 0 {
        i = -i;
    }
    if i >= len {
        i = 2 * (len - 1) - i;
    }
    i as usize
}

/// f32 taps with subnormal weights flushed to zero and zero tails dropped.
///
/// Returns the taps and the offset of the first one relative to the centre.
/// Flushed taps are below `1e-38` and cannot move a sum of 8-bit samples.
fn effective_kernel(sigma: f64, size: u32) -> (Vec<f32>, isize) {
    let full: Vec<f32> = gaussian_kernel(sigma, size)
        .into_iter()
        .map(|v| {
            let w = v as f32;
            if w < f32::MIN_POSITIVE {
                0.0
            } else {
                w
            }
        })
        .collect();
    let skip = full.iter().take_while(|&&w| w == 0.0).count();
    let kept = full[skip..full.len() - skip].to_vec();
    (kept, skip as isize - (size / 2) as isize)
}

/// Separable Gaussian blur: horizontal pass, then vertical, mirrored borders.
pub fn gaussian_blur(img: &ImageBuffer, spec: &BlurSpec) -> Result<ImageBuffer> {
    spec.validate()?;
    let (w, h) = (img.width(), img.height());
    if spec.kernel_size > w.min(h) {
        return Err(Error::Precondition(format!(
            "kernel of size {} does not fit a {w}x{h} image",
            spec.kernel_size
        )));
    }
    let (kernel, start) = effective_kernel(spec.sigma, spec.kernel_size);
    let pad = -start as usize;
    let channels = img.channels() as usize;
    let row_len = img.row_len();
    let src = img.as_bytes();

    let mut horizontal = vec![0f32; src.len()];
    horizontal
        .par_chunks_mut(row_len)
        .enumerate()
        .for_each(|(y, out)| {
            let row = &src[y * row_len..(y + 1) * row_len];
            let padded: Vec<f32> = (-(pad as isize)..(w as usize + pad) as isize)
                .flat_map(|x| {
                    let sx = reflect(x, w as isize);
                    row[sx * channels..(sx + 1) * channels]
                        .iter()
                        .map(|&v| f32::from(v))
                })
                .collect();
            for (i, dst) in out.iter_mut().enumerate() {
                let mut acc = 0f32;
                for (k, weight) in kernel.iter().enumerate() {
                    acc += weight * padded[i + k * channels];
                }
                *dst = acc;
            }
        });

    let mut out = vec![0u8; src.len()];
    out.par_chunks_mut(row_len)
        .enumerate()
        .for_each(|(y, row)| {
            let mut acc = vec![0f32; row_len];
            for (k, weight) in kernel.iter().enumerate() {
                let sy = reflect(y as isize + start + k as isize, h as isize);
                let src_row = &horizontal[sy * row_len..(sy + 1) * row_len];
                for (a, &v) in acc.iter_mut().zip(src_row) {
                    *a += weight * v;
                }
            }
            for (dst, a) in row.iter_mut().zip(acc) {
                *dst = quantize(a);
            }
        });

    Ok(img.with_same_shape(out))
}
