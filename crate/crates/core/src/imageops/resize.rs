use rayon::prelude::*;

use super::{quantize, ImageBuffer};
use crate::error::{Error, Result};
use crate::sampling::CropRegion;

/// Source taps for one output coordinate: two neighbours and the weight of
/// the second.
#[derive(Debug, Clone, Copy)]
struct Tap {
    first: usize,
    second: usize,
    t: f32,
}

/// Half-pixel-centre mapping of `out_len` samples onto `len` source samples
/// starting at `offset`, clamped to the region so pixels outside it never
/// contribute.
fn taps(offset: u32, len: u32, out_len: u32) -> Vec<Tap> {
    let scale = f64::from(len) / f64::from(out_len);
    let last = f64::from(len - 1);
    (0..out_len)
        .map(|o| {
            let src = ((f64::from(o) + 0.5) * scale - 0.5).clamp(0.0, last);
            let first = src.floor();
            let t = (src - first) as f32;
            let first = first as u32;
            let second = (first + 1).min(len - 1);
            Tap {
                first: (offset + first) as usize,
                second: (offset + second) as usize,
                t,
            }
        })
        .collect()
}

/// Extracts `region` and resizes it to `out_w × out_h` by bilinear
/// interpolation with half-pixel centres.
pub fn crop_resize(
    img: &ImageBuffer,
    region: &CropRegion,
    out_w: u32,
    out_h: u32,
) -> Result<ImageBuffer> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::Precondition(format!(
            "output size {out_w}x{out_h} is empty"
        )));
    }
    let fits = region.w >= 1
        && region.h >= 1
        && u64::from(region.i) + u64::from(region.w) <= u64::from(img.width())
        && u64::from(region.j) + u64::from(region.h) <= u64::from(img.height());
    if !fits {
        return Err(Error::Precondition(format!(
            "crop region {region:?} exceeds the {}x{} image",
            img.width(),
            img.height()
        )));
    }

    let channels = img.channels() as usize;
    let xs = taps(region.i, region.w, out_w);
    let ys = taps(region.j, region.h, out_h);
    let src = img.as_bytes();
    let src_row = img.row_len();
    let out_row = out_w as usize * channels;
    let mut out = vec![0u8; out_row * out_h as usize];

    out.par_chunks_mut(out_row)
        .zip(ys.par_iter())
        .for_each(|(row, ty)| {
            let top = &src[ty.first * src_row..(ty.first + 1) * src_row];
            let bottom = &src[ty.second * src_row..(ty.second + 1) * src_row];
            for (ox, tx) in xs.iter().enumerate() {
                for c in 0..channels {
                    let p00 = f32::from(top[tx.first * channels + c]);
                    let p01 = f32::from(top[tx.second * channels + c]);
                    let p10 = f32::from(bottom[tx.first * channels + c]);
                    let p11 = f32::from(bottom[tx.second * channels + c]);
                    let upper = (1.0 - tx.t) * p00 + tx.t * p01;
                    let lower = (1.0 - tx.t) * p10 + tx.t * p11;
                    row[ox * channels + c] = quantize((1.0 - ty.t) * upper + ty.t * lower);
                }
            }
        });

    ImageBuffer::new(out_w, out_h, img.channels(), out)
}
