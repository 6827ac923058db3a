use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::summation::mean_and_std;
use crate::distributions::RatioBounds;
use crate::error::{Error, Result};
use crate::rng::PairStream;
use crate::sampling::{realize_crop, AspectRange, CropRegion, JointSampler};

/// Which point of a crop rectangle represents its position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceAnchor {
    #[default]
    TopLeft,
    Center,
}

impl std::str::FromStr for DistanceAnchor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top-left" => Ok(Self::TopLeft),
            "center" => Ok(Self::Center),
            _ => Err(Error::Config(format!(
                "unknown distance anchor `{s}` (top-left, center)"
            ))),
        }
    }
}

/// Euclidean distance in pixels between two crops of the same image.
pub fn pair_distance(a: &CropRegion, b: &CropRegion, anchor: DistanceAnchor) -> Result<f64> {
    if (a.image_w, a.image_h) != (b.image_w, b.image_h) {
        return Err(Error::Precondition(format!(
            "crops come from different images: {}x{} vs {}x{}",
            a.image_w, a.image_h, b.image_w, b.image_h
        )));
    }
    let (pa, pb) = match anchor {
        DistanceAnchor::TopLeft => (
            (f64::from(a.i), f64::from(a.j)),
            (f64::from(b.i), f64::from(b.j)),
        ),
        DistanceAnchor::Center => (a.center(), b.center()),
    };
    Ok((pa.0 - pb.0).hypot(pa.1 - pb.1))
}

/// Summary of crop-to-crop distances for one β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceProfile {
    pub beta: f64,
    pub sample_count: usize,
    pub mean_distance: f64,
    pub stddev: f64,
}

impl DistanceProfile {
    pub fn std_error(&self) -> f64 {
        self.stddev / (self.sample_count as f64).sqrt()
    }
}

pub const MIN_PROFILE_SAMPLES: usize = 1000;

/// Draws `n` JointCrop pairs and summarises the distance between their
/// crops. Pair `k` uses stream `(seed, k)`.
#[allow(clippy::too_many_arguments)]
pub fn distance_profile(
    beta: f64,
    n: usize,
    image_w: u32,
    image_h: u32,
    bounds: RatioBounds,
    aspect: AspectRange,
    seed: u64,
    anchor: DistanceAnchor,
) -> Result<DistanceProfile> {
    if n < MIN_PROFILE_SAMPLES {
        return Err(Error::Precondition(format!(
            "distance profile needs n >= {MIN_PROFILE_SAMPLES}, got {n}"
        )));
    }
    let sampler = JointSampler::new(beta, bounds)?;
    let distances = (0..n as u64)
        .into_par_iter()
        .map(|k| {
            let mut stream = PairStream::new(seed, k);
            let pair = sampler.sample(&mut stream);
            let a = realize_crop(pair.s1, image_w, image_h, aspect, &mut stream)?;
            let b = realize_crop(pair.s2, image_w, image_h, aspect, &mut stream)?;
            pair_distance(&a.region, &b.region, anchor)
        })
        .collect::<Result<Vec<_>>>()?;
    let (mean_distance, stddev) = mean_and_std(&distances);
    Ok(DistanceProfile {
        beta,
        sample_count: n,
        mean_distance,
        stddev,
    })
}
