//! Paired-view augmentation with a controlled ratio between the two views.
//!
//! The crate samples crop areas, blur strengths and colour factors for a
//! pair of views so that the log-ratio between them follows a chosen
//! law, renders the views, records every pair in a replayable manifest and
//! measures the result.

pub mod config;
pub mod distributions;
pub mod error;
pub mod imageops;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod sampling;

pub use config::{AugmentConfig, ColorTarget, ConfigOverrides, Mode};
pub use distributions::{JcDistribution, RatioBounds, ReferenceDistribution};
pub use error::{Error, Result};
pub use imageops::ImageBuffer;
pub use io::{JointKind, PairManifestEntry, ViewParams};
pub use pipeline::PairSampler;
pub use rng::PairStream;
pub use sampling::{BlurSpec, ColorSpec, CropRegion, PairedScale};
