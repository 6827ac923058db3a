//! Diagnostics: goodness-of-fit of sampled ratios, crop distances and the
//! semantic-distortion score.

mod distance;
mod embedding;
mod gof;
mod sdf;
pub mod summation;

pub use distance::{
    distance_profile, pair_distance, DistanceAnchor, DistanceProfile, MIN_PROFILE_SAMPLES,
};
pub use embedding::{EmbeddingSource, ExternalFeatures, ToyEmbedding, View, TOY_SIDE};
pub use gof::{
    empirical_two_sided_tail, gof_report, ks_critical_value, DensityPoint, GofReport, MIN_GOF_BINS,
    MIN_GOF_SAMPLES,
};
pub use sdf::{cosine_similarity, sdf, sdf_from_vectors, SdfReport};
