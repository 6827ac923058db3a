//! Persistence: JSONL manifests, PNG/PNM rasters and external feature files.

mod features;
mod manifest;
mod raster;

pub use features::{parse_features, read_features, FeatureTable};
pub use manifest::{
    read_manifest, write_manifest, write_manifest_to, JointKind, PairManifestEntry, ViewParams,
    SCHEMA_VERSION,
};
pub use raster::{decode_image, encode_png, encode_pnm, read_image, write_image, RasterFormat};
