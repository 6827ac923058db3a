//! JSONL pair manifests.
//!
//! One JSON object per line, keys in declaration order, reals in shortest
//! round-trip form. Identical entries therefore always serialise to
//! identical bytes. Readers ignore keys they do not know.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Mode;
use crate::error::{Error, Result};
use crate::sampling::{BlurSpec, ColorSpec, CropRegion};

pub const SCHEMA_VERSION: u32 = 1;

/// Which parameter the pair's joint distribution controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointKind {
    Crop,
    Blur,
    Color,
}

/// Everything needed to reproduce one view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewParams {
    /// Requested area fraction, before pixel rounding.
    pub scale: f64,
    /// Aspect ratio used for the crop.
    pub aspect: f64,
    pub crop: CropRegion,
    pub blur: Option<BlurSpec>,
    pub color: Option<ColorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairManifestEntry {
    pub schema_version: u32,
    pub image_id: String,
    pub index: u64,
    pub seed: u64,
    pub mode: Mode,
    pub beta: f64,
    pub joint: Option<JointKind>,
    /// Side of the square output views.
    pub out_size: u32,
    pub view_a: ViewParams,
    pub view_b: ViewParams,
}

impl PairManifestEntry {
    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        for (name, view) in [("view_a", &self.view_a), ("view_b", &self.view_b)] {
            view.crop.validate().map_err(|e| format!("{name}: {e}"))?;
            if let Some(blur) = &view.blur {
                blur.validate().map_err(|e| format!("{name}: {e}"))?;
            }
        }
        Ok(())
    }
}

pub fn write_manifest_to<W: Write>(entries: &[PairManifestEntry], mut out: W) -> Result<()> {
    for entry in entries {
        serde_json::to_writer(&mut out, entry)?;
        out.write_all(b"\n")
            .map_err(|e| Error::io("<manifest>", e))?;
    }
    out.flush().map_err(|e| Error::io("<manifest>", e))
}

pub fn write_manifest(entries: &[PairManifestEntry], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_manifest_to(entries, BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<PairManifestEntry>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line_no = k + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        entries.push(parse_line(&line, line_no)?);
    }
    Ok(entries)
}

fn parse_line(line: &str, line_no: usize) -> Result<PairManifestEntry> {
    let malformed = |reason: String| Error::Manifest {
        line: line_no,
        reason,
    };
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
    let version = value
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| malformed("missing integer `schema_version`".into()))?;
    if version != u64::from(SCHEMA_VERSION) {
        return Err(Error::Version {
            found: version.min(u64::from(u32::MAX)) as u32,
            expected: SCHEMA_VERSION,
        });
    }
    let entry: PairManifestEntry =
        serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
    entry.validate().map_err(malformed)?;
    Ok(entry)
}
