use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use jointaug_core::io::RasterFormat;
use jointaug_core::{Error, Result};

/// Supported rasters in `dir`, keyed by file stem, in name order.
pub fn list_images(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let read = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })?;
    let mut found = BTreeMap::new();
    for entry in read {
        let path = entry
            .map_err(|source| Error::Io {
                path: dir.to_owned(),
                source,
            })?
            .path();
        if !path.is_file() || RasterFormat::from_path(&path).is_err() {
            continue;
        }
        let Some(id) = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else {
            log::warn!("skipping {}: file name is not valid UTF-8", path.display());
            continue;
        };
        if let Some(previous) = found.insert(id.clone(), path.clone()) {
            return Err(Error::UnsupportedInput(format!(
                "image id `{id}` is ambiguous: {} and {}",
                previous.display(),
                path.display()
            )));
        }
    }
    if found.is_empty() {
        return Err(Error::UnsupportedInput(format!(
            "no .png, .ppm or .pgm images in {}",
            dir.display()
        )));
    }
    Ok(found.into_iter().collect())
}
