//! External embedding files.
//!
//! ```text
//! dim=<D>
//! <view_id> <f_1> ... <f_D>
//! ```
//!
//! Blank lines and lines starting with `#` are skipped.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    dim: usize,
    records: HashMap<String, Vec<f64>>,
}

impl FeatureTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, view_id: &str) -> Option<&[f64]> {
        self.records.get(view_id).map(Vec::as_slice)
    }

    /// Ids from `wanted` that have no record, in the order given.
    pub fn missing<'a>(&self, wanted: impl IntoIterator<Item = &'a str>) -> Vec<String> {
        wanted
            .into_iter()
            .filter(|id| !self.records.contains_key(*id))
            .map(str::to_owned)
            .collect()
    }
}

pub fn read_features(path: impl AsRef<Path>) -> Result<FeatureTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_features(&text)
}

pub fn parse_features(text: &str) -> Result<FeatureTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Features {
        line: 1,
        reason: "empty file; expected `dim=<D>` header".into(),
    })?;
    let dim: usize = header
        .strip_prefix("dim=")
        .and_then(|d| d.trim().parse().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Features {
            line: header_line,
            reason: format!("bad header `{header}`; expected `dim=<D>`"),
        })?;

    let mut records = HashMap::new();
    for (line, text) in lines {
        let mut tokens = text.split_whitespace();
        let id = tokens.next().expect("non-empty line has a token");
        let values = tokens
            .map(|t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::Features {
                line,
                reason: "values must be finite decimal numbers".into(),
            })?;
        if values.len() != dim {
            return Err(Error::FeatureDimension {
                line,
                expected: dim,
                found: values.len(),
            });
        }
        if records.insert(id.to_owned(), values).is_some() {
            return Err(Error::Features {
                line,
                reason: format!("duplicate view id `{id}`"),
            });
        }
    }
    Ok(FeatureTable { dim, records })
}
