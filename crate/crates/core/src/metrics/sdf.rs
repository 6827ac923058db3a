use rayon::prelude::*;
use serde::Serialize;

use super::embedding::{EmbeddingSource, View};
use super::summation::mean_and_std;
use crate::error::{Error, Result};

/// Cosine similarity, or `None` when either vector has zero norm.
///
/// Computed as `a·b / sqrt(|a|²|b|²)`, which is exactly 1 for `a == b`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(None);
    }
    Ok(Some((dot / (na * nb).sqrt()).clamp(-1.0, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdfReport {
    /// Mean cosine similarity over all pairs; zero-norm pairs count as 0.
    pub value: f64,
    pub pairs: usize,
    pub zero_norm_pairs: usize,
    pub std_error: f64,
}

/// Semantic-distortion score from already-embedded pairs.
pub fn sdf_from_vectors(pairs: &[(Vec<f64>, Vec<f64>)]) -> Result<SdfReport> {
    let sims = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (a, b))| {
            cosine_similarity(a, b).map_err(|e| Error::Embedding {
                pair: k,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&sims))
}

/// Semantic-distortion score: embeds both views of each of `n` pairs and
/// averages their cosine similarity.
///
/// `views(k)` yields pair `k`. Any failure is reported with its pair index.
pub fn sdf<E, F>(embedding: &E, n: usize, views: F) -> Result<SdfReport>
where
    E: EmbeddingSource + ?Sized,
    F: Fn(usize) -> Result<(View, View)> + Sync,
{
    if n == 0 {
        return Err(Error::Precondition("SDF needs at least one pair".into()));
    }
    if embedding.dim() < 2 {
        return Err(Error::Precondition(format!(
            "embedding dimension must be >= 2, got {}",
            embedding.dim()
        )));
    }
    let sims = (0..n)
        .into_par_iter()
        .map(|k| {
            let wrap = |e| Error::Embedding {
                pair: k,
                source: Box::new(e),
            };
            let (a, b) = views(k).map_err(wrap)?;
            let ea = embedding.embed(&a).map_err(wrap)?;
            let eb = embedding.embed(&b).map_err(wrap)?;
            if ea.len() != embedding.dim() {
                return Err(wrap(Error::Dimension {
                    expected: embedding.dim(),
                    found: ea.len(),
                }));
            }
            cosine_similarity(&ea, &eb).map_err(wrap)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&sims))
}

fn summarize(sims: &[Option<f64>]) -> SdfReport {
    let values: Vec<f64> = sims.iter().map(|s| s.unwrap_or(0.0)).collect();
    let (mean, sd) = mean_and_std(&values);
    SdfReport {
        value: mean,
        pairs: values.len(),
        zero_norm_pairs: sims.iter().filter(|s| s.is_none()).count(),
        std_error: sd / (values.len() as f64).sqrt(),
    }
}
