use crate::error::{Error, Result};
use crate::imageops::ImageBuffer;
use crate::io::FeatureTable;

/// A view handed to an embedding: its id and, when available, its pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct View {
    pub id: String,
    pub image: Option<ImageBuffer>,
}

impl View {
    pub fn with_image(id: impl Into<String>, image: ImageBuffer) -> Self {
        Self {
            id: id.into(),
            image: Some(image),
        }
    }

    pub fn id_only(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            image: None,
        }
    }
}

/// Maps a view to a fixed-length real vector.
pub trait EmbeddingSource: Sync {
    fn dim(&self) -> usize;
    fn embed(&self, view: &View) -> Result<Vec<f64>>;
}

/// Side of the toy embedding's thumbnail.
pub const TOY_SIDE: u32 = 8;

/// Box-filtered 8×8 luma thumbnail, flattened, with its mean removed.
///
/// A stand-in encoder: it tracks coarse layout, so heavily-rescaled or
/// disjoint crops of the same image score lower than near-duplicates.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToyEmbedding;

impl EmbeddingSource for ToyEmbedding {
    fn dim(&self) -> usize {
        (TOY_SIDE * TOY_SIDE) as usize
    }

    fn embed(&self, view: &View) -> Result<Vec<f64>> {
        let img = view.image.as_ref().ok_or_else(|| {
            Error::UnsupportedInput(format!("toy embedding needs pixels for view `{}`", view.id))
        })?;
        let mut cells = thumbnail(img);
        let mean = cells.iter().sum::<f64>() / cells.len() as f64;
        cells.iter_mut().for_each(|v| *v -= mean);
        Ok(cells)
    }
}

fn cell_bounds(k: u32, len: u32) -> (u32, u32) {
    let lo = (u64::from(k) * u64::from(len) / u64::from(TOY_SIDE)) as u32;
    let hi = (u64::from(k + 1) * u64::from(len) / u64::from(TOY_SIDE)) as u32;
    (lo.min(len - 1), hi.max(lo + 1).min(len))
}

fn luma(img: &ImageBuffer, x: u32, y: u32) -> f64 {
    if img.channels() == 1 {
        f64::from(img.get(x, y, 0))
    } else {
        0.299 * f64::from(img.get(x, y, 0))
            + 0.587 * f64::from(img.get(x, y, 1))
            + 0.114 * f64::from(img.get(x, y, 2))
    }
}

fn thumbnail(img: &ImageBuffer) -> Vec<f64> {
    let mut out = Vec::with_capacity((TOY_SIDE * TOY_SIDE) as usize);
    for cy in 0..TOY_SIDE {
        let (y0, y1) = cell_bounds(cy, img.height());
        for cx in 0..TOY_SIDE {
            let (x0, x1) = cell_bounds(cx, img.width());
            let mut acc = 0.0;
            for y in y0..y1 {
                for x in x0..x1 {
                    acc += luma(img, x, y);
                }
            }
            out.push(acc / f64::from((y1 - y0) * (x1 - x0)));
        }
    }
    out
}

/// Precomputed vectors keyed by view id.
#[derive(Debug, Clone)]
pub struct ExternalFeatures {
    table: FeatureTable,
}

impl ExternalFeatures {
    pub fn new(table: FeatureTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &FeatureTable {
        &self.table
    }
}

impl EmbeddingSource for ExternalFeatures {
    fn dim(&self) -> usize {
        self.table.dim()
    }

    fn embed(&self, view: &View) -> Result<Vec<f64>> {
        self.table
            .get(&view.id)
            .map(<[f64]>::to_vec)
            .ok_or_else(|| Error::MissingFeatures(vec![view.id.clone()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_features;

    #[test]
    fn toy_embedding_is_centred() {
        let data: Vec<u8> = (0..32 * 24).map(|k| (k % 32 * 8) as u8).collect();
        let img = ImageBuffer::new(32, 24, 1, data).unwrap();
        let v = ToyEmbedding.embed(&View::with_image("x", img)).unwrap();
        assert_eq!(v.len(), 64);
        assert!(v.iter().sum::<f64>().abs() < 1e-9);
        // horizontal ramp: first column below the mean, last above
        assert!(v[0] < 0.0 && v[7] > 0.0);
    }

    #[test]
    fn toy_embedding_handles_tiny_images() {
        let img = ImageBuffer::new(3, 2, 3, (0..18).map(|k| k * 13).collect()).unwrap();
        let v = ToyEmbedding.embed(&View::with_image("x", img)).unwrap();
        assert_eq!(v.len(), 64);
        assert!(v.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn toy_embedding_requires_pixels() {
        assert!(ToyEmbedding.embed(&View::id_only("x")).is_err());
    }

    #[test]
    fn external_lookup() {
        let f = ExternalFeatures::new(parse_features("dim=2\na 1 0\n").unwrap());
        assert_eq!(f.dim(), 2);
        assert_eq!(f.embed(&View::id_only("a")).unwrap(), vec![1.0, 0.0]);
        assert!(
            matches!(f.embed(&View::id_only("b")), Err(Error::MissingFeatures(ids)) if ids == ["b"])
        );
    }
}
