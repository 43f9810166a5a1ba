//! Grayscale rendering of a (reordered) dissimilarity matrix.
//!
//! Low dissimilarity maps to black, so clusters show up as dark squares along
//! the diagonal.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{DissimilarityMatrix, VatResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

/// Linear min-max mapping onto `0..=255`, rounding half away from zero.
/// A constant matrix renders all black.
pub fn to_grayscale(r: &DissimilarityMatrix) -> GrayImage {
    grayscale_from_values(r.n(), r.n(), r.values())
}

/// [`to_grayscale`] for an arbitrary row-major `width x height` buffer.
pub fn grayscale_from_values(width: usize, height: usize, values: &[f64]) -> GrayImage {
    assert_eq!(values.len(), width * height, "buffer does not match image size");
    let (min, max) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let range = max - min;
    let pixels = if range > 0.0 {
        values
            .iter()
            .map(|&v| (255.0 * ((v - min) / range)).round() as u8)
            .collect()
    } else {
        vec![0; values.len()]
    };
    GrayImage { width, height, pixels }
}

/// Binary PGM (P5) encoding.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&encode_pgm(img)).map_err(|e| Error::io(path, e))
}

/// Mean within-block over mean between-block dissimilarity, for blocks laid
/// out consecutively along the reordered diagonal. Diagonal entries are left
/// out of the within-block mean. Lower means sharper block structure; the
/// result is 1.0 when there are no between-block pairs or their mean is zero.
///
/// This is an artifact metric, useful for testing "clear diagonal blocks"
/// claims numerically.
pub fn block_contrast(res: &VatResult, block_sizes: &[usize]) -> Result<f64> {
    let r = &res.reordered;
    let n = r.n();
    let total: usize = block_sizes.iter().sum();
    if total != n {
        return Err(Error::Dimension(format!(
            "block sizes sum to {total}, matrix has {n} rows"
        )));
    }
    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in block_sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, size));
    }

    let (mut within, mut within_count) = (0.0, 0usize);
    let (mut between, mut between_count) = (0.0, 0usize);
    for i in 0..n {
        for j in i + 1..n {
            let v = r.get(i, j);
            if block_of[i] == block_of[j] {
                within += v;
                within_count += 1;
            } else {
                between += v;
                between_count += 1;
            }
        }
    }
    if between_count == 0 || between == 0.0 {
        return Ok(1.0);
    }
    let within_mean = if within_count == 0 {
        0.0
    } else {
        within / within_count as f64
    };
    Ok(within_mean / (between / between_count as f64))
}
