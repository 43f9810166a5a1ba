//! Pairwise Euclidean dissimilarities.
//!
//! Both variants accumulate squared differences over features `0..d` in
//! order and take one square root per pair, so they agree bit for bit. The
//! optimized variant differs only in how work is laid out: row slices instead
//! of per-element index arithmetic, row blocks spread across threads, and a
//! tiled mirror of the upper triangle.

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, DissimilarityMatrix};

const MIRROR_TILE: usize = 64;

/// Textbook double loop over the upper triangle, mirrored into the lower one.
pub fn pairwise_naive(x: &DataMatrix) -> Result<DissimilarityMatrix> {
    check_finite(x)?;
    let (n, d) = (x.n(), x.d());
    let mut r = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let mut sum = 0.0;
            for k in 0..d {
                let diff = x.get(i, k) - x.get(j, k);
                sum += diff * diff;
            }
            let dist = sum.sqrt();
            r[i * n + j] = dist;
            r[j * n + i] = dist;
        }
    }
    Ok(DissimilarityMatrix::from_raw(n, r))
}

/// Upper triangle computed in parallel over contiguous row blocks.
///
/// Output is independent of `threads`; each worker owns a disjoint range of
/// rows in the flat buffer.
pub fn pairwise_optimized(x: &DataMatrix, threads: usize) -> Result<DissimilarityMatrix> {
    if threads == 0 {
        return Err(Error::Parameter("threads must be at least 1".into()));
    }
    check_finite(x)?;
    let n = x.n();
    let mut r = vec![0.0; n * n];

    let bounds = triangle_row_blocks(n, threads);
    if bounds.len() <= 2 {
        fill_upper_rows(x, 0, &mut r);
    } else {
        std::thread::scope(|scope| {
            let mut rest: &mut [f64] = &mut r;
            for w in bounds.windows(2) {
                let (start, end) = (w[0], w[1]);
                let (chunk, tail) = rest.split_at_mut((end - start) * n);
                rest = tail;
                scope.spawn(move || fill_upper_rows(x, start, chunk));
            }
        });
    }
    mirror_upper(&mut r, n);
    Ok(DissimilarityMatrix::from_raw(n, r))
}

/// Fills `(i, j > i)` for the rows covered by `block`, whose first row is `first_row`.
fn fill_upper_rows(x: &DataMatrix, first_row: usize, block: &mut [f64]) {
    let n = x.n();
    for (offset, out_row) in block.chunks_exact_mut(n).enumerate() {
        let i = first_row + offset;
        let a = x.row(i);
        for (j, slot) in out_row.iter_mut().enumerate().skip(i + 1) {
            *slot = euclidean(a, x.row(j));
        }
    }
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (p, q) in a.iter().zip(b) {
        let diff = p - q;
        sum += diff * diff;
    }
    sum.sqrt()
}

/// Copies the upper triangle onto the lower one in square tiles.
fn mirror_upper(r: &mut [f64], n: usize) {
    for bi in (0..n).step_by(MIRROR_TILE) {
        for bj in (bi..n).step_by(MIRROR_TILE) {
            for i in bi..(bi + MIRROR_TILE).min(n) {
                for j in bj.max(i + 1)..(bj + MIRROR_TILE).min(n) {
                    r[j * n + i] = r[i * n + j];
                }
            }
        }
    }
}

/// Row boundaries `[0, .., n]` splitting the upper triangle into at most
/// `threads` blocks of roughly equal pair counts.
fn triangle_row_blocks(n: usize, threads: usize) -> Vec<usize> {
    let workers = threads.min(n.max(1));
    let total = n * n.saturating_sub(1) / 2;
    let mut bounds = vec![0];
    let mut acc = 0;
    let mut next_target = 1;
    for i in 0..n {
        acc += n - 1 - i;
        if next_target < workers && acc * workers >= total * next_target && i + 1 < n {
            bounds.push(i + 1);
            next_target += 1;
        }
    }
    bounds.push(n);
    bounds.dedup();
    bounds
}

fn check_finite(x: &DataMatrix) -> Result<()> {
    match x.values().iter().position(|v| !v.is_finite()) {
        Some(pos) => Err(Error::Input(format!("non-finite feature value at flat index {pos}"))),
        None => Ok(()),
    }
}
