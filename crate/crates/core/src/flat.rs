//! Entry points over plain row-major `f64` buffers.
//!
//! These are the calls a foreign-language wrapper marshals to: data crosses
//! as a contiguous buffer plus explicit `n` and `d`, and results come back as
//! plain vectors. No logic lives here beyond validation and conversion.

use crate::datagen::{generate, GenSpec};
use crate::distance::pairwise_optimized;
use crate::error::Result;
use crate::hopkins::hopkins;
use crate::matrix::DataMatrix;
use crate::vat::{vat as vat_matrix, Variant};

/// Output of [`vat`]: the ordering and the reordered `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatVat {
    pub permutation: Vec<usize>,
    pub reordered: Vec<f64>,
    pub n: usize,
}

/// Full pipeline with the chosen variant for both the distance and the
/// ordering stage.
pub fn vat(values: &[f64], n: usize, d: usize, variant: Variant, threads: usize) -> Result<FlatVat> {
    let x = DataMatrix::new(n, d, values.to_vec())?;
    let r = match variant {
        Variant::Naive => crate::distance::pairwise_naive(&x)?,
        Variant::Optimized => pairwise_optimized(&x, threads)?,
    };
    let res = vat_matrix(&r, variant)?;
    Ok(FlatVat {
        permutation: res.permutation.as_slice().to_vec(),
        reordered: res.reordered.into_values(),
        n,
    })
}

/// Pairwise Euclidean distances as an `n x n` row-major buffer.
pub fn pairwise(values: &[f64], n: usize, d: usize, threads: usize) -> Result<Vec<f64>> {
    let x = DataMatrix::new(n, d, values.to_vec())?;
    Ok(pairwise_optimized(&x, threads)?.into_values())
}

/// Mean Hopkins score.
pub fn hopkins_score(values: &[f64], n: usize, d: usize, sample_frac: f64, trials: usize, seed: u64) -> Result<f64> {
    let x = DataMatrix::new(n, d, values.to_vec())?;
    Ok(hopkins(&x, sample_frac, trials, seed)?.score)
}

/// Generated data as `(values, n, d, labels)`.
pub fn generate_flat(spec: &GenSpec) -> Result<(Vec<f64>, usize, usize, Vec<usize>)> {
    let (x, labels) = generate(spec)?;
    let (n, d) = (x.n(), x.d());
    Ok((x.values().to_vec(), n, d, labels))
}
