//! VAT ordering: Prim's algorithm over the complete graph defined by a
//! dissimilarity matrix, seeded at the row holding the largest dissimilarity.
//!
//! Tie rules are fixed so both variants produce the same permutation: the
//! seed is the first maximum in row-major order; each step takes the smallest
//! candidate edge, preferring the smallest unselected index `j`, then the
//! smallest selected index `i`.

use crate::error::{Error, Result};
use crate::matrix::{permutation_apply, DissimilarityMatrix, Permutation, VatResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    Naive,
    #[default]
    Optimized,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Naive => "naive",
            Variant::Optimized => "optimized",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Variant::Naive),
            "optimized" => Ok(Variant::Optimized),
            other => Err(Error::Parameter(format!("unknown variant `{other}`"))),
        }
    }
}

/// Row index of the first maximal entry, scanning row-major.
fn seed_row(r: &DissimilarityMatrix) -> usize {
    let n = r.n();
    let mut best = r.get(0, 0);
    let mut row = 0;
    for i in 0..n {
        for j in 0..n {
            if r.get(i, j) > best {
                best = r.get(i, j);
                row = i;
            }
        }
    }
    row
}

/// Reference ordering: at every step scan all selected x unselected pairs.
/// O(n^3) in the worst case.
#[allow(clippy::needless_range_loop)]
pub fn vat_order_naive(r: &DissimilarityMatrix) -> Result<Permutation> {
    let n = r.n();
    if n == 0 {
        return Err(Error::EmptyInput("cannot order an empty matrix".into()));
    }
    let mut selected = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let seed = seed_row(r);
    selected[seed] = true;
    order.push(seed);

    while order.len() < n {
        let mut best: Option<(f64, usize)> = None;
        for j in 0..n {
            if selected[j] {
                continue;
            }
            for i in 0..n {
                if !selected[i] {
                    continue;
                }
                let v = r.get(i, j);
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, j));
                }
            }
        }
        let (_, j) = best.expect("an unselected point remains");
        selected[j] = true;
        order.push(j);
    }
    Ok(Permutation::from_raw(order))
}

/// Prim with a best-distance array: O(n^2).
///
/// `min_dist[j]` holds the smallest dissimilarity from `j` to the selected
/// set; only strictly smaller values replace it, and the argmin scan visits
/// `j` in ascending order, so ties resolve exactly as in the naive scan.
pub fn vat_order_optimized(r: &DissimilarityMatrix) -> Result<Permutation> {
    let n = r.n();
    if n == 0 {
        return Err(Error::EmptyInput("cannot order an empty matrix".into()));
    }
    let values = r.values();
    let seed = seed_row(r);

    let mut selected = vec![false; n];
    let mut min_dist = values[seed * n..(seed + 1) * n].to_vec();
    let mut order = Vec::with_capacity(n);
    selected[seed] = true;
    order.push(seed);

    for _ in 1..n {
        let mut next = usize::MAX;
        let mut next_dist = f64::INFINITY;
        for (j, (&dist, &taken)) in min_dist.iter().zip(&selected).enumerate() {
            if !taken && (next == usize::MAX || dist < next_dist) {
                next = j;
                next_dist = dist;
            }
        }
        selected[next] = true;
        order.push(next);

        let row = &values[next * n..(next + 1) * n];
        for ((slot, &candidate), &taken) in min_dist.iter_mut().zip(row).zip(&selected) {
            if !taken && candidate < *slot {
                *slot = candidate;
            }
        }
    }
    Ok(Permutation::from_raw(order))
}

pub fn vat_order(r: &DissimilarityMatrix, variant: Variant) -> Result<Permutation> {
    match variant {
        Variant::Naive => vat_order_naive(r),
        Variant::Optimized => vat_order_optimized(r),
    }
}

/// Orders `r` with the chosen variant and rearranges it accordingly.
pub fn vat(r: &DissimilarityMatrix, variant: Variant) -> Result<VatResult> {
    let permutation = vat_order(r, variant)?;
    let reordered = permutation_apply(r, &permutation)?;
    Ok(VatResult { permutation, reordered })
}
