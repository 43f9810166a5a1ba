//! Domain types shared by every stage of the pipeline.
//!
//! Both matrices live in flat row-major `Vec<f64>` buffers; entry `(i, j)` of
//! an `n`-column matrix is at `i * n + j`.

use crate::error::{Error, Result};

/// `n` samples by `d` features, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    d: usize,
    values: Vec<f64>,
    column_names: Option<Vec<String>>,
}

impl DataMatrix {
    pub fn new(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyInput(format!("data matrix must be non-empty, got {n}x{d}")));
        }
        if values.len() != n * d {
            return Err(Error::Dimension(format!(
                "expected {} values for {n}x{d}, got {}",
                n * d,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "non-finite value {} at row {}, column {}",
                values[pos],
                pos / d,
                pos % d
            )));
        }
        Ok(DataMatrix {
            n,
            d,
            values,
            column_names: None,
        })
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::Dimension(format!(
                    "row {i} has {} features, expected {d}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        DataMatrix::new(rows.len(), d, values)
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d {
            return Err(Error::Dimension(format!(
                "{} column names for {} features",
                names.len(),
                self.d
            )));
        }
        self.column_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.d + k]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.d)
    }

    /// Applies `f` to every value, keeping shape and column names.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut out = DataMatrix::new(self.n, self.d, self.values.iter().map(|&v| f(v)).collect())?;
        out.column_names = self.column_names.clone();
        Ok(out)
    }
}

/// Symmetric, nonnegative `n x n` matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DissimilarityMatrix {
    /// Validates every invariant; symmetry is checked exactly.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("dissimilarity matrix has no rows".into()));
        }
        if values.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for n={n}, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::Input(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                let v = values[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Input(format!(
                        "entry ({i}, {j}) = {v} is not a finite nonnegative value"
                    )));
                }
                if v != values[j * n + i] {
                    return Err(Error::Input(format!("asymmetric entries at ({i}, {j})")));
                }
            }
        }
        Ok(DissimilarityMatrix { n, values })
    }

    pub(crate) fn from_raw(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n * n);
        DissimilarityMatrix { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Multiplies every entry by `factor`, which must be positive and finite.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Parameter(format!("scale factor must be positive, got {factor}")));
        }
        Ok(DissimilarityMatrix::from_raw(
            self.n,
            self.values.iter().map(|v| v * factor).collect(),
        ))
    }
}

/// A bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Input(format!("not a permutation of 0..{n}: index {i}")));
            }
        }
        Ok(Permutation { order })
    }

    pub(crate) fn from_raw(order: Vec<usize>) -> Self {
        Permutation { order }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.order.len()];
        for (pos, &i) in self.order.iter().enumerate() {
            inv[i] = pos;
        }
        Permutation { order: inv }
    }
}

/// Output of VAT: the ordering and the matrix rearranged by it.
#[derive(Debug, Clone, PartialEq)]
pub struct VatResult {
    pub permutation: Permutation,
    pub reordered: DissimilarityMatrix,
}

/// `out[i][j] = r[p[i]][p[j]]`.
pub fn permutation_apply(r: &DissimilarityMatrix, p: &Permutation) -> Result<DissimilarityMatrix> {
    let n = r.n();
    if p.len() != n {
        return Err(Error::Dimension(format!(
            "permutation of length {} applied to {n}x{n} matrix",
            p.len()
        )));
    }
    let src = r.values();
    let mut out = Vec::with_capacity(n * n);
    for &pi in p.as_slice() {
        let row = &src[pi * n..(pi + 1) * n];
        out.extend(p.as_slice().iter().map(|&pj| row[pj]));
    }
    Ok(DissimilarityMatrix::from_raw(n, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn matrix3() -> DissimilarityMatrix {
        DissimilarityMatrix::new(3, vec![0.0, 1.0, 9.0, 1.0, 0.0, 4.0, 9.0, 4.0, 0.0]).unwrap()
    }

    fn random_matrix(rng: &mut Rng, n: usize) -> DissimilarityMatrix {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let x = rng.uniform(0.0, 10.0);
                v[i * n + j] = x;
                v[j * n + i] = x;
            }
        }
        DissimilarityMatrix::new(n, v).unwrap()
    }

    #[test]
    fn data_matrix_rejects_bad_shapes() {
        assert!(matches!(DataMatrix::new(0, 2, vec![]), Err(Error::EmptyInput(_))));
        assert!(matches!(DataMatrix::new(2, 2, vec![1.0; 3]), Err(Error::Dimension(_))));
        assert!(matches!(
            DataMatrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn dissimilarity_rejects_invalid() {
        assert!(DissimilarityMatrix::new(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DissimilarityMatrix::new(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(DissimilarityMatrix::new(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(DissimilarityMatrix::new(2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(Permutation::new(vec![0, 0, 2]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert_eq!(
            Permutation::new(vec![2, 0, 1]).unwrap().inverse().as_slice(),
            &[1, 2, 0]
        );
    }

    #[test]
    fn identity_apply_is_noop() {
        let r = matrix3();
        assert_eq!(permutation_apply(&r, &Permutation::identity(3)).unwrap(), r);
    }

    #[test]
    fn swap_two_by_two() {
        let r = DissimilarityMatrix::new(2, vec![0.0, 5.0, 5.0, 0.0]).unwrap();
        let out = permutation_apply(&r, &Permutation::new(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(out.values(), &[0.0, 5.0, 5.0, 0.0]);
    }

    #[test]
    fn three_point_relabel_matches_brute_force() {
        let r = matrix3();
        let p = Permutation::new(vec![0, 2, 1]).unwrap();
        let out = permutation_apply(&r, &p).unwrap();
        assert_eq!(out.get(0, 1), 9.0);
        assert_eq!(out.get(0, 2), 1.0);
        assert_eq!(out.get(1, 2), 4.0);
        // brute force: relabel point k as position inv[k]
        let inv = p.inverse();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(out.get(inv.as_slice()[a], inv.as_slice()[b]), r.get(a, b));
            }
        }
    }

    #[test]
    fn length_mismatch() {
        let r = matrix3();
        assert!(matches!(
            permutation_apply(&r, &Permutation::identity(2)),
            Err(Error::Dimension(_))
        ));
    }

    proptest! {
        #[test]
        fn apply_then_inverse_roundtrips(seed in any::<u64>(), n in 1usize..20) {
            let mut rng = Rng::new(seed);
            let r = random_matrix(&mut rng, n);
            let p = Permutation::new(rng.sample_indices(n, n)).unwrap();
            let there = permutation_apply(&r, &p).unwrap();
            // re-validating checks symmetry and zero diagonal exactly
            prop_assert!(DissimilarityMatrix::new(n, there.values().to_vec()).is_ok());
            let back = permutation_apply(&there, &p.inverse()).unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
