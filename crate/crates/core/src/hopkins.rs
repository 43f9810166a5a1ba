//! Hopkins statistic.
//!
//! Each trial draws `m` probes uniformly inside the bounding box of the data
//! and `m` distinct data points. With `u` the probe-to-nearest-point
//! distances and `w` the sampled-point-to-nearest-other-point distances, the
//! trial score is `sum(u) / (sum(u) + sum(w))`. Values near 0.5 indicate
//! spatial randomness; values near 1 indicate clustered data. Features are
//! used as given (no standardization).

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::rng::Rng;

pub const DEFAULT_SAMPLE_FRAC: f64 = 0.1;
pub const DEFAULT_TRIALS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct HopkinsReport {
    pub score: f64,
    pub m: usize,
    pub seed: u64,
    pub n: usize,
    pub trials: usize,
    pub scores: Vec<f64>,
}

/// Everything drawn and measured in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct HopkinsTrial {
    /// `m x d` probe coordinates, row-major.
    pub probes: Vec<f64>,
    pub sampled: Vec<usize>,
    pub u_sum: f64,
    pub w_sum: f64,
    pub score: f64,
}

pub fn probe_count(n: usize, sample_frac: f64) -> usize {
    ((sample_frac * n as f64).floor() as usize).max(1)
}

fn validate(x: &DataMatrix, sample_frac: f64, trials: usize) -> Result<()> {
    if x.n() < 4 {
        return Err(Error::InsufficientData(format!(
            "Hopkins statistic needs at least 4 samples, got {}",
            x.n()
        )));
    }
    if !(sample_frac > 0.0 && sample_frac <= 0.5) {
        return Err(Error::Parameter(format!(
            "sample fraction must lie in (0, 0.5], got {sample_frac}"
        )));
    }
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    Ok(())
}

pub fn hopkins(x: &DataMatrix, sample_frac: f64, trials: usize, seed: u64) -> Result<HopkinsReport> {
    validate(x, sample_frac, trials)?;
    let m = probe_count(x.n(), sample_frac);
    let scores: Vec<f64> = (0..trials)
        .map(|t| run_trial(x, m, &mut Rng::derive(seed, t as u64)).score)
        .collect();
    let score = scores.iter().sum::<f64>() / trials as f64;
    Ok(HopkinsReport {
        score,
        m,
        seed,
        n: x.n(),
        trials,
        scores,
    })
}

/// Runs trial `index` of [`hopkins`] with the same seed derivation, exposing
/// the drawn probes and samples.
pub fn hopkins_trial(x: &DataMatrix, sample_frac: f64, seed: u64, index: usize) -> Result<HopkinsTrial> {
    validate(x, sample_frac, 1)?;
    let m = probe_count(x.n(), sample_frac);
    Ok(run_trial(x, m, &mut Rng::derive(seed, index as u64)))
}

fn run_trial(x: &DataMatrix, m: usize, rng: &mut Rng) -> HopkinsTrial {
    let d = x.d();
    let (lo, hi) = bounding_box(x);

    let mut probes = Vec::with_capacity(m * d);
    for _ in 0..m {
        for k in 0..d {
            probes.push(rng.uniform(lo[k], hi[k]));
        }
    }
    let sampled = rng.sample_indices(x.n(), m);

    let u_sum: f64 = probes.chunks_exact(d).map(|p| nearest(x, p, None)).sum();
    let w_sum: f64 = sampled.iter().map(|&i| nearest(x, x.row(i), Some(i))).sum();
    let total = u_sum + w_sum;
    let score = if total == 0.0 { 0.5 } else { u_sum / total };
    HopkinsTrial {
        probes,
        sampled,
        u_sum,
        w_sum,
        score,
    }
}

fn bounding_box(x: &DataMatrix) -> (Vec<f64>, Vec<f64>) {
    let mut lo = x.row(0).to_vec();
    let mut hi = lo.clone();
    for row in x.rows() {
        for (k, &v) in row.iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    (lo, hi)
}

fn nearest(x: &DataMatrix, point: &[f64], exclude: Option<usize>) -> f64 {
    let mut best = f64::INFINITY;
    for (i, row) in x.rows().enumerate() {
        if Some(i) == exclude {
            continue;
        }
        let mut sum = 0.0;
        for (a, b) in point.iter().zip(row) {
            let diff = a - b;
            sum += diff * diff;
        }
        best = best.min(sum);
    }
    best.sqrt()
}
