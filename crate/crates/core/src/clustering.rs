//! Reference K-Means and DBSCAN, and the Adjusted Rand Index for comparing
//! their partitions against ground truth or against each other.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::distance::pairwise_optimized;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::rng::Rng;

pub const DEFAULT_MAX_ITER: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    /// `k x d`, row-major.
    pub centers: Vec<f64>,
    pub inertia: f64,
    pub iterations: usize,
    /// Inertia after the initial assignment and after every Lloyd iteration.
    pub inertia_trace: Vec<f64>,
}

/// Lloyd's algorithm with k-means++ seeding.
///
/// Stops when an iteration leaves every assignment unchanged or after
/// `max_iter` iterations. A cluster that empties is handed the point lying
/// farthest from its own center.
pub fn kmeans(x: &DataMatrix, k: usize, seed: u64, max_iter: usize) -> Result<KMeansResult> {
    if k == 0 || k > x.n() {
        return Err(Error::Parameter(format!(
            "k must satisfy 1 <= k <= n, got k={k} n={}",
            x.n()
        )));
    }
    let d = x.d();
    let mut rng = Rng::new(seed);
    let mut centers = kmeans_plus_plus(x, k, &mut rng);
    let (mut labels, inertia) = assign(x, &centers, k);
    let mut trace = vec![inertia];
    let mut iterations = 0;

    while iterations < max_iter {
        let mut update_labels = labels.clone();
        centers = update_centers(x, &mut update_labels, &centers, k);
        let (next, inertia) = assign(x, &centers, k);
        iterations += 1;
        trace.push(inertia);
        let converged = next == labels;
        labels = next;
        if converged {
            break;
        }
    }

    debug_assert_eq!(centers.len(), k * d);
    Ok(KMeansResult {
        labels,
        centers,
        inertia: *trace.last().expect("nonempty trace"),
        iterations,
        inertia_trace: trace,
    })
}

#[inline]
fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

fn kmeans_plus_plus(x: &DataMatrix, k: usize, rng: &mut Rng) -> Vec<f64> {
    let n = x.n();
    let mut centers = Vec::with_capacity(k * x.d());
    let first = rng.below(n);
    centers.extend_from_slice(x.row(first));
    let mut closest: Vec<f64> = x.rows().map(|r| squared_distance(r, x.row(first))).collect();

    for _ in 1..k {
        let total: f64 = closest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in closest.iter().enumerate() {
                acc += w;
                if acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.below(n)
        };
        let c = x.row(pick);
        centers.extend_from_slice(c);
        for (slot, row) in closest.iter_mut().zip(x.rows()) {
            *slot = slot.min(squared_distance(row, c));
        }
    }
    centers
}

/// Nearest-center labels (ties to the lowest center index) and their inertia.
fn assign(x: &DataMatrix, centers: &[f64], k: usize) -> (Vec<usize>, f64) {
    let d = x.d();
    let mut inertia = 0.0;
    let labels = x
        .rows()
        .map(|row| {
            let mut best = 0;
            let mut best_dist = f64::INFINITY;
            for c in 0..k {
                let dist = squared_distance(row, &centers[c * d..(c + 1) * d]);
                if dist < best_dist {
                    best = c;
                    best_dist = dist;
                }
            }
            inertia += best_dist;
            best
        })
        .collect();
    (labels, inertia)
}

/// Cluster means for `labels`; repairs empty clusters in place first.
fn update_centers(x: &DataMatrix, labels: &mut [usize], previous: &[f64], k: usize) -> Vec<f64> {
    let d = x.d();
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    while let Some(empty) = counts.iter().position(|&c| c == 0) {
        let mut far = None;
        let mut far_dist = -1.0;
        for (i, row) in x.rows().enumerate() {
            let l = labels[i];
            if counts[l] < 2 {
                continue;
            }
            let dist = squared_distance(row, &previous[l * d..(l + 1) * d]);
            if dist > far_dist {
                far = Some(i);
                far_dist = dist;
            }
        }
        let i = far.expect("k <= n leaves a cluster with two or more points");
        counts[labels[i]] -= 1;
        labels[i] = empty;
        counts[empty] = 1;
    }

    let mut sums = vec![0.0; k * d];
    for (row, &l) in x.rows().zip(labels.iter()) {
        for (s, v) in sums[l * d..(l + 1) * d].iter_mut().zip(row) {
            *s += v;
        }
    }
    for c in 0..k {
        for s in &mut sums[c * d..(c + 1) * d] {
            *s /= counts[c] as f64;
        }
    }
    sums
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbscanResult {
    /// Cluster id per point; `-1` marks noise.
    pub labels: Vec<i64>,
    pub cluster_count: usize,
}

pub const NOISE: i64 = -1;

/// Density-based clustering over the full Euclidean distance matrix.
///
/// Points are visited in index order; a border point belongs to the first
/// cluster whose expansion reaches it.
pub fn dbscan(x: &DataMatrix, eps: f64, min_pts: usize) -> Result<DbscanResult> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    if min_pts == 0 {
        return Err(Error::Parameter("min_pts must be at least 1".into()));
    }
    let n = x.n();
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get());
    let r = pairwise_optimized(x, threads)?;
    let neighbors = |i: usize| -> Vec<usize> {
        r.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &dist)| dist <= eps)
            .map(|(j, _)| j)
            .collect()
    };

    const UNVISITED: i64 = -2;
    let mut labels = vec![UNVISITED; n];
    let mut cluster = 0i64;
    let mut queue = VecDeque::new();
    for i in 0..n {
        if labels[i] != UNVISITED {
            continue;
        }
        let seeds = neighbors(i);
        if seeds.len() < min_pts {
            labels[i] = NOISE;
            continue;
        }
        labels[i] = cluster;
        queue.extend(seeds);
        while let Some(j) = queue.pop_front() {
            if labels[j] == NOISE {
                labels[j] = cluster;
            }
            if labels[j] != UNVISITED {
                continue;
            }
            labels[j] = cluster;
            let reach = neighbors(j);
            if reach.len() >= min_pts {
                queue.extend(
                    reach
                        .into_iter()
                        .filter(|&q| labels[q] == UNVISITED || labels[q] == NOISE),
                );
            }
        }
        cluster += 1;
    }
    Ok(DbscanResult {
        labels,
        cluster_count: cluster as usize,
    })
}

/// Adjusted Rand Index between two labelings of the same points.
///
/// Returns 1.0 when both partitions are trivially identical (e.g. a single
/// cluster each), where the chance-corrected formula is undefined.
pub fn adjusted_rand_index<A, B>(a: &[A], b: &[B]) -> Result<f64>
where
    A: Eq + Hash,
    B: Eq + Hash,
{
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "labelings of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    let mut table: HashMap<(&A, &B), u64> = HashMap::new();
    let mut rows: HashMap<&A, u64> = HashMap::new();
    let mut cols: HashMap<&B, u64> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let pairs = |c: u64| (c * c.saturating_sub(1) / 2) as f64;
    let index: f64 = table.values().map(|&c| pairs(c)).sum();
    let sum_a: f64 = rows.values().map(|&c| pairs(c)).sum();
    let sum_b: f64 = cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(n as u64);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_a * sum_b / total;
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate, GenKind, GenSpec};

    #[test]
    fn two_points_two_clusters() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [5.0, 1.0]]).unwrap();
        let res = kmeans(&x, 2, 0, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(res.inertia, 0.0);
        assert_ne!(res.labels[0], res.labels[1]);
    }

    #[test]
    fn square_corners_match_brute_force() {
        let pts = [[0.0, 0.0], [0.0, 1.0], [3.0, 0.0], [3.0, 1.0]];
        let x = DataMatrix::from_rows(&pts).unwrap();
        // brute force over all labelings with both clusters nonempty
        let mut best = f64::INFINITY;
        for mask in 1u32..15 {
            let mut cost = 0.0;
            for side in [0, 1] {
                let members: Vec<&[f64; 2]> = (0..4).filter(|i| (mask >> i) & 1 == side).map(|i| &pts[i]).collect();
                let cx = members.iter().map(|p| p[0]).sum::<f64>() / members.len() as f64;
                let cy = members.iter().map(|p| p[1]).sum::<f64>() / members.len() as f64;
                cost += members
                    .iter()
                    .map(|p| (p[0] - cx).powi(2) + (p[1] - cy).powi(2))
                    .sum::<f64>();
            }
            best = best.min(cost);
        }
        for seed in 0..10 {
            let res = kmeans(&x, 2, seed, DEFAULT_MAX_ITER).unwrap();
            assert!(
                (res.inertia - best).abs() < 1e-12,
                "seed {seed}: {} vs {best}",
                res.inertia
            );
        }
    }

    #[test]
    fn k_out_of_range() {
        let x = DataMatrix::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(matches!(kmeans(&x, 3, 0, 10), Err(Error::Parameter(_))));
        assert!(matches!(kmeans(&x, 0, 0, 10), Err(Error::Parameter(_))));
    }

    #[test]
    fn inertia_is_monotone_and_recomputable() {
        let (x, _) = generate(&GenSpec::new(GenKind::Gmm, 400, 3)).unwrap();
        for seed in 0..5 {
            let res = kmeans(&x, 5, seed, DEFAULT_MAX_ITER).unwrap();
            for w in res.inertia_trace.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "{} -> {}", w[0], w[1]);
            }
            let d = x.d();
            let recomputed: f64 = x
                .rows()
                .map(|r| {
                    (0..5)
                        .map(|c| squared_distance(r, &res.centers[c * d..(c + 1) * d]))
                        .fold(f64::INFINITY, f64::min)
                })
                .sum();
            assert!((recomputed - res.inertia).abs() <= 1e-9 * res.inertia.max(1.0));
            assert!(res.labels.iter().all(|&l| l < 5));
        }
    }

    #[test]
    fn empty_cluster_takes_farthest_point() {
        let x = DataMatrix::from_rows(&[[0.0], [1.0], [4.0], [10.0]]).unwrap();
        let mut labels = vec![0, 0, 0, 1];
        let previous = [0.5, 10.0, 100.0];
        let centers = update_centers(&x, &mut labels, &previous, 3);
        assert_eq!(labels, vec![0, 0, 2, 1]);
        assert_eq!(centers, vec![0.5, 10.0, 4.0]);
    }

    #[test]
    fn duplicate_points_still_terminate() {
        let x = DataMatrix::from_rows(&[[0.0], [0.0], [0.0], [10.0]]).unwrap();
        let res = kmeans(&x, 3, 1, 50).unwrap();
        assert_eq!(res.inertia, 0.0);
        assert!(res.labels.iter().all(|&l| l < 3));
    }

    #[test]
    fn blobs_kmeans_recovers_truth() {
        let spec = GenSpec {
            spread: 0.5,
            ..GenSpec::new(GenKind::Blobs, 300, 7)
        };
        let (x, truth) = generate(&spec).unwrap();
        let res = kmeans(&x, 3, 7, DEFAULT_MAX_ITER).unwrap();
        assert!(adjusted_rand_index(&res.labels, &truth).unwrap() >= 0.95);
    }

    #[test]
    fn dbscan_two_pairs() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [0.1, 0.0], [50.0, 0.0], [50.1, 0.0]]).unwrap();
        let res = dbscan(&x, 0.2, 2).unwrap();
        assert_eq!(res.labels, vec![0, 0, 1, 1]);
        assert_eq!(res.cluster_count, 2);
    }

    #[test]
    fn dbscan_noise_and_border() {
        // core at 1 (neighbors 0, 1, 2); 0 and 2 are border; 9 is noise
        let x = DataMatrix::from_rows(&[[0.0], [1.0], [2.0], [9.0]]).unwrap();
        let res = dbscan(&x, 1.0, 3).unwrap();
        assert_eq!(res.labels, vec![0, 0, 0, NOISE]);
        assert_eq!(res.cluster_count, 1);
    }

    #[test]
    fn dbscan_border_goes_to_first_cluster() {
        // 0.6 is a border point reachable from cores 0.15 and 1.05
        let left = [0.0, 0.02, 0.04, 0.15];
        let right = [1.05, 1.2, 1.22, 1.24];
        let build = |first: &[f64], second: &[f64]| {
            let rows: Vec<[f64; 1]> = first.iter().chain(&[0.6]).chain(second).map(|&v| [v]).collect();
            DataMatrix::from_rows(&rows).unwrap()
        };
        for (a, b) in [(&left, &right), (&right, &left)] {
            let res = dbscan(&build(a, b), 0.5, 4).unwrap();
            assert_eq!(res.cluster_count, 2);
            assert_eq!(res.labels, vec![0, 0, 0, 0, 0, 1, 1, 1, 1]);
        }
    }

    #[test]
    fn dbscan_parameters() {
        let x = DataMatrix::from_rows(&[[0.0]]).unwrap();
        assert!(dbscan(&x, 0.0, 1).is_err());
        assert!(dbscan(&x, 1.0, 0).is_err());
        assert_eq!(dbscan(&x, 1.0, 1).unwrap().labels, vec![0]);
    }

    #[test]
    fn dbscan_repeatable_and_contiguous() {
        let (x, _) = generate(&GenSpec::new(GenKind::Moons, 300, 5)).unwrap();
        let a = dbscan(&x, 0.15, 4).unwrap();
        assert_eq!(a, dbscan(&x, 0.15, 4).unwrap());
        for c in 0..a.cluster_count as i64 {
            assert!(a.labels.contains(&c));
        }
        assert!(a
            .labels
            .iter()
            .all(|&l| l == NOISE || (0..a.cluster_count as i64).contains(&l)));
    }

    #[test]
    fn ari_examples() {
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap(), 1.0);
        assert!((adjusted_rand_index(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap() + 0.5).abs() < 1e-15);
        assert!(adjusted_rand_index(&[0, 1], &[0]).is_err());
    }

    #[test]
    fn ari_is_symmetric_and_near_zero_for_independent() {
        let mut rng = Rng::new(12);
        let a: Vec<usize> = (0..2000).map(|_| rng.below(4)).collect();
        let b: Vec<usize> = (0..2000).map(|_| rng.below(3)).collect();
        let ab = adjusted_rand_index(&a, &b).unwrap();
        assert_eq!(ab, adjusted_rand_index(&b, &a).unwrap());
        assert!(ab.abs() < 0.02, "{ab}");
    }
}
