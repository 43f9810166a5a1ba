//! Seeded synthetic datasets: blobs, moons, circles and a Gaussian mixture,
//! plus the bundled Iris measurements.
//!
//! All generators are two-dimensional and driven by [`Rng`], so a spec
//! reproduces the same matrix bit for bit.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::rng::Rng;

const IRIS_CSV: &str = include_str!("../data/iris.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Blobs,
    Moons,
    Circles,
    Gmm,
}

impl GenKind {
    pub const ALL: [GenKind; 4] = [GenKind::Blobs, GenKind::Moons, GenKind::Circles, GenKind::Gmm];

    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Blobs => "blobs",
            GenKind::Moons => "moons",
            GenKind::Circles => "circles",
            GenKind::Gmm => "gmm",
        }
    }
}

impl std::str::FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown dataset kind `{s}`")))
    }
}

/// Generator parameters. Fields irrelevant to `kind` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub seed: u64,
    /// Std of additive noise (moons, circles).
    pub noise: f64,
    /// Number of clusters (blobs, gmm).
    pub k: usize,
    /// Inner-to-outer radius ratio (circles).
    pub factor: f64,
    /// Per-cluster std (blobs).
    pub spread: f64,
    /// Blob centers are drawn from `[-box, box]^2`.
    pub box_size: f64,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, seed: u64) -> Self {
        GenSpec {
            kind,
            n,
            seed,
            noise: 0.05,
            k: 3,
            factor: 0.5,
            spread: 1.0,
            box_size: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("n must be at least 1".into()));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::Parameter(format!("noise must be >= 0, got {}", self.noise)));
        }
        match self.kind {
            GenKind::Blobs | GenKind::Gmm => {
                if self.k == 0 || self.k > self.n {
                    return Err(Error::Parameter(format!(
                        "cluster count must satisfy 1 <= k <= n, got k={} n={}",
                        self.k, self.n
                    )));
                }
                if self.kind == GenKind::Blobs {
                    if !(self.spread >= 0.0 && self.spread.is_finite()) {
                        return Err(Error::Parameter(format!("spread must be >= 0, got {}", self.spread)));
                    }
                    if !(self.box_size > 0.0 && self.box_size.is_finite()) {
                        return Err(Error::Parameter(format!("box must be > 0, got {}", self.box_size)));
                    }
                }
            }
            GenKind::Circles => {
                if !(self.factor > 0.0 && self.factor < 1.0) {
                    return Err(Error::Parameter(format!(
                        "factor must lie in (0, 1), got {}",
                        self.factor
                    )));
                }
            }
            GenKind::Moons => {}
        }
        Ok(())
    }
}

/// Generates `(data, labels)` for `spec`.
pub fn generate(spec: &GenSpec) -> Result<(DataMatrix, Vec<usize>)> {
    spec.validate()?;
    let mut rng = Rng::new(spec.seed);
    let (points, labels) = match spec.kind {
        GenKind::Blobs => blobs(spec, &mut rng),
        GenKind::Moons => moons(spec, &mut rng),
        GenKind::Circles => circles(spec, &mut rng),
        GenKind::Gmm => gmm(spec, &mut rng),
    };
    let data = DataMatrix::new(spec.n, 2, points)?.with_column_names(vec!["x".into(), "y".into()])?;
    Ok((data, labels))
}

fn blobs(spec: &GenSpec, rng: &mut Rng) -> (Vec<f64>, Vec<usize>) {
    let centers: Vec<[f64; 2]> = (0..spec.k)
        .map(|_| {
            let cx = rng.uniform(-spec.box_size, spec.box_size);
            let cy = rng.uniform(-spec.box_size, spec.box_size);
            [cx, cy]
        })
        .collect();
    isotropic_round_robin(spec.n, &centers, &vec![spec.spread; spec.k], rng)
}

fn gmm(spec: &GenSpec, rng: &mut Rng) -> (Vec<f64>, Vec<usize>) {
    let mut centers = Vec::with_capacity(spec.k);
    let mut stds = Vec::with_capacity(spec.k);
    for _ in 0..spec.k {
        let cx = rng.uniform(-5.0, 5.0);
        let cy = rng.uniform(-5.0, 5.0);
        centers.push([cx, cy]);
        stds.push(rng.uniform(0.8, 1.6));
    }
    isotropic_round_robin(spec.n, &centers, &stds, rng)
}

fn isotropic_round_robin(n: usize, centers: &[[f64; 2]], stds: &[f64], rng: &mut Rng) -> (Vec<f64>, Vec<usize>) {
    let mut points = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % centers.len();
        points.push(rng.normal(centers[c][0], stds[c]));
        points.push(rng.normal(centers[c][1], stds[c]));
        labels.push(c);
    }
    (points, labels)
}

/// `count` evenly spaced values from `0` to `end`, inclusive of both ends.
fn linspace_closed(end: f64, count: usize) -> impl Iterator<Item = f64> {
    let step = if count > 1 { end / (count - 1) as f64 } else { 0.0 };
    (0..count).map(move |i| i as f64 * step)
}

/// `count` evenly spaced values in `[0, end)`.
fn linspace_open(end: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| end * i as f64 / count as f64)
}

fn moons(spec: &GenSpec, rng: &mut Rng) -> (Vec<f64>, Vec<usize>) {
    let outer = spec.n.div_ceil(2);
    let inner = spec.n - outer;
    let mut points = Vec::with_capacity(2 * spec.n);
    for t in linspace_closed(PI, outer) {
        points.extend([t.cos(), t.sin()]);
    }
    for t in linspace_closed(PI, inner) {
        points.extend([1.0 - t.cos(), 0.5 - t.sin()]);
    }
    add_noise(&mut points, spec.noise, rng);
    (points, two_labels(outer, inner))
}

fn circles(spec: &GenSpec, rng: &mut Rng) -> (Vec<f64>, Vec<usize>) {
    let outer = spec.n.div_ceil(2);
    let inner = spec.n - outer;
    let mut points = Vec::with_capacity(2 * spec.n);
    for t in linspace_open(2.0 * PI, outer) {
        points.extend([t.cos(), t.sin()]);
    }
    for t in linspace_open(2.0 * PI, inner) {
        points.extend([spec.factor * t.cos(), spec.factor * t.sin()]);
    }
    add_noise(&mut points, spec.noise, rng);
    (points, two_labels(outer, inner))
}

fn add_noise(points: &mut [f64], noise: f64, rng: &mut Rng) {
    if noise > 0.0 {
        for v in points {
            *v += noise * rng.next_normal();
        }
    }
}

fn two_labels(first: usize, second: usize) -> Vec<usize> {
    let mut labels = vec![0; first];
    labels.resize(first + second, 1);
    labels
}

/// The bundled Iris measurements (150 x 4) with species labels 0, 1, 2.
pub fn iris() -> (DataMatrix, Vec<usize>) {
    let mut lines = IRIS_CSV.lines();
    let header: Vec<String> = lines.next().expect("header").split(',').map(String::from).collect();
    let mut values = Vec::with_capacity(600);
    let mut labels = Vec::with_capacity(150);
    for line in lines.filter(|l| !l.is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        values.extend(
            fields[..4]
                .iter()
                .map(|f| f.parse::<f64>().expect("numeric iris field")),
        );
        labels.push(fields[4].parse().expect("integer iris label"));
    }
    let x = DataMatrix::new(labels.len(), 4, values)
        .and_then(|m| m.with_column_names(header[..4].to_vec()))
        .expect("bundled iris data is well formed");
    (x, labels)
}

/// Path of the bundled Iris CSV inside the source tree.
pub fn iris_csv_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv")
}
