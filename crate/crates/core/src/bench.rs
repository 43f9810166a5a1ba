//! Timing harness comparing the naive and optimized VAT pipelines.
//!
//! Every dataset first passes a correctness gate (both pipelines must yield
//! the same permutation and a bitwise-identical reordered matrix); only then
//! are the stages timed. Each variant gets one discarded warm-up run followed
//! by `repeats` timed runs, and medians are reported.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use crate::distance::{pairwise_naive, pairwise_optimized};
use crate::error::{Error, Result};
use crate::matrix::{permutation_apply, DataMatrix, DissimilarityMatrix, Permutation, VatResult};
use crate::vat::{vat_order_naive, vat_order_optimized, Variant};

pub const MIN_REPEATS: usize = 3;

/// Placed at the top of every Markdown report.
pub const BASELINE_NOTE: &str = "Both variants are compiled Rust; speedups compare the O(n^3) \
reference ordering and serial distance loop against the O(n^2) ordering and parallel distance \
kernel. Speedups of 25x-54x reported for interpreted-language baselines are not comparable \
and are not a target here.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Distance,
    Ordering,
    Total,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::Distance, Stage::Ordering, Stage::Total];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Distance => "distance",
            Stage::Ordering => "ordering",
            Stage::Total => "total",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub n: usize,
    pub d: usize,
    pub variant: Variant,
    pub stage: Stage,
    pub median_seconds: f64,
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Per dataset: naive total median / optimized total median.
    pub speedups: Vec<(String, f64)>,
    pub environment: String,
}

/// Median timings of one variant, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTimes {
    pub distance: f64,
    pub ordering: f64,
    pub total: f64,
}

impl StageTimes {
    pub fn get(&self, stage: Stage) -> f64 {
        match stage {
            Stage::Distance => self.distance,
            Stage::Ordering => self.ordering,
            Stage::Total => self.total,
        }
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Pipeline {
    distance: fn(&DataMatrix, usize) -> Result<DissimilarityMatrix>,
    order: fn(&DissimilarityMatrix) -> Result<Permutation>,
}

impl Pipeline {
    fn for_variant(variant: Variant) -> Self {
        match variant {
            Variant::Naive => Pipeline {
                distance: |x, _| pairwise_naive(x),
                order: vat_order_naive,
            },
            Variant::Optimized => Pipeline {
                distance: pairwise_optimized,
                order: vat_order_optimized,
            },
        }
    }

    fn run(&self, x: &DataMatrix, threads: usize) -> Result<VatResult> {
        let r = (self.distance)(x, threads)?;
        let permutation = (self.order)(&r)?;
        let reordered = permutation_apply(&r, &permutation)?;
        Ok(VatResult { permutation, reordered })
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        0.5 * (xs[mid - 1] + xs[mid])
    }
}

fn time_pipeline(p: Pipeline, x: &DataMatrix, repeats: usize, threads: usize) -> Result<StageTimes> {
    black_box(p.run(x, threads)?);
    let mut dist = Vec::with_capacity(repeats);
    let mut order = Vec::with_capacity(repeats);
    let mut total = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let r = (p.distance)(black_box(x), threads)?;
        let t_dist = start.elapsed().as_secs_f64();

        let start = Instant::now();
        let perm = (p.order)(black_box(&r))?;
        let reordered = permutation_apply(&r, &perm)?;
        let t_order = start.elapsed().as_secs_f64();
        black_box(reordered);

        dist.push(t_dist);
        order.push(t_order);
        total.push(t_dist + t_order);
    }
    Ok(StageTimes {
        distance: median(dist),
        ordering: median(order),
        total: median(total),
    })
}

/// Times one variant: a warm-up run, then `repeats` measured runs.
pub fn time_variant(x: &DataMatrix, variant: Variant, repeats: usize, threads: usize) -> Result<StageTimes> {
    check_params(repeats, threads)?;
    time_pipeline(Pipeline::for_variant(variant), x, repeats, threads)
}

fn check_params(repeats: usize, threads: usize) -> Result<()> {
    if repeats < MIN_REPEATS {
        return Err(Error::Parameter(format!(
            "repeats must be at least {MIN_REPEATS}, got {repeats}"
        )));
    }
    if threads == 0 {
        return Err(Error::Parameter("threads must be at least 1".into()));
    }
    Ok(())
}

fn same_result(a: &VatResult, b: &VatResult) -> bool {
    a.permutation == b.permutation
        && a.reordered.n() == b.reordered.n()
        && a.reordered
            .values()
            .iter()
            .zip(b.reordered.values())
            .all(|(p, q)| p.to_bits() == q.to_bits())
}

/// Gate: both pipelines must agree exactly on `x`.
pub fn verify_equivalence(name: &str, x: &DataMatrix, threads: usize) -> Result<()> {
    verify_pipelines(
        name,
        x,
        threads,
        Pipeline::for_variant(Variant::Naive),
        Pipeline::for_variant(Variant::Optimized),
    )
}

fn verify_pipelines(name: &str, x: &DataMatrix, threads: usize, naive: Pipeline, optimized: Pipeline) -> Result<()> {
    let a = naive.run(x, threads)?;
    let b = optimized.run(x, threads)?;
    if same_result(&a, &b) {
        Ok(())
    } else {
        let detail = if a.permutation != b.permutation {
            "permutations differ".to_string()
        } else {
            "reordered matrices differ".to_string()
        };
        Err(Error::Correctness {
            dataset: name.to_string(),
            detail,
        })
    }
}

/// Gates and times every dataset with both variants.
pub fn run_bench(datasets: &[(String, DataMatrix)], repeats: usize, threads: usize) -> Result<BenchReport> {
    run_bench_pipelines(
        datasets,
        repeats,
        threads,
        Pipeline::for_variant(Variant::Naive),
        Pipeline::for_variant(Variant::Optimized),
    )
}

pub(crate) fn run_bench_pipelines(
    datasets: &[(String, DataMatrix)],
    repeats: usize,
    threads: usize,
    naive: Pipeline,
    optimized: Pipeline,
) -> Result<BenchReport> {
    check_params(repeats, threads)?;
    for (name, x) in datasets {
        verify_pipelines(name, x, threads, naive, optimized)?;
    }

    let mut rows = Vec::with_capacity(datasets.len() * 6);
    let mut speedups = Vec::with_capacity(datasets.len());
    for (name, x) in datasets {
        let mut totals = [0.0; 2];
        for (slot, (variant, pipeline)) in [(Variant::Naive, naive), (Variant::Optimized, optimized)]
            .into_iter()
            .enumerate()
        {
            let times = time_pipeline(pipeline, x, repeats, threads)?;
            totals[slot] = times.total;
            rows.extend(Stage::ALL.into_iter().map(|stage| BenchRow {
                dataset: name.clone(),
                n: x.n(),
                d: x.d(),
                variant,
                stage,
                median_seconds: times.get(stage),
                repeats,
            }));
        }
        speedups.push((name.clone(), speedup(totals[0], totals[1])));
    }
    Ok(BenchReport {
        rows,
        speedups,
        environment: environment(threads),
    })
}

fn speedup(baseline: f64, candidate: f64) -> f64 {
    if candidate > 0.0 {
        baseline / candidate
    } else {
        f64::INFINITY
    }
}

fn environment(threads: usize) -> String {
    let cpu = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|m| m.trim().to_string())
        })
        .unwrap_or_else(|| std::env::consts::ARCH.to_string());
    let cores = std::thread::available_parallelism().map_or(1, |c| c.get());
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    format!("cpu: {cpu}; available cores: {cores}; threads: {threads}; build: {profile}")
}

impl BenchReport {
    pub fn row(&self, dataset: &str, variant: Variant, stage: Stage) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.dataset == dataset && r.variant == variant && r.stage == stage)
    }

    pub fn speedup(&self, dataset: &str) -> Option<f64> {
        self.speedups.iter().find(|(d, _)| d == dataset).map(|(_, s)| *s)
    }

    /// `dataset,n,d,variant,stage,median_seconds,repeats`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset,n,d,variant,stage,median_seconds,repeats\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:?},{}",
                r.dataset,
                r.n,
                r.d,
                r.variant,
                r.stage.as_str(),
                r.median_seconds,
                r.repeats
            );
        }
        out
    }

    /// One line per dataset with total times and speedup, plus per-stage medians.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# VAT execution time (median seconds)\n");
        let _ = writeln!(out, "> {BASELINE_NOTE}\n");
        let _ = writeln!(out, "Environment: {}\n", self.environment);
        let _ = writeln!(
            out,
            "| Dataset | n | d | Naive VAT | Optimized VAT | Speedup (optimized) |"
        );
        let _ = writeln!(out, "|---|---:|---:|---:|---:|---:|");
        for (name, s) in &self.speedups {
            let naive = self.row(name, Variant::Naive, Stage::Total);
            let opt = self.row(name, Variant::Optimized, Stage::Total);
            if let (Some(a), Some(b)) = (naive, opt) {
                let _ = writeln!(
                    out,
                    "| {name} | {} | {} | {:.4} | {:.4} | {:.2}x |",
                    a.n, a.d, a.median_seconds, b.median_seconds, s
                );
            }
        }
        let _ = writeln!(out, "\n| Dataset | Variant | Distance | Ordering | Total |");
        let _ = writeln!(out, "|---|---|---:|---:|---:|");
        for (name, _) in &self.speedups {
            for variant in [Variant::Naive, Variant::Optimized] {
                let t = |stage| self.row(name, variant, stage).map_or(f64::NAN, |r| r.median_seconds);
                let _ = writeln!(
                    out,
                    "| {name} | {variant} | {:.6} | {:.6} | {:.6} |",
                    t(Stage::Distance),
                    t(Stage::Ordering),
                    t(Stage::Total)
                );
            }
        }
        out
    }
}
