//! `tendency`: cluster-tendency assessment from the command line.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 data error,
//! 3 internal or correctness error. Every failure prints one line starting
//! with `error:` on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tendency::bench::run_bench;
use tendency::clustering::{adjusted_rand_index, dbscan, kmeans, DEFAULT_MAX_ITER, NOISE};
use tendency::datagen::{generate, GenKind, GenSpec};
use tendency::distance::{pairwise_naive, pairwise_optimized};
use tendency::hopkins::{hopkins, DEFAULT_SAMPLE_FRAC, DEFAULT_TRIALS};
use tendency::ingest::{read_csv, read_header, write_csv, ColumnRef, IngestOptions};
use tendency::render::{to_grayscale, write_pgm};
use tendency::vat::{vat, Variant};
use tendency::{DataMatrix, Error};

#[derive(Parser)]
#[command(
    name = "tendency",
    version,
    about = "Visual assessment of cluster tendency and related diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reorder the dissimilarity matrix of a dataset and render it.
    Vat(VatArgs),
    /// Write a synthetic dataset as CSV.
    Generate(GenerateArgs),
    /// Compute the Hopkins statistic.
    Hopkins(HopkinsArgs),
    /// Run k-means or DBSCAN, optionally scoring against a label column.
    Cluster(ClusterArgs),
    /// Time the naive and optimized pipelines.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV file to read.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated feature columns (names or zero-based indices).
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    /// The file has no header line.
    #[arg(long)]
    no_header: bool,
    /// Standardize every feature to zero mean and unit population std.
    #[arg(long)]
    standardize: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Naive,
    Optimized,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Naive => Variant::Naive,
            VariantArg::Optimized => Variant::Optimized,
        }
    }
}

#[derive(Args)]
struct VatArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "optimized")]
    variant: VariantArg,
    /// Worker threads for the distance stage (default: available cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Grayscale PGM of the reordered matrix.
    #[arg(long)]
    out_image: Option<PathBuf>,
    /// Permutation, one index per line.
    #[arg(long)]
    out_perm: Option<PathBuf>,
    /// Reordered matrix as CSV.
    #[arg(long)]
    out_matrix: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Blobs,
    Moons,
    Circles,
    Gmm,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Blobs => GenKind::Blobs,
            KindArg::Moons => GenKind::Moons,
            KindArg::Circles => GenKind::Circles,
            KindArg::Gmm => GenKind::Gmm,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise std (moons, circles).
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Cluster count (blobs, gmm).
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Inner radius ratio (circles).
    #[arg(long, default_value_t = 0.5)]
    factor: f64,
    /// Cluster std (blobs).
    #[arg(long, default_value_t = 1.0)]
    spread: f64,
    /// Half-width of the blob center box.
    #[arg(long = "box", default_value_t = 10.0)]
    box_size: f64,
    /// Append a `label` column.
    #[arg(long)]
    with_labels: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct HopkinsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_FRAC)]
    sample_frac: f64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Kmeans,
    Dbscan,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Cluster count (kmeans).
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Seed for k-means++ initialization.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Neighborhood radius (dbscan).
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Minimum neighborhood size, including the point itself (dbscan).
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    /// Ground-truth label column; enables the ARI line.
    #[arg(long)]
    labels: Option<String>,
    /// Write assigned labels, one per line.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated dataset sizes for the generated datasets.
    #[arg(long, value_delimiter = ',', default_value = "150,500")]
    sizes: Vec<usize>,
    /// Generated dataset kinds.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "blobs,moons,circles,gmm")]
    kinds: Vec<KindArg>,
    /// Extra CSV datasets (all columns except `label` are features).
    #[arg(long)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// CSV report path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Markdown report path (stdout when omitted).
    #[arg(long)]
    markdown: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parameter(_) | Error::EmptySelection => 1,
            Error::Correctness { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Reads features; a header column named `label` is never treated as a feature.
fn load(args: &InputArgs, label_column: Option<&str>) -> Result<(DataMatrix, Option<Vec<i64>>), Error> {
    let label = match label_column {
        Some(col) => Some(ColumnRef::parse(col)),
        None if !args.no_header && read_header(&args.input)?.iter().any(|h| h == "label") => {
            Some(ColumnRef::Name("label".into()))
        }
        None => None,
    };
    let opts = IngestOptions {
        has_header: !args.no_header,
        select_columns: args
            .columns
            .as_ref()
            .map(|cols| cols.iter().map(|c| ColumnRef::parse(c)).collect()),
        standardize: args.standardize,
        label_column: label,
    };
    read_csv(&args.input, &opts)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn cmd_vat(args: VatArgs) -> CmdResult {
    let (x, _) = load(&args.input, None)?;
    let variant = Variant::from(args.variant);
    let threads = args.threads.unwrap_or_else(default_threads);
    let r = match variant {
        Variant::Naive => pairwise_naive(&x)?,
        Variant::Optimized => pairwise_optimized(&x, threads)?,
    };
    let res = vat(&r, variant)?;
    if let Some(path) = &args.out_image {
        write_pgm(&to_grayscale(&res.reordered), path)?;
    }
    if let Some(path) = &args.out_perm {
        let text: String = res.permutation.as_slice().iter().map(|i| format!("{i}\n")).collect();
        write_text(path, &text)?;
    }
    if let Some(path) = &args.out_matrix {
        let text: String = (0..res.reordered.n())
            .map(|i| {
                let row: Vec<String> = res.reordered.row(i).iter().map(|v| format!("{v:?}")).collect();
                row.join(",") + "\n"
            })
            .collect();
        write_text(path, &text)?;
    }
    println!("vat: n={} d={} variant={variant}", x.n(), x.d());
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> CmdResult {
    let spec = GenSpec {
        kind: args.kind.into(),
        n: args.n,
        seed: args.seed,
        noise: args.noise,
        k: args.k,
        factor: args.factor,
        spread: args.spread,
        box_size: args.box_size,
    };
    let (x, labels) = generate(&spec)?;
    write_csv(&args.out, &x, args.with_labels.then_some(&labels[..]))?;
    Ok(())
}

fn cmd_hopkins(args: HopkinsArgs) -> CmdResult {
    let (x, _) = load(&args.input, None)?;
    let report = hopkins(&x, args.sample_frac, args.trials, args.seed)?;
    println!(
        "hopkins: {:.4} (n={}, m={}, trials={}, seed={})",
        report.score, report.n, report.m, report.trials, report.seed
    );
    let per_trial: Vec<String> = report.scores.iter().map(|s| format!("{s:?}")).collect();
    println!("trials: {}", per_trial.join(" "));
    Ok(())
}

fn cmd_cluster(args: ClusterArgs) -> CmdResult {
    let (x, truth) = load(&args.input, args.labels.as_deref())?;
    let labels: Vec<i64> = match args.algo {
        Algo::Kmeans => {
            let res = kmeans(&x, args.k, args.seed, args.max_iter)?;
            println!(
                "kmeans: k={} inertia={:.6} iterations={}",
                args.k, res.inertia, res.iterations
            );
            res.labels.into_iter().map(|l| l as i64).collect()
        }
        Algo::Dbscan => {
            let res = dbscan(&x, args.eps, args.min_pts)?;
            let noise = res.labels.iter().filter(|&&l| l == NOISE).count();
            println!(
                "dbscan: eps={} min_pts={} clusters={} noise={noise}",
                args.eps, args.min_pts, res.cluster_count
            );
            res.labels
        }
    };
    if let (Some(truth), Some(_)) = (&truth, &args.labels) {
        println!("ari: {:.4}", adjusted_rand_index(&labels, truth)?);
    }
    if let Some(path) = &args.out {
        let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
        write_text(path, &text)?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let mut datasets = Vec::new();
    for &n in &args.sizes {
        for &kind in &args.kinds {
            let kind = GenKind::from(kind);
            let (x, _) = generate(&GenSpec::new(kind, n, args.seed))?;
            datasets.push((format!("{}-{n}", kind.as_str()), x));
        }
    }
    for path in &args.input {
        let input = InputArgs {
            input: path.clone(),
            columns: None,
            no_header: false,
            standardize: false,
        };
        let (x, _) = load(&input, None)?;
        let name = path
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        datasets.push((name, x));
    }
    let threads = args.threads.unwrap_or_else(default_threads);
    let report = run_bench(&datasets, args.repeats, threads)?;
    match &args.out {
        Some(path) => write_text(path, &report.to_csv())?,
        None => print!("{}", report.to_csv()),
    }
    match &args.markdown {
        Some(path) => write_text(path, &report.to_markdown())?,
        None => print!("{}", report.to_markdown()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid usage");
            eprintln!(
                "{}",
                if first.starts_with("error:") {
                    first.to_string()
                } else {
                    format!("error: {first}")
                }
            );
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Vat(a) => cmd_vat(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Hopkins(a) => cmd_hopkins(a),
        Command::Cluster(a) => cmd_cluster(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
