//! `ukp` — solve, analyze, generate, and benchmark unbounded knapsack
//! instances from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input,
//! 3 a solve hit its timeout (the report is still printed), 4 internal
//! failure, including solvers disagreeing during a benchmark.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use ukp::bench::{
    check_agreement, run_matrix, solve_with, summarize, write_csv, BenchConfig, BenchInstance,
};
use ukp::colgen::{
    column_generation, parse_bpp, ColGenConfig, ColGenError, Pricer, ProfitMode, SortRule,
};
use ukp::dominance::{periodicity_bound, remove_dominated, DominanceLevel};
use ukp::dp::SolveError;
use ukp::generators::{generate, GenSpec};
use ukp::instance::{parse, render, Instance};
use ukp::Termination;

const EXIT_USAGE: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_TIMEOUT: i32 = 3;
const EXIT_INTERNAL: i32 = 4;

#[derive(Parser)]
#[command(
    name = "ukp",
    version,
    about = "Exact solvers and analysis tools for the unbounded knapsack problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file and print a JSON report.
    Solve(SolveArgs),
    /// Report dominated items and the periodicity bound for an instance.
    Analyze(AnalyzeArgs),
    /// Write a seeded random instance.
    Generate(GenerateArgs),
    /// Run an instances × algorithms timing matrix and write a CSV.
    Bench(BenchArgs),
    /// Price cutting-stock patterns by column generation.
    Colgen(ColgenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgArg {
    Naive,
    Oso,
    Tso,
    Gfdp,
    Mtu1,
    Mtu2,
}

impl AlgArg {
    fn name(self) -> &'static str {
        match self {
            AlgArg::Naive => "naive",
            AlgArg::Oso => "oso",
            AlgArg::Tso => "tso",
            AlgArg::Gfdp => "gfdp",
            AlgArg::Mtu1 => "mtu1",
            AlgArg::Mtu2 => "mtu2",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    file: PathBuf,
    #[arg(long, value_enum)]
    alg: AlgArg,
    /// Give up after this many seconds.
    #[arg(long, value_name = "SECONDS")]
    timeout: Option<f64>,
    /// Include the solver's counters in the report.
    #[arg(long)]
    stats: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomArg {
    Simple,
    Multiple,
    Collective,
}

impl From<DomArg> for DominanceLevel {
    fn from(level: DomArg) -> Self {
        match level {
            DomArg::Simple => DominanceLevel::Simple,
            DomArg::Multiple => DominanceLevel::Multiple,
            DomArg::Collective => DominanceLevel::Collective,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Instance file.
    file: PathBuf,
    /// Count items the given dominance level removes.
    #[arg(long, value_enum)]
    dominance: Option<DomArg>,
    /// Compute the capacity above which the best item fills greedily.
    #[arg(long)]
    periodicity: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    RealisticRandom,
    Breq,
    SubsetSum,
    StrongCorr,
}

#[derive(Args)]
struct GenerateArgs {
    /// Distribution family; not needed when --preset is given.
    #[arg(long, value_enum)]
    dist: Option<DistArg>,
    /// Named parameter set: pyasukp-ss, hard-sc, or breq-128-16.
    #[arg(long, conflicts_with = "dist")]
    preset: Option<String>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Smallest weight (subset-sum, strong-corr).
    #[arg(long, default_value_t = 1_000)]
    w_min: u64,
    /// Largest weight; defaults to 500000 for subset-sum and to 10*w_min for
    /// strong-corr.
    #[arg(long)]
    w_max: Option<u64>,
    /// Smallest capacity (subset-sum, strong-corr).
    #[arg(long, default_value_t = 5_000_000)]
    c_min: u64,
    /// Largest capacity (subset-sum, strong-corr).
    #[arg(long, default_value_t = 10_000_000)]
    c_max: u64,
    /// Profit offset over the weight (strong-corr).
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    alpha: i64,
    /// Write the instance here and print a JSON report; stdout otherwise.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Glob matching instance files.
    #[arg(long)]
    instances: String,
    /// Comma-separated algorithm names.
    #[arg(long)]
    algs: String,
    #[arg(long, default_value_t = 1)]
    reps: u32,
    /// Per-run time budget in seconds.
    #[arg(long, value_name = "SECONDS")]
    timeout: Option<f64>,
    /// CSV output path; a .json sidecar with full rows lands next to it.
    #[arg(long)]
    out: PathBuf,
    /// Run on this many worker threads instead of serially.
    #[arg(long, value_name = "WORKERS")]
    parallel: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PricerArg {
    Oso,
    Mtu1,
}

#[derive(Clone, Copy, ValueEnum)]
enum SortArg {
    Efficiency,
    Weight,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfitArg {
    Scaled,
    Native,
}

#[derive(Args)]
struct ColgenArgs {
    /// Demand file: a size count, a roll capacity, then `size [demand]` lines.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "oso")]
    pricer: PricerArg,
    #[arg(long, value_enum, default_value = "efficiency")]
    sort: SortArg,
    #[arg(long, value_enum, default_value = "scaled")]
    profit: ProfitArg,
    /// Write one CSV line per pricing iteration here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INTERNAL, message: message.into() }
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Colgen(args) => cmd_colgen(args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

/// Reads an instance file, returning the parsed instance and the file's
/// SHA-256 so reports can pin exactly what was solved.
fn load_instance(path: &Path) -> Result<(Instance, String), Failure> {
    let bytes = fs::read(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;
    let sha = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .with_context(|| format!("decoding {}", path.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;
    let instance = parse(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;
    Ok((instance, sha))
}

fn parse_timeout(seconds: Option<f64>) -> Result<Option<Duration>, Failure> {
    seconds
        .map(|s| {
            Duration::try_from_secs_f64(s)
                .map_err(|_| Failure::usage(format!("--timeout {s} is not a valid duration")))
        })
        .transpose()
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::CapacityTooLarge { .. } => Failure::input(e.to_string()),
        SolveError::Internal(_) => Failure::internal(e.to_string()),
    }
}

fn print_report(report: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(report).expect("serializing report"));
}

fn cmd_solve(args: SolveArgs) -> Result<i32, Failure> {
    let timeout = parse_timeout(args.timeout)?;
    let (instance, sha) = load_instance(&args.file)?;
    let outcome =
        solve_with(args.alg.name(), &instance, timeout).map_err(solve_failure)?;
    let solution: Vec<(usize, u64)> = outcome.solution.counts().collect();
    let mut report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": "solve",
        "config": {
            "alg": args.alg.name(),
            "timeout_s": args.timeout,
        },
        "instance": args.file.display().to_string(),
        "instance_sha256": sha,
        "n": instance.len(),
        "capacity": instance.capacity(),
        "optimal_value": outcome.optimal_value,
        "elapsed_s": outcome.elapsed.as_secs_f64(),
        "terminated_by": outcome.terminated_by.as_str(),
        "solution": solution,
    });
    if args.stats {
        report["stats"] = json!(outcome.stats);
    }
    print_report(&report);
    Ok(match outcome.terminated_by {
        Termination::Optimal => 0,
        Termination::Timeout => EXIT_TIMEOUT,
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32, Failure> {
    if args.dominance.is_none() && !args.periodicity {
        return Err(Failure::usage(
            "nothing to analyze: pass --dominance <LEVEL> and/or --periodicity",
        ));
    }
    let (instance, sha) = load_instance(&args.file)?;
    let mut report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": "analyze",
        "instance": args.file.display().to_string(),
        "instance_sha256": sha,
        "n": instance.len(),
        "capacity": instance.capacity(),
    });
    if let Some(level) = args.dominance {
        let dominance = remove_dominated(&instance, level.into());
        report["dominance_level"] = json!(dominance.level);
        report["removed_count"] = json!(dominance.removed.len());
        report["survivor_count"] = json!(dominance.survivors.len());
        report["removed"] = json!(dominance.removed);
    }
    if args.periodicity {
        let bound = periodicity_bound(&instance);
        report["best_item"] = json!(bound.best_item);
        report["y_dprime"] = json!(bound.y_dprime);
        report["reduced_capacity"] = json!(bound.reduced_capacity);
        report["fill_copies"] = json!(bound.fill_copies);
    }
    print_report(&report);
    Ok(0)
}

fn cmd_generate(args: GenerateArgs) -> Result<i32, Failure> {
    let spec = if let Some(name) = &args.preset {
        GenSpec::preset(name, args.n, args.seed).ok_or_else(|| {
            Failure::usage(format!(
                "unknown preset {name:?}; expected pyasukp-ss, hard-sc, or breq-128-16"
            ))
        })?
    } else {
        match args.dist {
            None => {
                return Err(Failure::usage("pass either --dist <FAMILY> or --preset <NAME>"))
            }
            Some(DistArg::RealisticRandom) => {
                GenSpec::RealisticRandom { n: args.n, seed: args.seed }
            }
            Some(DistArg::Breq) => GenSpec::Breq { n: args.n, seed: args.seed },
            Some(DistArg::SubsetSum) => GenSpec::SubsetSum {
                n: args.n,
                w_min: args.w_min,
                w_max: args.w_max.unwrap_or(500_000),
                c_min: args.c_min,
                c_max: args.c_max,
                seed: args.seed,
            },
            Some(DistArg::StrongCorr) => GenSpec::StrongCorr {
                n: args.n,
                alpha: args.alpha,
                w_min: args.w_min,
                w_max: args.w_max.unwrap_or(10 * args.w_min),
                c_min: args.c_min,
                c_max: args.c_max,
                seed: args.seed,
            },
        }
    };
    let instance = generate(&spec).map_err(|e| Failure::usage(e.to_string()))?;
    let text = render(&instance);
    match &args.out {
        None => {
            print!("{text}");
            Ok(0)
        }
        Some(path) => {
            fs::write(path, &text)
                .with_context(|| format!("writing {}", path.display()))
                .map_err(|e| Failure::input(format!("{e:#}")))?;
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "command": "generate",
                "config": spec,
                "out": path.display().to_string(),
                "instance_sha256": sha256_hex(text.as_bytes()),
                "n": instance.len(),
                "capacity": instance.capacity(),
            });
            print_report(&report);
            Ok(0)
        }
    }
}

fn cmd_bench(args: BenchArgs) -> Result<i32, Failure> {
    let algorithms: Vec<String> =
        args.algs.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    if algorithms.is_empty() {
        return Err(Failure::usage("--algs needs at least one algorithm name"));
    }
    for name in &algorithms {
        if !ukp::bench::ALGORITHMS.contains(&name.as_str()) {
            return Err(Failure::usage(format!(
                "unknown algorithm {name:?}; expected one of {}",
                ukp::bench::ALGORITHMS.join(", ")
            )));
        }
    }
    if args.reps == 0 {
        return Err(Failure::usage("--reps must be at least 1"));
    }
    let timeout = parse_timeout(args.timeout)?;

    let paths = glob::glob(&args.instances)
        .map_err(|e| Failure::usage(format!("bad --instances pattern: {e}")))?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in paths {
        let path = entry.map_err(|e| Failure::input(e.to_string()))?;
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(Failure::input(format!("no instance files match {:?}", args.instances)));
    }
    let mut instances = Vec::with_capacity(files.len());
    for path in &files {
        let (instance, _) = load_instance(path)?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let dataset = path
            .parent()
            .and_then(Path::file_name)
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| ".".to_string());
        instances.push(BenchInstance { id, dataset, instance });
    }

    let config = BenchConfig { algorithms, reps: args.reps, timeout, parallel: args.parallel };
    let rows = run_matrix(&instances, &config);

    let csv_file = fs::File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;
    write_csv(&rows, csv_file).map_err(|e| Failure::internal(format!("writing CSV: {e}")))?;
    let sidecar = args.out.with_extension("json");
    let report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": {
            "instances": args.instances,
            "algs": config.algorithms,
            "reps": config.reps,
            "timeout_s": args.timeout,
            "parallel": args.parallel,
        },
        "rows": rows,
    });
    fs::write(&sidecar, serde_json::to_string_pretty(&report).expect("serializing rows"))
        .with_context(|| format!("writing {}", sidecar.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;

    let summaries = summarize(&rows);
    let fmt = |v: Option<f64>| v.map_or("--".to_string(), |v| format!("{v:.6}"));
    println!(
        "{:<20} {:<10} {:>5} {:>9} {:>12} {:>12} {:>12}",
        "dataset", "algorithm", "runs", "finished", "avg_s", "sd_s", "max_s"
    );
    for s in &summaries {
        println!(
            "{:<20} {:<10} {:>5} {:>9} {:>12} {:>12} {:>12}",
            s.dataset,
            s.algorithm,
            s.runs,
            s.finished,
            fmt(s.avg_s),
            fmt(s.sd_s),
            fmt(s.max_s)
        );
    }

    let disagreements = check_agreement(&rows);
    if !disagreements.is_empty() {
        for message in &disagreements {
            eprintln!("disagreement: {message}");
        }
        return Err(Failure::internal(format!(
            "{} instance(s) solved to different values",
            disagreements.len()
        )));
    }
    Ok(0)
}

fn cmd_colgen(args: ColgenArgs) -> Result<i32, Failure> {
    let config = ColGenConfig {
        pricer: match args.pricer {
            PricerArg::Oso => Pricer::Oso,
            PricerArg::Mtu1 => Pricer::Mtu1,
        },
        sort: match args.sort {
            SortArg::Efficiency => SortRule::Efficiency,
            SortArg::Weight => SortRule::Weight,
        },
        profit: match args.profit {
            ProfitArg::Scaled => ProfitMode::Scaled,
            ProfitArg::Native => ProfitMode::Native,
        },
    };
    if config.pricer == Pricer::Mtu1 && config.profit == ProfitMode::Native {
        return Err(Failure::usage(
            "--pricer mtu1 only supports --profit scaled",
        ));
    }
    let bytes = fs::read(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;
    let sha = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .with_context(|| format!("decoding {}", args.file.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;
    let problem = parse_bpp(&text)
        .with_context(|| format!("parsing {}", args.file.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;

    let outcome = column_generation(&problem, &config).map_err(|e| match e {
        ColGenError::Unsupported(_) => Failure::usage(e.to_string()),
        ColGenError::Master(_) | ColGenError::Pricing(_) => Failure::internal(e.to_string()),
    })?;

    if let Some(path) = &args.trace {
        let mut csv = String::from("iteration,lp_value,master_s,pricing_s,improving\n");
        for row in &outcome.trace {
            let _ = writeln!(
                csv,
                "{},{:.12},{:.9},{:.9},{}",
                row.iteration, row.lp_value, row.master_s, row.pricing_s, row.improving
            );
        }
        fs::write(path, csv)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(|e| Failure::input(format!("{e:#}")))?;
    }

    let report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": "colgen",
        "config": config,
        "instance": args.file.display().to_string(),
        "instance_sha256": sha,
        "sizes": problem.sizes.len(),
        "capacity": problem.capacity,
        "lp_value": outcome.lp_value,
        "iterations": outcome.iterations,
        "stopped_by": outcome.stopped_by,
        "pattern_count": outcome.patterns.len(),
    });
    print_report(&report);
    Ok(0)
}
