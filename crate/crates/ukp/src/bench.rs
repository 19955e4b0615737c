//! Benchmark harness: run a matrix of instances × algorithms × repetitions,
//! collect one row per run, and reduce the rows to per-dataset summaries.
//!
//! Runs are serial by default so timings are honest on a single core. An
//! explicit worker count runs the matrix on a rayon pool instead (compiled
//! in through the default `parallel` feature); rows come back in the same
//! deterministic order either way.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bb::{solve_mtu1, solve_mtu2};
use crate::dp::{solve_gfdp, solve_naive, solve_oso, solve_tso, SolveError};
use crate::instance::Instance;
use crate::solution::{SolverOutcome, Stats, Termination};

/// Algorithm names `solve_with` accepts, in presentation order.
pub const ALGORITHMS: [&str; 6] = ["naive", "oso", "tso", "gfdp", "mtu1", "mtu2"];

/// Dispatches to a solver by its public name.
pub fn solve_with(
    algorithm: &str,
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    match algorithm {
        "naive" => solve_naive(instance, timeout),
        "oso" => solve_oso(instance, timeout),
        "tso" => solve_tso(instance, timeout),
        "gfdp" => solve_gfdp(instance, timeout),
        "mtu1" => solve_mtu1(instance, timeout),
        "mtu2" => solve_mtu2(instance, timeout),
        other => Err(SolveError::Internal(format!("unknown algorithm {other:?}"))),
    }
}

#[derive(Debug, Clone)]
pub struct BenchInstance {
    /// Stable identifier, typically the file stem.
    pub id: String,
    /// Grouping key for summaries, typically the parent directory name.
    pub dataset: String,
    pub instance: Instance,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algorithms: Vec<String>,
    pub reps: u32,
    pub timeout: Option<Duration>,
    /// `Some(k)` runs on `k` workers; `None` runs serially.
    pub parallel: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub dataset: String,
    pub algorithm: String,
    pub rep: u32,
    pub elapsed_s: f64,
    /// `"optimal"`, `"timeout"`, or `"error"`.
    pub terminated_by: String,
    /// Absent for error rows; the incumbent at the deadline for timeouts.
    pub optimal_value: Option<i64>,
    pub stats: Stats,
}

/// Runs every (instance, algorithm, rep) combination and returns one row
/// each, ordered by instance, then algorithm, then rep. A timed-out run
/// reports the configured timeout as its elapsed time; a run that fails or
/// panics becomes an `"error"` row rather than poisoning the matrix.
pub fn run_matrix(instances: &[BenchInstance], config: &BenchConfig) -> Vec<BenchRow> {
    let mut tasks = Vec::new();
    for bench in instances {
        for algorithm in &config.algorithms {
            for rep in 0..config.reps {
                tasks.push((bench, algorithm.as_str(), rep));
            }
        }
    }
    match config.parallel {
        Some(workers) => run_parallel(&tasks, config, workers),
        None => tasks.iter().map(|t| run_one(t, config)).collect(),
    }
}

#[cfg(feature = "parallel")]
fn run_parallel(
    tasks: &[(&BenchInstance, &str, u32)],
    config: &BenchConfig,
    workers: usize,
) -> Vec<BenchRow> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("building a thread pool");
    pool.install(|| tasks.par_iter().map(|t| run_one(t, config)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_parallel(
    tasks: &[(&BenchInstance, &str, u32)],
    config: &BenchConfig,
    _workers: usize,
) -> Vec<BenchRow> {
    eprintln!("warning: built without the parallel feature; running serially");
    tasks.iter().map(|t| run_one(t, config)).collect()
}

fn run_one(task: &(&BenchInstance, &str, u32), config: &BenchConfig) -> BenchRow {
    let (bench, algorithm, rep) = *task;
    let started = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| {
        solve_with(algorithm, &bench.instance, config.timeout)
    }));
    let mut row = BenchRow {
        instance_id: bench.id.clone(),
        dataset: bench.dataset.clone(),
        algorithm: algorithm.to_string(),
        rep,
        elapsed_s: started.elapsed().as_secs_f64(),
        terminated_by: "error".to_string(),
        optimal_value: None,
        stats: Stats::new(),
    };
    if let Ok(Ok(outcome)) = result {
        row.terminated_by = outcome.terminated_by.as_str().to_string();
        row.optimal_value = Some(outcome.optimal_value);
        row.stats = outcome.stats;
        row.elapsed_s = match outcome.terminated_by {
            // Pin timed-out rows to the budget so averages are comparable.
            Termination::Timeout => {
                config.timeout.unwrap_or(outcome.elapsed).as_secs_f64()
            }
            Termination::Optimal => outcome.elapsed.as_secs_f64(),
        };
    }
    row
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub dataset: String,
    pub algorithm: String,
    pub runs: usize,
    pub finished: usize,
    /// Mean, standard deviation, and maximum of the finished runs' times;
    /// absent when nothing finished.
    pub avg_s: Option<f64>,
    pub sd_s: Option<f64>,
    pub max_s: Option<f64>,
}

/// Reduces rows to one summary per (dataset, algorithm), ordered by dataset
/// then algorithm. Times aggregate finished runs only; timeouts and errors
/// count toward `runs` but not the statistics.
pub fn summarize(rows: &[BenchRow]) -> Vec<Summary> {
    let mut groups: BTreeMap<(String, String), Vec<&BenchRow>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.dataset.clone(), row.algorithm.clone()))
            .or_default()
            .push(row);
    }
    groups
        .into_iter()
        .map(|((dataset, algorithm), rows)| {
            let times: Vec<f64> = rows
                .iter()
                .filter(|r| r.terminated_by == "optimal")
                .map(|r| r.elapsed_s)
                .collect();
            let (avg, sd, max) = if times.is_empty() {
                (None, None, None)
            } else {
                let mean = times.iter().sum::<f64>() / times.len() as f64;
                let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>()
                    / times.len() as f64;
                let max = times.iter().cloned().fold(f64::MIN, f64::max);
                (Some(mean), Some(var.sqrt()), Some(max))
            };
            Summary {
                dataset,
                algorithm,
                runs: rows.len(),
                finished: times.len(),
                avg_s: avg,
                sd_s: sd,
                max_s: max,
            }
        })
        .collect()
}

/// The union of stat keys across rows, which fixes the CSV column set.
fn stat_columns(rows: &[BenchRow]) -> Vec<String> {
    let keys: BTreeSet<&str> =
        rows.iter().flat_map(|r| r.stats.keys().map(String::as_str)).collect();
    keys.into_iter().map(str::to_string).collect()
}

/// Writes rows as CSV: the fixed columns
/// `instance_id,algorithm,rep,elapsed_s,terminated_by,optimal_value`,
/// then one column per stat key seen anywhere in the matrix. Rows without
/// a given stat leave that cell empty.
pub fn write_csv<W: Write>(rows: &[BenchRow], writer: W) -> csv::Result<()> {
    let stat_columns = stat_columns(rows);
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![
        "instance_id".to_string(),
        "algorithm".to_string(),
        "rep".to_string(),
        "elapsed_s".to_string(),
        "terminated_by".to_string(),
        "optimal_value".to_string(),
    ];
    header.extend(stat_columns.iter().cloned());
    csv.write_record(&header)?;
    for row in rows {
        let mut record = vec![
            row.instance_id.clone(),
            row.algorithm.clone(),
            row.rep.to_string(),
            format!("{:.9}", row.elapsed_s),
            row.terminated_by.clone(),
            row.optimal_value.map(|v| v.to_string()).unwrap_or_default(),
        ];
        for key in &stat_columns {
            record.push(row.stats.get(key).map(|v| v.to_string()).unwrap_or_default());
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// Checks that every run that finished an instance found the same value.
/// Returns one message per disagreeing instance; empty means agreement.
pub fn check_agreement(rows: &[BenchRow]) -> Vec<String> {
    let mut seen: BTreeMap<&str, (i64, &str)> = BTreeMap::new();
    let mut messages = Vec::new();
    let mut flagged: BTreeSet<&str> = BTreeSet::new();
    for row in rows {
        if row.terminated_by != "optimal" {
            continue;
        }
        let value = row.optimal_value.expect("finished rows carry a value");
        match seen.get(row.instance_id.as_str()) {
            None => {
                seen.insert(&row.instance_id, (value, &row.algorithm));
            }
            Some(&(reference, reference_alg)) => {
                if reference != value && flagged.insert(&row.instance_id) {
                    messages.push(format!(
                        "instance {}: {} found {}, {} found {}",
                        row.instance_id, reference_alg, reference, row.algorithm, value
                    ));
                }
            }
        }
    }
    messages
}
