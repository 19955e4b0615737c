//! Column generation for the cutting stock / bin packing LP relaxation.
//!
//! The master problem picks fractional amounts of cutting patterns to cover
//! every size's demand with as few rolls as possible. Pricing asks a solver
//! from this crate for the pattern whose sizes, profiting each at its dual
//! price, pack the most value into one roll; any pattern worth more than one
//! roll improves the master. The loop stops when pricing cannot improve, when
//! it reproduces a pattern the master already has (a tolerance artifact), or
//! at a hard iteration cap.
//!
//! Duals are fractional, so pricing either scales them to integers
//! (`profit = floor(dual * 2^40)`, the default, usable with every solver) or
//! runs a float-profit variant of the step-off scan (available for the scan
//! only; the branch-and-bound bounds are not written for floats).
//!
//! # Input format
//!
//! ```text
//! # number of sizes, then the roll capacity, then one line per size
//! 3
//! 100
//! 45 8
//! 36 12
//! 31        # demand defaults to 1
//! ```

use std::time::Instant;

use serde::Serialize;

use crate::bb::solve_mtu1;
use crate::dp::{solve_oso, solve_oso_in_given_order, SolveError};
use crate::instance::{Instance, Item};
use crate::simplex::{solve_covering_lp, LpError};
use crate::solution::Solution;

/// Fixed-point factor for scaled duals.
const SCALE_SHIFT: u32 = 40;
/// An improving pattern must beat one roll by this relative margin.
const IMPROVE_MARGIN: f64 = 1.0 / (1u64 << 30) as f64;
/// Pricing iterations per size before giving up.
const ITERATIONS_PER_SIZE: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuttingStock {
    pub capacity: u64,
    pub sizes: Vec<u64>,
    pub demands: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BppError {
    Parse { line: usize, message: String },
    Oversized { index: usize, size: u64, capacity: u64 },
}

impl std::fmt::Display for BppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BppError::Parse { line, message } => write!(f, "line {line}: {message}"),
            BppError::Oversized { index, size, capacity } => write!(
                f,
                "size {index} is {size}, wider than the roll capacity {capacity}"
            ),
        }
    }
}

impl std::error::Error for BppError {}

/// Parses the demand file format shown in the module docs.
pub fn parse_bpp(text: &str) -> Result<CuttingStock, BppError> {
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .collect();
    let mut cursor = 0usize;
    let mut next = |expected: &str| -> Result<(usize, &str), BppError> {
        let row = rows.get(cursor).copied().ok_or_else(|| BppError::Parse {
            line: rows.last().map_or(1, |&(l, _)| l + 1),
            message: format!("expected {expected}, found end of file"),
        })?;
        cursor += 1;
        Ok(row)
    };
    let parse_int = |line: usize, text: &str, what: &str| -> Result<u64, BppError> {
        text.parse().map_err(|_| BppError::Parse {
            line,
            message: format!("expected {what}, found {text:?}"),
        })
    };

    let (line, text) = next("the number of sizes")?;
    let n = parse_int(line, text, "the number of sizes")? as usize;
    if n == 0 {
        return Err(BppError::Parse { line, message: "need at least one size".to_string() });
    }
    let (line, text) = next("the roll capacity")?;
    let capacity = parse_int(line, text, "the roll capacity")?;
    if capacity == 0 {
        return Err(BppError::Parse { line, message: "capacity must be positive".to_string() });
    }

    let mut sizes = Vec::with_capacity(n);
    let mut demands = Vec::with_capacity(n);
    for index in 0..n {
        let (line, text) = next("a size line")?;
        let mut fields = text.split_whitespace();
        let size = parse_int(line, fields.next().unwrap(), "a size")?;
        let demand = match fields.next() {
            Some(field) => parse_int(line, field, "a demand")?,
            None => 1,
        };
        if let Some(stray) = fields.next() {
            return Err(BppError::Parse {
                line,
                message: format!("unexpected trailing field {stray:?}"),
            });
        }
        if size == 0 {
            return Err(BppError::Parse { line, message: "sizes must be positive".to_string() });
        }
        if demand == 0 {
            return Err(BppError::Parse { line, message: "demands must be positive".to_string() });
        }
        if size > capacity {
            return Err(BppError::Oversized { index, size, capacity });
        }
        sizes.push(size);
        demands.push(demand);
    }
    drop(next);
    if let Some(&(line, _)) = rows.get(cursor) {
        return Err(BppError::Parse {
            line,
            message: "unexpected content after the size lines".to_string(),
        });
    }
    Ok(CuttingStock { capacity, sizes, demands })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pricer {
    Oso,
    Mtu1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SortRule {
    /// Pricing instances are handed over unordered; the solver sorts by
    /// efficiency as usual.
    Efficiency,
    /// Pricing instances are presented sorted by size, and the scan runs
    /// over them in exactly that order, skipping the per-call sort.
    Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfitMode {
    /// Duals scaled to integers by `2^40`.
    Scaled,
    /// Duals used as floating-point profits directly.
    Native,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColGenConfig {
    pub pricer: Pricer,
    pub sort: SortRule,
    pub profit: ProfitMode,
}

impl Default for ColGenConfig {
    fn default() -> Self {
        ColGenConfig { pricer: Pricer::Oso, sort: SortRule::Efficiency, profit: ProfitMode::Scaled }
    }
}

#[derive(Debug)]
pub enum ColGenError {
    /// The requested combination does not exist (the branch-and-bound
    /// pricer has no float-profit form).
    Unsupported(String),
    Master(LpError),
    Pricing(String),
}

impl std::fmt::Display for ColGenError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColGenError::Unsupported(message) => write!(f, "unsupported configuration: {message}"),
            ColGenError::Master(e) => write!(f, "master LP failed: {e}"),
            ColGenError::Pricing(message) => write!(f, "pricing failed: {message}"),
        }
    }
}

impl std::error::Error for ColGenError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// No pattern beats one roll: the LP relaxation is optimal.
    Converged,
    /// Pricing proposed a pattern the master already has.
    DuplicatePattern,
    IterationCap,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub iteration: u64,
    pub lp_value: f64,
    pub master_s: f64,
    pub pricing_s: f64,
    /// Whether this iteration's pricing produced an improving pattern.
    pub improving: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ColGenOutcome {
    pub lp_value: f64,
    pub iterations: u64,
    pub stopped_by: StopReason,
    /// Every pattern the master ended with, as copy counts per size.
    pub patterns: Vec<Vec<u64>>,
    /// Fractional amount of each pattern in the final LP solution.
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
    pub trace: Vec<TraceRow>,
}

/// One roll filled with as many copies of each size as fit, one pattern per
/// size. Always a feasible cover.
pub fn initial_patterns(problem: &CuttingStock) -> Vec<Vec<u64>> {
    let m = problem.sizes.len();
    (0..m)
        .map(|i| {
            let mut pattern = vec![0u64; m];
            pattern[i] = problem.capacity / problem.sizes[i];
            pattern
        })
        .collect()
}

/// The best pattern for the given duals, its value in rolls, or `None` when
/// no size has a positive dual. The pattern is a count per size.
fn price(
    problem: &CuttingStock,
    duals: &[f64],
    config: &ColGenConfig,
) -> Result<Option<(f64, Vec<u64>)>, ColGenError> {
    let mut kept: Vec<(usize, u64, f64)> = Vec::new();
    for (index, (&size, &dual)) in problem.sizes.iter().zip(duals).enumerate() {
        if dual > 0.0 {
            kept.push((index, size, dual));
        }
    }
    if kept.is_empty() {
        return Ok(None);
    }
    if config.sort == SortRule::Weight {
        kept.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    }

    let m = problem.sizes.len();
    match config.profit {
        ProfitMode::Scaled => {
            let scale = (1u64 << SCALE_SHIFT) as f64;
            let items: Vec<(usize, u64, i64)> = kept
                .iter()
                .map(|&(index, size, dual)| (index, size, (dual * scale) as i64))
                .filter(|&(_, _, profit)| profit > 0)
                .collect();
            if items.is_empty() {
                return Ok(None);
            }
            let instance = Instance::new(
                problem.capacity,
                items.iter().map(|&(_, w, p)| Item::new(w, p)).collect(),
            )
            .map_err(|e| ColGenError::Pricing(format!("scaled duals: {e}")))?;
            let outcome = match (config.pricer, config.sort) {
                (Pricer::Oso, SortRule::Efficiency) => solve_oso(&instance, None),
                (Pricer::Oso, SortRule::Weight) => solve_oso_in_given_order(&instance, None),
                (Pricer::Mtu1, _) => solve_mtu1(&instance, None),
            }
            .map_err(|e: SolveError| ColGenError::Pricing(e.to_string()))?;
            let mut pattern = vec![0u64; m];
            for (pos, count) in outcome.solution.counts() {
                pattern[items[pos].0] += count;
            }
            Ok(Some((outcome.optimal_value as f64 / scale, pattern)))
        }
        ProfitMode::Native => {
            if config.pricer == Pricer::Mtu1 {
                return Err(ColGenError::Unsupported(
                    "the branch-and-bound pricer requires scaled profits".to_string(),
                ));
            }
            if config.sort == SortRule::Efficiency {
                kept.sort_by(|a, b| {
                    (b.2 / b.1 as f64)
                        .partial_cmp(&(a.2 / a.1 as f64))
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(a.1.cmp(&b.1))
                        .then(a.0.cmp(&b.0))
                });
            }
            let (value, solution) = float_step_off(&kept, problem.capacity);
            let mut pattern = vec![0u64; m];
            for (pos, count) in solution.counts() {
                pattern[kept[pos].0] += count;
            }
            Ok(Some((value, pattern)))
        }
    }
}

/// The step-off scan with float profits, over items in the order given.
/// No profit-tie handling: float equality is not meaningful here.
fn float_step_off(items: &[(usize, u64, f64)], capacity: u64) -> (f64, Solution) {
    let c = capacity as usize;
    let mut g = vec![0f64; c + 1];
    let mut d = vec![0u32; c + 1];
    for pos in (0..items.len()).rev() {
        let w = items[pos].1 as usize;
        if w <= c && items[pos].2 >= g[w] {
            g[w] = items[pos].2;
            d[w] = pos as u32;
        }
    }
    let w_min = items.iter().map(|&(_, w, _)| w as usize).filter(|&w| w <= c).min();
    let mut opt = 0f64;
    let mut y_opt = 0usize;
    if let Some(w_min) = w_min {
        for y in w_min..=c {
            if g[y] <= opt {
                continue;
            }
            opt = g[y];
            y_opt = y;
            for pos in 0..=d[y] as usize {
                let ny = y + items[pos].1 as usize;
                if ny > c {
                    continue;
                }
                let np = g[y] + items[pos].2;
                if np > g[ny] {
                    g[ny] = np;
                    d[ny] = pos as u32;
                }
            }
        }
    }
    let mut solution = Solution::empty();
    let mut y = y_opt;
    while y > 0 && g[y] > 0.0 {
        let pos = d[y] as usize;
        solution.add(pos, 1);
        y -= items[pos].1 as usize;
    }
    (opt, solution)
}

/// Runs the full pricing loop. See the module docs for the scheme.
pub fn column_generation(
    problem: &CuttingStock,
    config: &ColGenConfig,
) -> Result<ColGenOutcome, ColGenError> {
    if config.profit == ProfitMode::Native && config.pricer == Pricer::Mtu1 {
        return Err(ColGenError::Unsupported(
            "the branch-and-bound pricer requires scaled profits".to_string(),
        ));
    }
    let m = problem.sizes.len();
    let mut patterns = initial_patterns(problem);
    let demands: Vec<f64> = problem.demands.iter().map(|&d| d as f64).collect();
    let mut trace: Vec<TraceRow> = Vec::new();
    let cap = ITERATIONS_PER_SIZE * m as u64;

    let mut iteration = 0u64;
    loop {
        iteration += 1;
        let master_started = Instant::now();
        let cost = vec![1.0; patterns.len()];
        let constraints: Vec<Vec<f64>> = (0..m)
            .map(|i| patterns.iter().map(|p| p[i] as f64).collect())
            .collect();
        let master = solve_covering_lp(&cost, &constraints, &demands)
            .map_err(ColGenError::Master)?;
        let master_s = master_started.elapsed().as_secs_f64();

        let pricing_started = Instant::now();
        let priced = price(problem, &master.duals, config)?;
        let pricing_s = pricing_started.elapsed().as_secs_f64();

        let improving = match &priced {
            Some((value, _)) => *value > 1.0 + IMPROVE_MARGIN,
            None => false,
        };
        trace.push(TraceRow {
            iteration,
            lp_value: master.objective,
            master_s,
            pricing_s,
            improving,
        });

        let stopped_by = if !improving {
            Some(StopReason::Converged)
        } else {
            let (_, pattern) = priced.unwrap();
            if patterns.contains(&pattern) {
                Some(StopReason::DuplicatePattern)
            } else if iteration >= cap {
                Some(StopReason::IterationCap)
            } else {
                patterns.push(pattern);
                None
            }
        };
        if let Some(stopped_by) = stopped_by {
            return Ok(ColGenOutcome {
                lp_value: master.objective,
                iterations: iteration,
                stopped_by,
                patterns,
                primal: master.primal,
                duals: master.duals,
                trace,
            });
        }
    }
}
