//! Dynamic programming solvers over capacities 0..=c.
//!
//! All solvers here share one memory layout: a dense profit array `g` and a
//! dense item-position array `d`, indexed by capacity. `g[y]` is the best
//! profit known for a solution of weight exactly `y`, and `d[y]` is the
//! position (in the solver's item order) of the lowest-position item in that
//! solution. A capacity whose profit does not beat the best profit at any
//! smaller capacity is skipped entirely: whatever solutions extend it, a
//! lighter solution extends at least as well. The inner loop only appends
//! items at positions `<= d[y]`, so each solution multiset is generated by
//! exactly one ordering of its items.
//!
//! [`solve_naive`] deliberately ignores all of that and pays Theta(n*c) every
//! time; it exists to be an unarguable baseline for the clever solvers.

use std::time::{Duration, Instant};

use crate::instance::{Instance, Item};
use crate::solution::{Solution, SolverOutcome, Stats, Termination};
use crate::timer::Clock;

/// Largest capacity the dense DP family accepts: the arrays are allocated
/// per unit of capacity.
pub const MAX_DP_CAPACITY: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The dense DP family refuses capacities above [`MAX_DP_CAPACITY`].
    CapacityTooLarge { capacity: u64 },
    /// A solver invariant broke mid-run; always a bug, never an input error.
    Internal(String),
}

impl std::fmt::Display for SolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveError::CapacityTooLarge { capacity } => write!(
                f,
                "capacity {capacity} exceeds the dense DP limit {MAX_DP_CAPACITY}"
            ),
            SolveError::Internal(message) => write!(f, "internal error: {message}"),
        }
    }
}

impl std::error::Error for SolveError {}

/// The raw arrays of a finished step-off scan.
///
/// `order[pos]` maps a scan position back to the item index in the instance;
/// `d` stores positions, not item indices. `g[y] == 0` means no solution of
/// weight exactly `y` was retained.
#[derive(Debug, Clone)]
pub struct StepOffState {
    pub g: Vec<i64>,
    pub d: Vec<u32>,
    pub order: Vec<u32>,
    /// Best profit over all scanned capacities.
    pub opt: i64,
    /// Smallest capacity where `opt` was reached.
    pub y_opt: usize,
}

/// Reads one solution out of a scan state by repeatedly removing the item
/// recorded at `d[y]`. Fails only if the arrays are inconsistent, which is
/// a solver bug, not an input condition.
pub fn backtrack(
    state: &StepOffState,
    instance: &Instance,
    y: usize,
) -> Result<Solution, SolveError> {
    let mut solution = Solution::empty();
    let mut y = y;
    let mut profit_left = state.g[y];
    while y > 0 {
        if state.g[y] == 0 {
            return Err(SolveError::Internal(format!(
                "backtrack reached empty capacity {y}"
            )));
        }
        let pos = state.d[y] as usize;
        let index = *state.order.get(pos).ok_or_else(|| {
            SolveError::Internal(format!("d[{y}] = {pos} is not a valid position"))
        })? as usize;
        let item = instance.items()[index];
        let w = item.weight as usize;
        if w > y {
            return Err(SolveError::Internal(format!(
                "item of weight {w} recorded at capacity {y}"
            )));
        }
        solution.add(index, 1);
        profit_left -= item.profit;
        y -= w;
        if state.g[y] != profit_left {
            return Err(SolveError::Internal(format!(
                "profit mismatch at capacity {y}: expected {profit_left}, found {}",
                state.g[y]
            )));
        }
    }
    Ok(solution)
}

/// Always-Theta(n*c) textbook recurrence: `opt(y) = max(0, max_i p_i +
/// opt(y - w_i))`. The reference the sparse solvers are measured against.
pub fn solve_naive(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let capacity = check_capacity(instance)?;
    let mut clock = Clock::new(timeout);
    let items = instance.items();
    let mut best = vec![0i64; capacity + 1];
    let mut choice: Vec<u32> = vec![u32::MAX; capacity + 1];
    let mut item_checks: u64 = 0;
    let mut scanned = 0usize;
    let mut timed_out = false;
    for y in 1..=capacity {
        for (index, item) in items.iter().enumerate() {
            item_checks += 1;
            let w = item.weight as usize;
            if w <= y {
                let value = best[y - w] + item.profit;
                if value > best[y] {
                    best[y] = value;
                    choice[y] = index as u32;
                }
            }
        }
        if best[y] < best[y - 1] {
            best[y] = best[y - 1];
            choice[y] = u32::MAX; // inherit the lighter solution
        }
        scanned = y;
        if clock.expired() {
            timed_out = true;
            break;
        }
    }

    // Walk the choices back down from the best computed capacity.
    let mut solution = Solution::empty();
    let mut y = scanned;
    while y > 0 {
        match choice[y] {
            u32::MAX => y -= 1,
            index => {
                solution.add(index as usize, 1);
                y -= items[index as usize].weight as usize;
            }
        }
    }
    let mut stats = Stats::new();
    stats.insert("capacities_scanned".to_string(), scanned as u64);
    stats.insert("item_checks".to_string(), item_checks);
    Ok(SolverOutcome {
        optimal_value: best[scanned],
        solution,
        elapsed: clock.elapsed(),
        terminated_by: if timed_out { Termination::Timeout } else { Termination::Optimal },
        stats,
    })
}

/// Which solution keeps the `d` slot when two reach a capacity with equal
/// profit: the one whose lowest item position is lower generates fewer
/// descendants, so preferring it shrinks later inner loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TieRule {
    LowestPosition,
    FirstWriter,
}

#[derive(Debug, Clone, Copy)]
struct ScanConfig {
    tie_rule: TieRule,
    /// Stop early once every recent capacity is reachable best by topping up
    /// with the first-position item (the periodicity window).
    periodic_stop: bool,
}

struct ScanOutput {
    state: StepOffState,
    value: i64,
    /// Capacity to backtrack from, plus copies of the first-position item to
    /// append on top (non-zero only after an early periodic stop).
    foot: usize,
    fill_copies: u64,
    terminated_by: Termination,
    stats: Stats,
}

/// The step-off scan over items in a fixed order. See the module docs for
/// the array invariants.
fn step_off_scan(
    instance: &Instance,
    order: Vec<u32>,
    config: ScanConfig,
    timeout: Option<Duration>,
) -> Result<ScanOutput, SolveError> {
    let capacity = check_capacity(instance)?;
    let mut clock = Clock::new(timeout);
    let items: Vec<Item> = order.iter().map(|&i| instance.items()[i as usize]).collect();

    let mut g = vec![0i64; capacity + 1];
    let mut d = vec![0u32; capacity + 1];
    // Seed single-item solutions, last position first, so that among items of
    // equal weight the lowest position with the highest profit wins the slot.
    for pos in (0..items.len()).rev() {
        let w = items[pos].weight as usize;
        if w <= capacity && items[pos].profit >= g[w] {
            g[w] = items[pos].profit;
            d[w] = pos as u32;
        }
    }
    let w_min = items
        .iter()
        .map(|it| it.weight as usize)
        .filter(|&w| w <= capacity)
        .min();
    let w_max = items
        .iter()
        .map(|it| it.weight as usize)
        .filter(|&w| w <= capacity)
        .max()
        .unwrap_or(0);
    let (w_first, p_first) = if items.is_empty() {
        (0usize, 0i64)
    } else {
        (items[0].weight as usize, items[0].profit)
    };

    let mut opt: i64 = 0;
    let mut y_opt: usize = 0;
    let mut scanned: u64 = 0;
    let mut inner: u64 = 0;
    let mut timed_out = false;
    let mut early = false;
    let mut foot = 0usize;
    let mut fill: u64 = 0;
    let mut value = 0i64;

    // Periodicity window bookkeeping: `t` is the last scanned capacity whose
    // retained solution did not start at position 0. Once a further `w_first`
    // capacities in a row prune or start at position 0, the only solutions
    // the scan can still build are old pending writes (checked explicitly)
    // and top-ups of existing states with first-position copies.
    let mut t: usize = 0;
    let mut next_check: usize = 0;
    let mut check_budget: usize = 4 * w_max;

    if let Some(w_min) = w_min {
        'scan: for y in w_min..=capacity {
            scanned += 1;
            if clock.expired() {
                timed_out = true;
                break 'scan;
            }
            if g[y] > opt {
                opt = g[y];
                y_opt = y;
                let dy = d[y] as usize;
                if dy != 0 {
                    t = y;
                }
                for pos in 0..=dy {
                    inner += 1;
                    let ny = y + items[pos].weight as usize;
                    if ny > capacity {
                        continue;
                    }
                    let np = g[y] + items[pos].profit;
                    if g[ny] < np {
                        g[ny] = np;
                        d[ny] = pos as u32;
                    } else if config.tie_rule == TieRule::LowestPosition
                        && g[ny] == np
                        && (pos as u32) < d[ny]
                    {
                        d[ny] = pos as u32;
                    }
                }
            }
            if config.periodic_stop && y - t >= w_first && y >= next_check {
                let zone_end = capacity.min(t + w_max);
                let mut conforms = true;
                for z in y + 1..=zone_end {
                    if check_budget == 0 {
                        conforms = false;
                        break;
                    }
                    check_budget -= 1;
                    // A pending write is harmless if it cannot survive the
                    // prune or is itself a first-item top-up of an earlier
                    // state; anything else may still seed a fresh solution.
                    if g[z] > opt && g[z] != g[z - w_first] + p_first {
                        conforms = false;
                        break;
                    }
                }
                if conforms {
                    early = true;
                    value = opt;
                    foot = y_opt;
                    for z in t + 1..=y {
                        if g[z] > 0 {
                            let copies = ((capacity - z) / w_first) as u64;
                            let candidate = g[z] + copies as i64 * p_first;
                            if candidate > value {
                                value = candidate;
                                foot = z;
                                fill = copies;
                            }
                        }
                    }
                    break 'scan;
                }
                next_check = y + w_first;
            }
        }
    }
    if !early {
        value = opt;
        foot = y_opt;
    }

    let mut stats = Stats::new();
    stats.insert("capacities_scanned".to_string(), scanned);
    stats.insert("inner_iterations".to_string(), inner);
    if config.periodic_stop {
        stats.insert("early_termination".to_string(), early as u64);
        if early {
            stats.insert("termination_capacity".to_string(), scanned + w_min.unwrap_or(1) as u64 - 1);
        }
    }
    Ok(ScanOutput {
        state: StepOffState { g, d, order, opt, y_opt },
        value,
        foot,
        fill_copies: fill,
        terminated_by: if timed_out { Termination::Timeout } else { Termination::Optimal },
        stats,
    })
}

fn check_capacity(instance: &Instance) -> Result<usize, SolveError> {
    let capacity = instance.capacity();
    if capacity > MAX_DP_CAPACITY {
        return Err(SolveError::CapacityTooLarge { capacity });
    }
    Ok(capacity as usize)
}

fn outcome_from_scan(
    instance: &Instance,
    output: ScanOutput,
    started: Instant,
) -> Result<SolverOutcome, SolveError> {
    let mut solution = backtrack(&output.state, instance, output.foot)?;
    if output.fill_copies > 0 {
        solution.add(output.state.order[0] as usize, output.fill_copies);
    }
    Ok(SolverOutcome {
        optimal_value: output.value,
        solution,
        elapsed: started.elapsed(),
        terminated_by: output.terminated_by,
        stats: output.stats,
    })
}

/// Sparse step-off over items in efficiency order, keeping the
/// lowest-position solution on profit ties.
pub fn solve_oso(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let started = Instant::now();
    let output = step_off_scan(
        instance,
        instance.efficiency_order(),
        ScanConfig { tie_rule: TieRule::LowestPosition, periodic_stop: false },
        timeout,
    )?;
    outcome_from_scan(instance, output, started)
}

/// [`solve_oso`] including its final arrays, for callers that want to inspect
/// retained states or backtrack other capacities.
pub fn solve_oso_with_state(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<(SolverOutcome, StepOffState), SolveError> {
    let started = Instant::now();
    let output = step_off_scan(
        instance,
        instance.efficiency_order(),
        ScanConfig { tie_rule: TieRule::LowestPosition, periodic_stop: false },
        timeout,
    )?;
    let state = output.state.clone();
    let outcome = outcome_from_scan(instance, output, started)?;
    Ok((outcome, state))
}

/// Step-off without the profit-tie rule: on equal profit the first writer
/// keeps the `d` slot. Same optimal value as [`solve_oso`]; exists to measure
/// what the tie rule is worth in inner iterations.
pub fn solve_oso_first_writer(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let started = Instant::now();
    let output = step_off_scan(
        instance,
        instance.efficiency_order(),
        ScanConfig { tie_rule: TieRule::FirstWriter, periodic_stop: false },
        timeout,
    )?;
    outcome_from_scan(instance, output, started)
}

/// Step-off over items exactly in the order given, which the scan does not
/// need to be the efficiency order. Used by pricing loops that keep items
/// sorted by weight across calls instead of re-sorting per call.
pub fn solve_oso_in_given_order(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let started = Instant::now();
    let output = step_off_scan(
        instance,
        (0..instance.len() as u32).collect(),
        ScanConfig { tie_rule: TieRule::LowestPosition, periodic_stop: false },
        timeout,
    )?;
    outcome_from_scan(instance, output, started)
}

/// Step-off with a periodicity stop: once a long enough run of capacities is
/// best served by topping up with the most efficient item, the scan halts and
/// the remaining capacity is filled with copies of that item.
pub fn solve_tso(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let started = Instant::now();
    let output = step_off_scan(
        instance,
        instance.efficiency_order(),
        ScanConfig { tie_rule: TieRule::LowestPosition, periodic_stop: true },
        timeout,
    )?;
    outcome_from_scan(instance, output, started)
}

/// Step-off that never extends solutions with the best item. At every
/// multiple of the best item's weight it compares the best finished state
/// topped up with that item (a lower bound) against the best pending state
/// completed at the item's efficiency (an upper bound), and stops as soon as
/// the lower bound is proven tight.
///
/// When two or more items tie for the greatest efficiency the bound argument
/// does not apply, and this is exactly [`solve_oso`].
pub fn solve_gfdp(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let started = Instant::now();
    let capacity = check_capacity(instance)?;
    let order = instance.efficiency_order();
    let items: Vec<Item> = order.iter().map(|&i| instance.items()[i as usize]).collect();
    if items.len() >= 2 && items[0].cmp_efficiency(&items[1]).is_eq() {
        return solve_oso(instance, timeout);
    }

    let mut clock = Clock::new(timeout);
    let best = items[0];
    let (w_b, p_b) = (best.weight as usize, best.profit);
    let fill_value = |y: usize| -> (u64, i64) {
        if w_b > capacity {
            return (0, 0);
        }
        let copies = ((capacity - y) / w_b) as u64;
        (copies, copies as i64 * p_b)
    };

    let mut g = vec![0i64; capacity + 1];
    let mut d = vec![0u32; capacity + 1];
    for pos in (1..items.len()).rev() {
        let w = items[pos].weight as usize;
        if w <= capacity && items[pos].profit >= g[w] {
            g[w] = items[pos].profit;
            d[w] = pos as u32;
        }
    }
    let rest = &items[1..];
    let w_min = rest
        .iter()
        .map(|it| it.weight as usize)
        .filter(|&w| w <= capacity)
        .min();
    let w_max = rest
        .iter()
        .map(|it| it.weight as usize)
        .filter(|&w| w <= capacity)
        .max()
        .unwrap_or(0);

    let (mut fill, mut lower) = fill_value(0);
    let mut foot = 0usize;
    let mut opt: i64 = 0;
    let mut scanned: u64 = 0;
    let mut inner: u64 = 0;
    let mut checkpoints: u64 = 0;
    let mut early = false;
    let mut timed_out = false;

    if let Some(w_start) = w_min {
        'scan: for y in w_start..=capacity {
            scanned += 1;
            if clock.expired() {
                timed_out = true;
                break 'scan;
            }
            if g[y] > opt {
                opt = g[y];
                let (copies, top_up) = fill_value(y);
                if g[y] + top_up > lower {
                    lower = g[y] + top_up;
                    foot = y;
                    fill = copies;
                }
                for pos in 1..=d[y] as usize {
                    inner += 1;
                    let ny = y + items[pos].weight as usize;
                    if ny > capacity {
                        continue;
                    }
                    let np = g[y] + items[pos].profit;
                    if g[ny] < np {
                        g[ny] = np;
                        d[ny] = pos as u32;
                    } else if g[ny] == np && (pos as u32) < d[ny] {
                        d[ny] = pos as u32;
                    }
                }
            }
            if w_b <= capacity && y % w_b == 0 {
                checkpoints += 1;
                // Ceiling of completing each pending state at the best
                // item's efficiency; an integer optimum cannot beat it.
                let mut upper: Option<i64> = None;
                for z in y + 1..=capacity.min(y + w_max) {
                    if g[z] > 0 {
                        let top = (capacity - z) as i128 * p_b as i128;
                        let bound = g[z] as i128 + (top + w_b as i128 - 1) / w_b as i128;
                        upper = Some(upper.map_or(bound as i64, |u| u.max(bound as i64)));
                    }
                }
                match upper {
                    None => {
                        // Nothing pending: the scan has produced every state
                        // it ever will.
                        early = true;
                        break 'scan;
                    }
                    Some(upper) if lower >= upper => {
                        early = true;
                        break 'scan;
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let state = StepOffState { g, d, order, opt, y_opt: foot };
    let mut solution = backtrack(&state, instance, foot)?;
    if fill > 0 {
        solution.add(state.order[0] as usize, fill);
    }
    let mut stats = Stats::new();
    stats.insert("capacities_scanned".to_string(), scanned);
    stats.insert("inner_iterations".to_string(), inner);
    stats.insert("checkpoints".to_string(), checkpoints);
    stats.insert("early_termination".to_string(), early as u64);
    Ok(SolverOutcome {
        optimal_value: lower,
        solution,
        elapsed: started.elapsed(),
        terminated_by: if timed_out { Termination::Timeout } else { Termination::Optimal },
        stats,
    })
}
