//! Branch and bound over counts in efficiency order.
//!
//! Nodes fix how many copies of each item a solution takes, most efficient
//! item first. Descending always takes as many copies as fit, so the very
//! first leaf is the greedy solution. A node is bounded by completing its
//! remaining capacity fractionally at the efficiency of the best item still
//! undecided; since items are sorted, that is always the item at the current
//! depth. Two structural rules keep the tree narrow: the deepest item is
//! shed all at once (no item below it could use the freed space), and a
//! sibling chain is abandoned wholesale as soon as one sibling's child is
//! bounded out immediately, because that bound only tightens as more copies
//! are removed.
//!
//! [`solve_mtu1`] runs the search over the full sorted item list.
//! [`solve_mtu2`] runs it over a small core of the most efficient items and
//! treats the rest as one fractional completion at the best excluded
//! efficiency; if any completed core assignment could beat the incumbent
//! that way, the core doubles and the search repeats, keeping the incumbent.

use std::cmp::Ordering;
use std::time::Duration;

use crate::dp::SolveError;
use crate::instance::{Instance, Item};
use crate::solution::{Solution, SolverOutcome, Stats, Termination};
use crate::timer::Clock;

/// Starting core size for [`solve_mtu2`].
const INITIAL_CORE: usize = 128;

/// Value and solution of taking items greedily in efficiency order.
pub fn greedy_bound(instance: &Instance) -> (i64, Solution) {
    let mut rem = instance.capacity();
    let mut value = 0i64;
    let mut solution = Solution::empty();
    for &index in &instance.efficiency_order() {
        let item = instance.items()[index as usize];
        let take = rem / item.weight;
        if take > 0 {
            solution.add(index as usize, take);
            value += take as i64 * item.profit;
            rem -= take * item.weight;
        }
    }
    (value, solution)
}

/// Profit of filling the whole capacity fractionally with the best item,
/// rounded down. No integer solution can beat it.
pub fn continuous_bound(instance: &Instance) -> i64 {
    let item = instance.items()[instance.best_item()];
    ((instance.capacity() as i128 * item.profit as i128) / item.weight as i128) as i64
}

struct DfsOutcome {
    best: i64,
    /// Copy counts by item position, present only when `best` beat the
    /// carried incumbent.
    improved: Option<Vec<u64>>,
    /// Largest fractional-tail completion seen over all full assignments;
    /// `i64::MIN` when there was no tail or no full assignment survived.
    max_tail_bound: i64,
    nodes: u64,
    pruned: u64,
    timed_out: bool,
}

fn bounded_dfs(
    items: &[Item],
    capacity: u64,
    tail: Option<(u64, i64)>,
    carried_best: i64,
    clock: &mut Clock,
) -> DfsOutcome {
    let m = items.len();
    let mut x = vec![0u64; m];
    let mut f = 0i64;
    let mut rem = capacity;
    let mut depth = 0usize;
    let mut best = carried_best;
    let mut improved: Option<Vec<u64>> = None;
    let mut max_tail_bound = i64::MIN;
    let mut nodes = 0u64;
    let mut pruned = 0u64;
    let mut timed_out = false;
    // The level whose count was just decremented, if the next descend starts
    // right below it.
    let mut resume_level: Option<usize> = None;

    'search: loop {
        let entry = depth;
        while depth < m {
            if clock.expired() {
                timed_out = true;
                break 'search;
            }
            nodes += 1;
            let item = items[depth];
            let bound =
                f + ((rem as i128 * item.profit as i128) / item.weight as i128) as i64;
            if bound <= best {
                pruned += 1;
                break;
            }
            let take = rem / item.weight;
            x[depth] = take;
            f += take as i64 * item.profit;
            rem -= take * item.weight;
            depth += 1;
        }
        if depth == entry && depth < m {
            // Bounded out before assigning anything. If this followed a
            // decrement, every further copy removed at that level only
            // lowers the same bound, so the whole sibling chain goes.
            if let Some(level) = resume_level {
                f -= x[level] as i64 * items[level].profit;
                rem += x[level] * items[level].weight;
                x[level] = 0;
            }
        }
        if depth == m {
            if let Some((tail_w, tail_p)) = tail {
                let completion =
                    f + ((rem as i128 * tail_p as i128) / tail_w as i128) as i64;
                max_tail_bound = max_tail_bound.max(completion);
            }
        }
        if f > best {
            best = f;
            improved = Some(x.clone());
        }
        let mut scan_from = depth;
        loop {
            if clock.expired() {
                timed_out = true;
                break 'search;
            }
            let Some(level) = (0..scan_from).rev().find(|&j| x[j] > 0) else {
                break 'search;
            };
            let item = items[level];
            if level == m - 1 {
                f -= x[level] as i64 * item.profit;
                rem += x[level] * item.weight;
                x[level] = 0;
                scan_from = level;
            } else {
                x[level] -= 1;
                f -= item.profit;
                rem += item.weight;
                depth = level + 1;
                resume_level = Some(level);
                break;
            }
        }
    }

    DfsOutcome { best, improved, max_tail_bound, nodes, pruned, timed_out }
}

fn counts_to_solution(counts: &[u64], positions: &[u32]) -> Solution {
    let mut solution = Solution::empty();
    for (pos, &count) in counts.iter().enumerate() {
        if count > 0 {
            solution.add(positions[pos] as usize, count);
        }
    }
    solution
}

/// Branch and bound over all items in efficiency order.
pub fn solve_mtu1(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let mut clock = Clock::new(timeout);
    let order = instance.efficiency_order();
    let items: Vec<Item> = order.iter().map(|&i| instance.items()[i as usize]).collect();
    let dfs = bounded_dfs(&items, instance.capacity(), None, 0, &mut clock);
    let solution = dfs
        .improved
        .as_deref()
        .map(|x| counts_to_solution(x, &order))
        .unwrap_or_else(Solution::empty);
    let mut stats = Stats::new();
    stats.insert("nodes_expanded".to_string(), dfs.nodes);
    stats.insert("pruned_by_bound".to_string(), dfs.pruned);
    Ok(SolverOutcome {
        optimal_value: dfs.best,
        solution,
        elapsed: clock.elapsed(),
        terminated_by: if dfs.timed_out { Termination::Timeout } else { Termination::Optimal },
        stats,
    })
}

/// Branch and bound over a core of the most efficient items, doubling the
/// core until the excluded items provably cannot matter.
pub fn solve_mtu2(
    instance: &Instance,
    timeout: Option<Duration>,
) -> Result<SolverOutcome, SolveError> {
    let mut clock = Clock::new(timeout);
    let n = instance.len();
    let all = instance.items();
    let rank = |a: &u32, b: &u32| -> Ordering {
        let ia = &all[*a as usize];
        let ib = &all[*b as usize];
        ib.cmp_efficiency(ia)
            .then(ia.weight.cmp(&ib.weight))
            .then(a.cmp(b))
    };

    let mut core_size = INITIAL_CORE.max(n.div_ceil(100)).min(n);
    let mut best = 0i64;
    let mut best_solution = Solution::empty();
    let mut nodes = 0u64;
    let mut pruned = 0u64;
    let mut rounds = 0u64;
    loop {
        rounds += 1;
        let mut indices: Vec<u32> = (0..n as u32).collect();
        let tail = if core_size < n {
            indices.select_nth_unstable_by(core_size - 1, rank);
            let tail_best = *indices[core_size..].iter().min_by(|a, b| rank(a, b)).unwrap();
            Some((all[tail_best as usize].weight, all[tail_best as usize].profit))
        } else {
            None
        };
        let mut core = indices[..core_size].to_vec();
        core.sort_by(rank);
        let core_items: Vec<Item> = core.iter().map(|&i| all[i as usize]).collect();

        let dfs = bounded_dfs(&core_items, instance.capacity(), tail, best, &mut clock);
        nodes += dfs.nodes;
        pruned += dfs.pruned;
        if let Some(x) = dfs.improved.as_deref() {
            best = dfs.best;
            best_solution = counts_to_solution(x, &core);
        }
        let certified = dfs.max_tail_bound <= best;
        if dfs.timed_out || certified {
            let mut stats = Stats::new();
            stats.insert("nodes_expanded".to_string(), nodes);
            stats.insert("pruned_by_bound".to_string(), pruned);
            stats.insert("rounds".to_string(), rounds);
            stats.insert("core_size".to_string(), core_size as u64);
            return Ok(SolverOutcome {
                optimal_value: best,
                solution: best_solution,
                elapsed: clock.elapsed(),
                terminated_by: if dfs.timed_out {
                    Termination::Timeout
                } else {
                    Termination::Optimal
                },
                stats,
            });
        }
        core_size = (core_size * 2).min(n);
    }
}
