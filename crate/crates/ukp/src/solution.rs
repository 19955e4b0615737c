//! Solutions (copy counts per item) and the common solver result type.

use std::collections::BTreeMap;
use std::time::Duration;

use crate::instance::Instance;

/// A solution is a multiset of items, stored as copy counts keyed by the
/// item's index in its instance. Only non-zero counts are kept.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Solution {
    counts: BTreeMap<usize, u64>,
}

impl Solution {
    pub fn empty() -> Solution {
        Solution::default()
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (usize, u64)>) -> Solution {
        let mut solution = Solution::empty();
        for (index, count) in counts {
            solution.add(index, count);
        }
        solution
    }

    /// Adds `count` copies of item `index`.
    pub fn add(&mut self, index: usize, count: u64) {
        if count > 0 {
            *self.counts.entry(index).or_insert(0) += count;
        }
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    /// Non-zero entries as `(item index, copies)`, in index order.
    pub fn counts(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Totals of a solution measured against a concrete instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub total_weight: u64,
    pub total_profit: i64,
    /// Whether the solution fits the instance capacity. Infeasible solutions
    /// are representable on purpose; callers decide what to do with them.
    pub feasible: bool,
}

/// Recomputes weight and profit of `solution` from scratch.
///
/// Panics if the solution references an item index the instance does not
/// have; a solution only makes sense against the instance it was built for.
pub fn evaluate(solution: &Solution, instance: &Instance) -> Evaluation {
    let mut total_weight: u64 = 0;
    let mut total_profit: i64 = 0;
    for (index, count) in solution.counts() {
        let item = instance.items()[index];
        total_weight += item.weight * count;
        total_profit += item.profit * count as i64;
    }
    Evaluation {
        total_weight,
        total_profit,
        feasible: total_weight <= instance.capacity(),
    }
}

/// How a solver run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The reported value is proven optimal.
    Optimal,
    /// The time budget ran out; the reported value is the best found so far.
    Timeout,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Optimal => "optimal",
            Termination::Timeout => "timeout",
        }
    }
}

/// Named work counters a solver reports (scanned capacities, expanded nodes,
/// and so on). Keys are stable per solver and documented where they are set.
pub type Stats = BTreeMap<String, u64>;

/// Result of one solver run on one instance.
#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub optimal_value: i64,
    pub solution: Solution,
    pub elapsed: Duration,
    pub terminated_by: Termination,
    pub stats: Stats,
}
