//! Item dominance and capacity periodicity.
//!
//! An item (or combination of items) dominates another when it fills no more
//! capacity yet earns at least as much profit; the dominated item can then be
//! deleted without changing any optimum. Three nested tests are offered:
//! one-against-one ([`DominanceLevel::Simple`]), many-copies-of-one-against-
//! one ([`DominanceLevel::Multiple`]), and any-combination-against-one
//! ([`DominanceLevel::Collective`]). Everything a weaker level removes, the
//! stronger levels remove too.
//!
//! [`periodicity_bound`] is the complementary capacity-side reduction: above
//! a computable threshold, optimal solutions are obtained by padding with
//! copies of the best item, so the capacity itself can be shrunk.

use serde::Serialize;

use crate::instance::{Instance, Item};
use crate::solution::{evaluate, Solution};

/// True when a solution of weight `w_a` and profit `p_a` makes an item of
/// weight `w_b` and profit `p_b` redundant.
fn covers(w_a: u64, p_a: i64, w_b: u64, p_b: i64) -> bool {
    w_a <= w_b && p_a >= p_b
}

/// One copy of `a` covers `b`.
pub fn dominates_simple(a: &Item, b: &Item) -> bool {
    covers(a.weight, a.profit, b.weight, b.profit)
}

/// As many copies of `a` as fit in `b.weight` cover `b`.
pub fn dominates_multiple(a: &Item, b: &Item) -> bool {
    let copies = b.weight / a.weight;
    copies as i64 * a.profit >= b.profit
}

/// `a` weighs no more than `b`, earns no less, and differs from it.
pub fn dominates_solution(a: &Solution, b: &Solution, instance: &Instance) -> bool {
    if a == b {
        return false;
    }
    let ea = evaluate(a, instance);
    let eb = evaluate(b, instance);
    covers(ea.total_weight, ea.total_profit, eb.total_weight, eb.total_profit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominanceLevel {
    Simple,
    Multiple,
    Collective,
}

/// Which items a dominance census keeps, by original index, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub level: DominanceLevel,
    pub survivors: Vec<u32>,
    pub removed: Vec<u32>,
}

/// Sweeps items lightest first (profit breaking ties, so duplicates fall to
/// their first copy) and accepts each item unless the already-accepted ones
/// cover it at the requested level.
pub fn remove_dominated(instance: &Instance, level: DominanceLevel) -> DominanceReport {
    let items = instance.items();
    let mut order: Vec<u32> = (0..items.len() as u32).collect();
    order.sort_by(|&a, &b| {
        let (ia, ib) = (&items[a as usize], &items[b as usize]);
        ia.weight
            .cmp(&ib.weight)
            .then(ib.profit.cmp(&ia.profit))
            .then(a.cmp(&b))
    });

    let w_max = items.iter().map(|it| it.weight).max().unwrap_or(0) as usize;
    // For the collective level: best profit of any accepted combination of
    // weight at most y. Monotone in y, updated once per accepted item.
    let mut combo = match level {
        DominanceLevel::Collective => vec![0i64; w_max + 1],
        _ => Vec::new(),
    };
    let mut accepted: Vec<u32> = Vec::new();
    let mut best_accepted_profit = i64::MIN;
    let mut removed: Vec<u32> = Vec::new();

    for &candidate in &order {
        let item = &items[candidate as usize];
        let dominated = match level {
            DominanceLevel::Simple => {
                // Accepted items all weigh no more than the candidate.
                best_accepted_profit >= item.profit
            }
            DominanceLevel::Multiple => accepted
                .iter()
                .any(|&i| dominates_multiple(&items[i as usize], item)),
            DominanceLevel::Collective => combo[item.weight as usize] >= item.profit,
        };
        if dominated {
            removed.push(candidate);
            continue;
        }
        accepted.push(candidate);
        best_accepted_profit = best_accepted_profit.max(item.profit);
        if level == DominanceLevel::Collective {
            let w = item.weight as usize;
            for y in w..=w_max {
                let reachable = combo[y - w] + item.profit;
                if reachable > combo[y] {
                    combo[y] = reachable;
                }
            }
        }
    }

    accepted.sort_unstable();
    removed.sort_unstable();
    DominanceReport { level, survivors: accepted, removed }
}

/// The capacity-side reduction around the best item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicityBound {
    pub best_item: usize,
    /// Capacity above which every optimal solution can be assumed to contain
    /// a copy of the best item. Saturates instead of overflowing.
    pub y_dprime: u64,
    /// `capacity - fill_copies * w_best`: solving at this capacity and
    /// adding the fill copies solves the original.
    pub reduced_capacity: u64,
    pub fill_copies: u64,
}

/// For each other item, a solution using `lcm(w_best, w_j) / w_j` copies of
/// it can swap them for copies of the best item without losing profit; past
/// the summed threshold some such swap is always available, so the capacity
/// can be stepped down by whole copies of the best item.
pub fn periodicity_bound(instance: &Instance) -> PeriodicityBound {
    let best_item = instance.best_item();
    let best = instance.items()[best_item];
    let capacity = instance.capacity();
    let mut y_dprime: u64 = 0;
    for (index, item) in instance.items().iter().enumerate() {
        if index == best_item {
            continue;
        }
        let lcm = (best.weight as u128 / gcd(best.weight, item.weight) as u128)
            * item.weight as u128;
        y_dprime = y_dprime.saturating_add(lcm.try_into().unwrap_or(u64::MAX));
    }
    let threshold = y_dprime.min(capacity);
    let fill_copies = if best.weight > capacity {
        0
    } else {
        ((capacity - threshold).div_ceil(best.weight)).min(capacity / best.weight)
    };
    PeriodicityBound {
        best_item,
        y_dprime,
        reduced_capacity: capacity - fill_copies * best.weight,
        fill_copies,
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::solve_naive;
    use crate::rng::SplitMix64;

    fn inst(capacity: u64, raw: &[(u64, i64)]) -> Instance {
        let items = raw.iter().map(|&(w, p)| Item::new(w, p)).collect();
        Instance::new(capacity, items).unwrap()
    }

    /// Seven items graded so that each census level removes strictly more:
    /// (6,1) falls to a single lighter item, (12,9) and (16,13) to repeated
    /// copies of one item, (14,11) only to a mixed combination, and
    /// (17,19) to nothing.
    fn graded_seven() -> Instance {
        inst(
            1000,
            &[(3, 2), (5, 5), (6, 1), (12, 9), (14, 11), (16, 13), (17, 19)],
        )
    }

    #[test]
    fn census_levels_remove_exactly_the_graded_items() {
        let instance = graded_seven();
        let simple = remove_dominated(&instance, DominanceLevel::Simple);
        assert_eq!(simple.removed, vec![2]);
        assert_eq!(simple.survivors, vec![0, 1, 3, 4, 5, 6]);

        let multiple = remove_dominated(&instance, DominanceLevel::Multiple);
        assert_eq!(multiple.removed, vec![2, 3, 5]);

        let collective = remove_dominated(&instance, DominanceLevel::Collective);
        assert_eq!(collective.removed, vec![2, 3, 4, 5]);
        assert_eq!(collective.survivors, vec![0, 1, 6]);
    }

    #[test]
    fn pairwise_predicates() {
        let a = Item::new(3, 2);
        let b = Item::new(6, 1);
        let c = Item::new(12, 9);
        assert!(dominates_simple(&a, &b));
        assert!(!dominates_simple(&a, &c));
        assert!(dominates_multiple(&a, &b));
        // Four copies of (3,2) weigh 12 but earn 8 < 9.
        assert!(!dominates_multiple(&a, &c));
        assert!(dominates_multiple(&Item::new(5, 5), &c));
        // A heavier item never multiply-dominates a lighter one.
        assert!(!dominates_multiple(&c, &a));
    }

    #[test]
    fn solution_dominance_requires_difference() {
        let instance = inst(20, &[(3, 5), (4, 5)]);
        let mut light = Solution::empty();
        light.add(0, 1);
        let mut heavy = Solution::empty();
        heavy.add(1, 1);
        assert!(dominates_solution(&light, &heavy, &instance));
        assert!(!dominates_solution(&heavy, &light, &instance));
        assert!(!dominates_solution(&light, &light, &instance));
    }

    #[test]
    fn duplicate_items_fall_to_their_first_copy() {
        let instance = inst(50, &[(4, 7), (4, 7), (4, 7)]);
        for level in [
            DominanceLevel::Simple,
            DominanceLevel::Multiple,
            DominanceLevel::Collective,
        ] {
            let report = remove_dominated(&instance, level);
            assert_eq!(report.survivors, vec![0], "{level:?}");
            assert_eq!(report.removed, vec![1, 2], "{level:?}");
        }
    }

    #[test]
    fn censuses_nest_and_preserve_the_optimum() {
        let mut rng = SplitMix64::for_stream(88, "dominance-nest");
        for round in 0..40 {
            let n = rng.uniform(2, 12) as usize;
            let capacity = rng.uniform(10, 300);
            let raw: Vec<(u64, i64)> = (0..n)
                .map(|_| (rng.uniform(1, 40), rng.uniform(1, 40) as i64))
                .collect();
            let instance = inst(capacity, &raw);
            let full_opt = solve_naive(&instance, None).unwrap().optimal_value;

            let simple = remove_dominated(&instance, DominanceLevel::Simple);
            let multiple = remove_dominated(&instance, DominanceLevel::Multiple);
            let collective = remove_dominated(&instance, DominanceLevel::Collective);
            for (weaker, stronger) in
                [(&simple, &multiple), (&multiple, &collective)]
            {
                for index in &weaker.removed {
                    assert!(
                        stronger.removed.contains(index),
                        "round {round}: {:?} removed {index} but {:?} kept it",
                        weaker.level,
                        stronger.level
                    );
                }
            }
            for report in [&simple, &multiple, &collective] {
                assert_eq!(report.survivors.len() + report.removed.len(), n);
                assert!(!report.survivors.is_empty());
                let kept: Vec<Item> = report
                    .survivors
                    .iter()
                    .map(|&i| instance.items()[i as usize])
                    .collect();
                let reduced = Instance::new(capacity, kept).unwrap();
                let reduced_opt = solve_naive(&reduced, None).unwrap().optimal_value;
                assert_eq!(
                    reduced_opt, full_opt,
                    "round {round}: {:?} census changed the optimum ({raw:?}, c={capacity})",
                    report.level
                );
            }
        }
    }

    #[test]
    fn periodicity_examples() {
        let bound = periodicity_bound(&inst(100, &[(5, 5), (3, 2)]));
        assert_eq!(bound.best_item, 0);
        assert_eq!(bound.y_dprime, 15);
        assert_eq!(bound.reduced_capacity, 15);
        assert_eq!(bound.fill_copies, 17);

        let bound = periodicity_bound(&inst(20, &[(5, 5), (2, 1)]));
        assert_eq!(bound.y_dprime, 10);
        assert_eq!(bound.reduced_capacity, 10);
        assert_eq!(bound.fill_copies, 2);

        // A single item: the threshold sum is empty, yet at least one copy
        // must stay inside the reduced capacity for the identity to hold.
        let bound = periodicity_bound(&inst(7, &[(5, 5)]));
        assert_eq!(bound.y_dprime, 0);
        assert_eq!(bound.fill_copies, 1);
        assert_eq!(bound.reduced_capacity, 2);

        // Best item heavier than the capacity: nothing to fill.
        let bound = periodicity_bound(&inst(4, &[(9, 100), (2, 1)]));
        assert_eq!(bound.fill_copies, 0);
        assert_eq!(bound.reduced_capacity, 4);
    }

    #[test]
    fn capacity_reduction_preserves_the_optimum() {
        let mut rng = SplitMix64::for_stream(89, "periodicity-identity");
        let mut reduced_cases = 0;
        for _ in 0..60 {
            let n = rng.uniform(1, 5) as usize;
            let capacity = rng.uniform(50, 2000);
            let raw: Vec<(u64, i64)> = (0..n)
                .map(|_| (rng.uniform(2, 30), rng.uniform(1, 25) as i64))
                .collect();
            let instance = inst(capacity, &raw);
            let bound = periodicity_bound(&instance);
            let best = instance.items()[bound.best_item];
            assert_eq!(
                bound.reduced_capacity + bound.fill_copies * best.weight,
                capacity
            );
            let full = solve_naive(&instance, None).unwrap().optimal_value;
            let shrunk = Instance::new(bound.reduced_capacity.max(1), instance.items().to_vec());
            let reduced_opt = match shrunk {
                Ok(ref reduced) if bound.reduced_capacity >= 1 => {
                    solve_naive(reduced, None).unwrap().optimal_value
                }
                _ => 0,
            };
            assert_eq!(
                reduced_opt + bound.fill_copies as i64 * best.profit,
                full,
                "identity failed: c={capacity} items={raw:?} bound={bound:?}"
            );
            if bound.fill_copies > 0 {
                reduced_cases += 1;
            }
        }
        assert!(reduced_cases >= 30, "only {reduced_cases} cases actually reduced");
    }
}
