//! Seeded instance generators.
//!
//! Every family draws from its own [`SplitMix64`] stream, keyed by the seed
//! and the family name, with a fixed draw order (weight list, then profit
//! list, then capacity, then shuffle). Two runs with the same spec therefore
//! produce byte-identical instances, on any platform.

use serde::Serialize;

use crate::instance::{Instance, Item};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    BadParameters(String),
}

impl std::fmt::Display for GenError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GenError::BadParameters(message) => write!(f, "bad generator parameters: {message}"),
        }
    }
}

impl std::error::Error for GenError {}

/// A complete, reproducible description of one generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GenSpec {
    /// Distinct weights and distinct profits, paired so that heavier items
    /// are always worth more (no item simply dominates another), then
    /// shuffled. Weights and profits live in `[64n, 1024n]`; the capacity in
    /// `[2048n, 2048n + 64n]`.
    RealisticRandom { n: usize, seed: u64 },
    /// Profits on the lower-right quarter of an ellipse: heavy items are
    /// disproportionately profitable. Capacity `128n`, weights in
    /// `[1, 128n]`, profits up to `16 * 128n`.
    Breq { n: usize, seed: u64 },
    /// Profit equals weight.
    SubsetSum { n: usize, w_min: u64, w_max: u64, c_min: u64, c_max: u64, seed: u64 },
    /// Profit is weight plus a constant; distinct weights drawn from
    /// `[w_min, w_max]`. A span of exactly `n` forces the weights to be the
    /// consecutive run starting at `w_min`, which is how the named hard
    /// variants keep every capacity in a narrow band reachable.
    StrongCorr { n: usize, alpha: i64, w_min: u64, w_max: u64, c_min: u64, c_max: u64, seed: u64 },
}

impl GenSpec {
    /// Named parameter sets used throughout the benchmark reports.
    pub fn preset(name: &str, n: usize, seed: u64) -> Option<GenSpec> {
        match name {
            "pyasukp-ss" => Some(GenSpec::SubsetSum {
                n,
                w_min: 1_000,
                w_max: 500_000,
                c_min: 5_000_000,
                c_max: 10_000_000,
                seed,
            }),
            "hard-sc" => Some(GenSpec::StrongCorr {
                n,
                alpha: -5,
                w_min: 110_000,
                w_max: 110_000 + n as u64 - 1,
                c_min: 9_008_057,
                c_max: 9_008_057,
                seed,
            }),
            "breq-128-16" => Some(GenSpec::Breq { n, seed }),
            _ => None,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            GenSpec::RealisticRandom { .. } => "realistic-random",
            GenSpec::Breq { .. } => "breq",
            GenSpec::SubsetSum { .. } => "subset-sum",
            GenSpec::StrongCorr { .. } => "strong-corr",
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Instance, GenError> {
    match *spec {
        GenSpec::RealisticRandom { n, seed } => realistic_random(n, seed),
        GenSpec::Breq { n, seed } => breq(n, seed),
        GenSpec::SubsetSum { n, w_min, w_max, c_min, c_max, seed } => {
            subset_sum(n, w_min, w_max, c_min, c_max, seed)
        }
        GenSpec::StrongCorr { n, alpha, w_min, w_max, c_min, c_max, seed } => {
            strong_corr(n, alpha, w_min, w_max, c_min, c_max, seed)
        }
    }
}

fn check_distinct_range(n: usize, lo: u64, hi: u64) -> Result<(), GenError> {
    if lo > hi {
        return Err(GenError::BadParameters(format!("empty range [{lo}, {hi}]")));
    }
    if (hi - lo + 1) < n as u64 {
        return Err(GenError::BadParameters(format!(
            "cannot draw {n} distinct values from [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<(), GenError> {
    if n == 0 {
        return Err(GenError::BadParameters("n must be at least 1".to_string()));
    }
    Ok(())
}

fn check_capacity_range(c_min: u64, c_max: u64) -> Result<(), GenError> {
    if c_min == 0 || c_min > c_max {
        return Err(GenError::BadParameters(format!(
            "bad capacity range [{c_min}, {c_max}]"
        )));
    }
    Ok(())
}

fn finish(capacity: u64, items: Vec<Item>) -> Result<Instance, GenError> {
    Instance::new(capacity, items)
        .map_err(|e| GenError::BadParameters(format!("generated an invalid instance: {e}")))
}

pub fn realistic_random(n: usize, seed: u64) -> Result<Instance, GenError> {
    check_n(n)?;
    let hi = n as u64 * 1024;
    let lo = hi / 16;
    check_distinct_range(n, lo, hi)?;
    let mut rng = SplitMix64::for_stream(seed, "realistic-random");
    let mut weights = rng.distinct(n, lo, hi);
    let mut profits = rng.distinct(n, lo, hi);
    weights.sort_unstable();
    profits.sort_unstable();
    let capacity = rng.uniform(2 * hi, 2 * hi + lo);
    let mut items: Vec<Item> = weights
        .into_iter()
        .zip(profits)
        .map(|(w, p)| Item::new(w, p as i64))
        .collect();
    rng.shuffle(&mut items);
    finish(capacity, items)
}

/// Profit of a weight-`w` item on the ellipse through `(0, 0)` and
/// `(w_max, p_max)`, rounded down and clamped up to 1.
pub fn breq_profit(w: u64, w_max: u64, p_max: u64) -> i64 {
    debug_assert!(w >= 1 && w <= w_max);
    let span = (w_max as u128 * w_max as u128) - (w as u128 * w as u128);
    let root = (p_max as u128 * p_max as u128 * span).isqrt();
    let profit = p_max as i64 - (root / w_max as u128) as i64;
    profit.max(1)
}

pub fn breq(n: usize, seed: u64) -> Result<Instance, GenError> {
    check_n(n)?;
    let capacity = 128 * n as u64;
    let w_max = capacity;
    let p_max = 16 * w_max;
    check_distinct_range(n, 1, w_max)?;
    let mut rng = SplitMix64::for_stream(seed, "breq");
    let weights = rng.distinct(n, 1, w_max);
    let items = weights
        .into_iter()
        .map(|w| Item::new(w, breq_profit(w, w_max, p_max)))
        .collect();
    finish(capacity, items)
}

pub fn subset_sum(
    n: usize,
    w_min: u64,
    w_max: u64,
    c_min: u64,
    c_max: u64,
    seed: u64,
) -> Result<Instance, GenError> {
    check_n(n)?;
    if w_min == 0 {
        return Err(GenError::BadParameters("weights must be positive".to_string()));
    }
    check_distinct_range(n, w_min, w_max)?;
    check_capacity_range(c_min, c_max)?;
    let mut rng = SplitMix64::for_stream(seed, "subset-sum");
    let weights = rng.distinct(n, w_min, w_max);
    let capacity = rng.uniform(c_min, c_max);
    let items = weights.into_iter().map(|w| Item::new(w, w as i64)).collect();
    finish(capacity, items)
}

pub fn strong_corr(
    n: usize,
    alpha: i64,
    w_min: u64,
    w_max: u64,
    c_min: u64,
    c_max: u64,
    seed: u64,
) -> Result<Instance, GenError> {
    check_n(n)?;
    if w_min == 0 {
        return Err(GenError::BadParameters("weights must be positive".to_string()));
    }
    if w_min as i64 + alpha < 1 {
        return Err(GenError::BadParameters(format!(
            "alpha {alpha} would make profits of weight-{w_min} items non-positive"
        )));
    }
    check_distinct_range(n, w_min, w_max)?;
    check_capacity_range(c_min, c_max)?;
    let mut rng = SplitMix64::for_stream(seed, "strong-corr");
    let weights = rng.distinct(n, w_min, w_max);
    let capacity = rng.uniform(c_min, c_max);
    let items = weights
        .into_iter()
        .map(|w| Item::new(w, w as i64 + alpha))
        .collect();
    finish(capacity, items)
}

/// Decimal concatenation: `concat_decimal(10, 5000)` is `105000`. Dataset
/// names use it to splice a parameter into a numeric identifier.
pub fn concat_decimal(prefix: u64, n: u64) -> u64 {
    let mut shift = 10u64;
    while shift <= n {
        shift *= 10;
    }
    prefix * shift + n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::render;

    #[test]
    fn generation_is_deterministic_per_spec_and_diverges_per_seed() {
        let specs = [
            GenSpec::RealisticRandom { n: 40, seed: 7 },
            GenSpec::Breq { n: 40, seed: 7 },
            GenSpec::preset("pyasukp-ss", 40, 7).unwrap(),
            GenSpec::preset("hard-sc", 40, 7).unwrap(),
        ];
        for spec in &specs {
            let a = render(&generate(spec).unwrap());
            let b = render(&generate(spec).unwrap());
            assert_eq!(a, b, "{spec:?} not reproducible");
        }
        let a = render(&generate(&GenSpec::Breq { n: 40, seed: 7 }).unwrap());
        let b = render(&generate(&GenSpec::Breq { n: 40, seed: 8 }).unwrap());
        assert_ne!(a, b);
    }

    #[test]
    fn realistic_random_profits_rise_with_weight() {
        let instance = realistic_random(200, 99).unwrap();
        let mut items: Vec<Item> = instance.items().to_vec();
        items.sort_by_key(|it| it.weight);
        for pair in items.windows(2) {
            assert!(pair[0].weight < pair[1].weight, "weights must be distinct");
            assert!(
                pair[0].profit < pair[1].profit,
                "profit must rise strictly with weight"
            );
        }
        let hi = 200 * 1024;
        let lo = hi / 16;
        for item in &items {
            assert!(item.weight >= lo && item.weight <= hi);
            assert!(item.profit >= lo as i64 && item.profit <= hi as i64);
        }
        assert!(instance.capacity() >= 2 * hi && instance.capacity() <= 2 * hi + lo);
    }

    #[test]
    fn breq_profit_matches_the_ellipse() {
        assert_eq!(breq_profit(60, 100, 100), 20);
        assert_eq!(breq_profit(100, 100, 100), 100);
        assert_eq!(breq_profit(1, 1_000_000, 16_000_000), 1);
        // Weakly monotone in the weight.
        let mut last = 0;
        for w in 1..=100 {
            let p = breq_profit(w, 100, 100);
            assert!(p >= last, "profit dipped at weight {w}");
            last = p;
        }
    }

    #[test]
    fn breq_instances_have_the_documented_shape() {
        let instance = breq(64, 3).unwrap();
        assert_eq!(instance.capacity(), 128 * 64);
        for item in instance.items() {
            assert!(item.weight >= 1 && item.weight <= 128 * 64);
            assert_eq!(item.profit, breq_profit(item.weight, 128 * 64, 16 * 128 * 64));
        }
    }

    #[test]
    fn subset_sum_profits_equal_weights() {
        let spec = GenSpec::preset("pyasukp-ss", 100, 5).unwrap();
        let instance = generate(&spec).unwrap();
        assert!(instance.capacity() >= 5_000_000 && instance.capacity() <= 10_000_000);
        for item in instance.items() {
            assert_eq!(item.profit, item.weight as i64);
            assert!(item.weight >= 1_000 && item.weight <= 500_000);
        }
    }

    #[test]
    fn strong_corr_applies_the_offset_and_pins_the_preset_capacity() {
        let spec = GenSpec::preset("hard-sc", 50, 21).unwrap();
        let instance = generate(&spec).unwrap();
        assert_eq!(instance.capacity(), 9_008_057);
        for item in instance.items() {
            assert_eq!(item.profit, item.weight as i64 - 5);
        }
        // The preset range is exactly n wide, so the weights are forced to be
        // the full consecutive run beginning at the minimum weight.
        let mut weights: Vec<u64> = instance.items().iter().map(|it| it.weight).collect();
        weights.sort_unstable();
        assert_eq!(weights, (110_000..110_050).collect::<Vec<u64>>());
        // A wider draw keeps the bounds without forcing every value.
        let wide = strong_corr(50, -5, 110_000, 1_100_000, 2_000_000, 2_000_000, 3).unwrap();
        assert!(wide.items().iter().all(|it| (110_000..=1_100_000).contains(&it.weight)));
        // An offset that would zero out the lightest possible item is refused.
        assert!(strong_corr(5, -10, 10, 100, 100, 200, 0).is_err());
    }

    #[test]
    fn impossible_parameter_sets_are_refused() {
        assert!(realistic_random(0, 1).is_err());
        assert!(subset_sum(10, 100, 104, 1000, 2000, 1).is_err());
        assert!(subset_sum(10, 100, 200, 300, 200, 1).is_err());
        assert!(GenSpec::preset("no-such-preset", 10, 1).is_none());
    }

    #[test]
    fn decimal_concatenation_splices_parameters() {
        assert_eq!(concat_decimal(10, 5000), 105_000);
        assert_eq!(concat_decimal(5, 1000), 51_000);
        assert_eq!(concat_decimal(7, 0), 70);
        assert_eq!(concat_decimal(1, 9), 19);
        assert_eq!(concat_decimal(1, 10), 110);
    }
}
