//! Problem data model and the plain-text instance file format.
//!
//! An instance file looks like this (`#` starts a comment line, blank lines
//! are ignored, encoding is UTF-8 with LF line endings):
//!
//! ```text
//! # two item types
//! n: 2
//! c: 6
//! begin data
//! 1 1
//! 2 10
//! end data
//! ```

use std::cmp::Ordering;
use std::fmt;

/// One item type. Any number of copies of an item may be packed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Item {
    /// Capacity consumed per copy. Always >= 1.
    pub weight: u64,
    /// Value gained per copy. Always >= 1.
    pub profit: i64,
}

impl Item {
    pub fn new(weight: u64, profit: i64) -> Item {
        Item { weight, profit }
    }

    /// Compares efficiency (profit per unit of weight) exactly, without
    /// floating point: cross-multiplied in 128 bits.
    pub fn cmp_efficiency(&self, other: &Item) -> Ordering {
        let lhs = self.profit as i128 * other.weight as i128;
        let rhs = other.profit as i128 * self.weight as i128;
        lhs.cmp(&rhs)
    }
}

/// An unbounded knapsack instance: pick non-negative copy counts maximizing
/// total profit subject to total weight <= capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    capacity: u64,
    items: Vec<Item>,
}

/// Everything that can go wrong while reading or validating an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    /// Malformed instance file; `line` is 1-based.
    Parse { line: usize, message: String },
    /// An item violates weight >= 1 or profit >= 1. `index` is 0-based.
    BadItem { index: usize, message: String },
    /// The instance has no items.
    NoItems,
    /// Profit arithmetic on this instance could exceed the signed 64-bit
    /// range, so solver bound computations would silently wrap.
    ProfitOverflow,
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::Parse { line, message } => {
                write!(f, "parse error at line {line}: {message}")
            }
            InstanceError::BadItem { index, message } => {
                write!(f, "bad item at index {index}: {message}")
            }
            InstanceError::NoItems => write!(f, "instance has no items"),
            InstanceError::ProfitOverflow => write!(
                f,
                "capacity times the best efficiency times the heaviest weight \
                 exceeds the signed 64-bit range"
            ),
        }
    }
}

impl std::error::Error for InstanceError {}

impl Instance {
    /// Validates and builds an instance.
    ///
    /// Items heavier than the capacity are kept (solvers simply never pack
    /// them), but every weight and profit must be at least 1, and the
    /// worst-case profit magnitude `c * max(p_i/w_i) * w_max` must fit in 63
    /// bits so that solver arithmetic cannot wrap.
    pub fn new(capacity: u64, items: Vec<Item>) -> Result<Instance, InstanceError> {
        if items.is_empty() {
            return Err(InstanceError::NoItems);
        }
        for (index, item) in items.iter().enumerate() {
            if item.weight == 0 {
                return Err(InstanceError::BadItem {
                    index,
                    message: "weight must be positive".to_string(),
                });
            }
            if item.profit <= 0 {
                return Err(InstanceError::BadItem {
                    index,
                    message: "profit must be positive".to_string(),
                });
            }
        }
        let best = items
            .iter()
            .max_by(|a, b| a.cmp_efficiency(b))
            .expect("non-empty");
        let w_max = items.iter().map(|it| it.weight).max().expect("non-empty");
        let ceiling = capacity as u128 * best.profit as u128 * w_max as u128
            / best.weight as u128;
        if ceiling >= 1u128 << 63 {
            return Err(InstanceError::ProfitOverflow);
        }
        Ok(Instance { capacity, items })
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Index of the best item: highest efficiency, ties broken by lower
    /// weight, then by lower index.
    pub fn best_item(&self) -> usize {
        let mut best = 0;
        for i in 1..self.items.len() {
            let a = &self.items[i];
            let b = &self.items[best];
            match a.cmp_efficiency(b).then(b.weight.cmp(&a.weight)) {
                Ordering::Greater => best = i,
                _ => {}
            }
        }
        best
    }

    /// Item indices sorted by non-increasing efficiency; efficiency ties are
    /// broken by non-decreasing weight, then by original index. The first
    /// entry is always `best_item()`.
    pub fn efficiency_order(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.items.len() as u32).collect();
        order.sort_by(|&a, &b| {
            let ia = &self.items[a as usize];
            let ib = &self.items[b as usize];
            ib.cmp_efficiency(ia)
                .then(ia.weight.cmp(&ib.weight))
                .then(a.cmp(&b))
        });
        order
    }
}

/// Parses the instance file format shown in the module docs.
pub fn parse(text: &str) -> Result<Instance, InstanceError> {
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let end_line = text.lines().count() + 1;
    let mut cursor = 0usize;
    let mut next = |expected: &str| -> Result<(usize, &str), InstanceError> {
        let row = rows.get(cursor).copied().ok_or_else(|| InstanceError::Parse {
            line: end_line,
            message: format!("unexpected end of file, expected {expected}"),
        })?;
        cursor += 1;
        Ok(row)
    };

    let (line, header) = next("`n: <count>`")?;
    let n = parse_header(header, "n", line)?;
    if n == 0 {
        return Err(InstanceError::Parse {
            line,
            message: "item count must be positive".to_string(),
        });
    }
    let (line, header) = next("`c: <capacity>`")?;
    let capacity = parse_header(header, "c", line)?;
    let (line, marker) = next("`begin data`")?;
    if marker != "begin data" {
        return Err(InstanceError::Parse {
            line,
            message: format!("expected `begin data`, found `{marker}`"),
        });
    }

    let mut items = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let (line, row) = next("an item row `<weight> <profit>`")?;
        let mut fields = row.split_whitespace();
        let (w, p) = match (fields.next(), fields.next(), fields.next()) {
            (Some(w), Some(p), None) => (w, p),
            _ => {
                return Err(InstanceError::Parse {
                    line,
                    message: format!("expected `<weight> <profit>`, found `{row}`"),
                })
            }
        };
        let weight = w.parse::<u64>().map_err(|e| InstanceError::Parse {
            line,
            message: format!("bad weight `{w}`: {e}"),
        })?;
        let profit = p.parse::<i64>().map_err(|e| InstanceError::Parse {
            line,
            message: format!("bad profit `{p}`: {e}"),
        })?;
        items.push(Item::new(weight, profit));
    }

    let (line, marker) = next("`end data`")?;
    if marker != "end data" {
        return Err(InstanceError::Parse {
            line,
            message: format!("expected `end data`, found `{marker}`"),
        });
    }
    drop(next);
    if let Some(&(line, extra)) = rows.get(cursor) {
        return Err(InstanceError::Parse {
            line,
            message: format!("unexpected content after `end data`: `{extra}`"),
        });
    }
    Instance::new(capacity, items)
}

fn parse_header(text: &str, key: &str, line: usize) -> Result<u64, InstanceError> {
    let rest = text
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .ok_or_else(|| InstanceError::Parse {
            line,
            message: format!("expected `{key}: <integer>`, found `{text}`"),
        })?;
    rest.trim().parse::<u64>().map_err(|e| InstanceError::Parse {
        line,
        message: format!("bad value for `{key}`: {e}"),
    })
}

/// Renders an instance in canonical form: exactly the header, the data block,
/// one `w p` row per item, LF endings, no comments. `parse(render(i)) == i`.
pub fn render(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("n: {}\n", instance.len()));
    out.push_str(&format!("c: {}\n", instance.capacity()));
    out.push_str("begin data\n");
    for item in instance.items() {
        out.push_str(&format!("{} {}\n", item.weight, item.profit));
    }
    out.push_str("end data\n");
    out
}
