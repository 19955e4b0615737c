//! A small dense two-phase primal simplex for covering LPs:
//! minimize `cost . x` subject to `constraints * x >= bounds`, `x >= 0`.
//!
//! Surplus variables turn the rows into equalities, artificials give the
//! initial basis, phase one drives the artificials to zero, phase two
//! optimizes the real objective. Entering columns are picked by most
//! negative reduced cost until pivots stop making progress, after which the
//! lowest-index rule takes over so the method cannot cycle. Row duals are
//! read off the surplus columns of the final objective row.

/// Entries this close to zero are treated as zero when picking pivots.
const PIVOT_EPS: f64 = 1e-10;
/// A reduced cost must be below `-COST_EPS` for a column to enter.
const COST_EPS: f64 = 1e-9;
/// Consecutive non-improving pivots before switching to the lowest-index
/// entering rule.
const STALL_LIMIT: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpError {
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl std::fmt::Display for LpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            LpError::Infeasible => "the constraints admit no solution",
            LpError::Unbounded => "the objective is unbounded below",
            LpError::IterationLimit => "the pivot limit was exceeded",
        };
        f.write_str(text)
    }
}

impl std::error::Error for LpError {}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective: f64,
    pub primal: Vec<f64>,
    /// One multiplier per constraint row, clipped to be non-negative.
    pub duals: Vec<f64>,
}

struct Tableau {
    /// `n` originals, then `m` surplus, then `m` artificials, then the rhs.
    rows: Vec<Vec<f64>>,
    objective: Vec<f64>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.n + 2 * self.m
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let scale = self.rows[row][col];
        for value in &mut self.rows[row] {
            *value /= scale;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r != row && other[col].abs() > 0.0 {
                let factor = other[col];
                for (value, &p) in other.iter_mut().zip(&pivot_row) {
                    *value -= factor * p;
                }
            }
        }
        let factor = self.objective[col];
        if factor.abs() > 0.0 {
            for (value, &p) in self.objective.iter_mut().zip(&pivot_row) {
                *value -= factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Runs pivots until no column improves the current objective row.
    fn optimize(&mut self, allow_artificials: bool) -> Result<(), LpError> {
        let enterable = if allow_artificials { self.width() } else { self.n + self.m };
        let mut stalled: u32 = 0;
        let mut iterations: u64 = 0;
        let limit = 1000 + 200 * (self.width() as u64 + self.m as u64);
        loop {
            iterations += 1;
            if iterations > limit {
                return Err(LpError::IterationLimit);
            }
            let bland = stalled >= STALL_LIMIT;
            let mut entering: Option<usize> = None;
            let mut most_negative = -COST_EPS;
            for col in 0..enterable {
                let reduced = self.objective[col];
                if reduced < most_negative {
                    entering = Some(col);
                    if bland {
                        break;
                    }
                    most_negative = reduced;
                }
            }
            let Some(col) = entering else { return Ok(()) };
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let coefficient = self.rows[r][col];
                if coefficient > PIVOT_EPS {
                    let ratio = self.rows[r][self.width()] / coefficient;
                    let better = match leaving {
                        None => true,
                        // Lowest row index on ties keeps the rule finite.
                        Some((_, best)) => ratio < best - PIVOT_EPS,
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leaving else { return Err(LpError::Unbounded) };
            if ratio.abs() <= PIVOT_EPS {
                stalled += 1;
            } else {
                stalled = 0;
            }
            self.pivot(row, col);
        }
    }

    fn value_of(&self, col: usize) -> f64 {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map(|row| self.rows[row][self.width()])
            .unwrap_or(0.0)
    }
}

/// Minimizes `cost . x` subject to `constraints * x >= bounds` and `x >= 0`.
/// All bounds must be non-negative (a covering LP always satisfies this).
pub fn solve_covering_lp(
    cost: &[f64],
    constraints: &[Vec<f64>],
    bounds: &[f64],
) -> Result<LpSolution, LpError> {
    let m = constraints.len();
    let n = cost.len();
    assert_eq!(m, bounds.len(), "one bound per constraint row");
    assert!(bounds.iter().all(|&b| b >= 0.0), "covering bounds must be non-negative");
    assert!(constraints.iter().all(|row| row.len() == n));

    let width = n + 2 * m;
    let mut tableau = Tableau {
        rows: (0..m)
            .map(|i| {
                let mut row = vec![0.0; width + 1];
                row[..n].copy_from_slice(&constraints[i]);
                row[n + i] = -1.0; // surplus
                row[n + m + i] = 1.0; // artificial
                row[width] = bounds[i];
                row
            })
            .collect(),
        objective: vec![0.0; width + 1],
        basis: (0..m).map(|i| n + m + i).collect(),
        n,
        m,
    };

    // Phase one: minimize the sum of artificials. Subtracting every row
    // zeroes the objective over the starting basis.
    for col in n + m..width {
        tableau.objective[col] = 1.0;
    }
    for i in 0..m {
        let row = tableau.rows[i].clone();
        for (value, r) in tableau.objective.iter_mut().zip(&row) {
            *value -= r;
        }
    }
    tableau.optimize(true)?;
    let infeasibility: f64 = (n + m..width).map(|col| tableau.value_of(col)).sum();
    if infeasibility > 1e-7 {
        return Err(LpError::Infeasible);
    }

    // Phase two: the real objective, artificials barred from re-entering.
    tableau.objective = vec![0.0; width + 1];
    tableau.objective[..n].copy_from_slice(cost);
    for row in 0..m {
        let basic = tableau.basis[row];
        let factor = tableau.objective[basic];
        if factor.abs() > 0.0 {
            let pivot_row = tableau.rows[row].clone();
            for (value, &p) in tableau.objective.iter_mut().zip(&pivot_row) {
                *value -= factor * p;
            }
        }
    }
    tableau.optimize(false)?;

    let primal: Vec<f64> = (0..n).map(|col| tableau.value_of(col)).collect();
    let objective = cost.iter().zip(&primal).map(|(c, x)| c * x).sum();
    let duals: Vec<f64> = (0..m).map(|i| tableau.objective[n + i].max(0.0)).collect();
    Ok(LpSolution { objective, primal, duals })
}
