//! Exact algorithms and tooling for the unbounded knapsack problem (UKP):
//! maximize the total profit of packed item copies subject to a weight
//! capacity, with no per-item copy limit.
//!
//! The crate provides:
//!
//! - [`instance`]: the data model and plain-text instance file format;
//! - [`dp`]: dynamic programming over capacities, from a deliberately naive
//!   reference solver to sparse step-off variants with early termination;
//! - [`bb`]: depth-first branch-and-bound with greedy lower and continuous
//!   relaxation upper bounds, plus a growing-core variant;
//! - [`dominance`]: item dominance analysis and capacity periodicity bounds;
//! - [`generators`]: seeded, reproducible instance families;
//! - [`bench`]: a timing harness producing per-run rows and summary tables;
//! - [`colgen`]: a cutting-stock column generation loop whose pricing
//!   subproblems are solved by the UKP solvers above.

pub mod bb;
pub mod bench;
pub mod colgen;
pub mod dominance;
pub mod dp;
pub mod generators;
pub mod instance;
pub mod rng;
pub mod simplex;
pub mod solution;
pub(crate) mod timer;

pub use instance::{Instance, InstanceError, Item};
pub use solution::{evaluate, Evaluation, Solution, SolverOutcome, Stats, Termination};
