//! Multiple-choice knapsack solvers built on closed-form weighted-sum
//! scalarization of the profit/cost bi-objective problem.
//!
//! The main entry point is [`bissa::run_bissa`], which returns a feasible
//! approximate solution together with a certified lower and upper bound on
//! the optimal profit. [`baselines`] holds the exhaustive, DP and greedy
//! reference solvers; [`gen`] and [`io`] produce and persist instances.

pub mod arith;
pub mod baselines;
pub mod bench;
pub mod bissa;
pub mod error;
pub mod gen;
pub mod io;
pub mod model;
pub mod report;
pub mod scalarized;
pub mod tie_scan;

pub use bissa::{run_bissa, BissaOptions, BissaReport, Status};
pub use error::{Error, Result};
pub use model::{evaluate, global_bounds, is_feasible, ChoiceVector, Instance, Outcome, ValueClass};
