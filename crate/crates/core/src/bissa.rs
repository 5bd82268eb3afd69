//! Bi-objective approximate solution search for the multiple-choice knapsack.
//!
//! The budget constraint is turned into a second objective (minimize cost).
//! Starting from the two extreme Pareto points, the driver repeatedly solves
//! the weighted-sum problem whose level line passes through the current pair
//! of anchor points `(a1, b1)` (infeasible side) and `(a2, b2)` (feasible
//! side). A solution strictly above that line replaces one anchor; when no
//! such solution exists the feasible member of the solution set closest to
//! the budget is returned. The returned profit is a lower bound and the
//! intersection of the final line with `f2 = -b` gives an upper bound.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{Numeric, Scalar, Tolerance};
use crate::error::{Error, Result};
use crate::model::{evaluate, ChoiceVector, Instance, Outcome};
use crate::scalarized::{profile, scalarize, solve_extreme, tie_product, Extreme};
use crate::tie_scan::{self, TieScanResult, DEFAULT_NODE_CAP};

#[derive(Clone, Debug)]
pub struct BissaOptions {
    pub node_cap: u64,
    /// Defaults to `10·(k + max n_i)` when `None`.
    pub max_iterations: Option<usize>,
    pub tolerance: Tolerance,
}

impl Default for BissaOptions {
    fn default() -> Self {
        BissaOptions {
            node_cap: DEFAULT_NODE_CAP,
            max_iterations: None,
            tolerance: Tolerance::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Above the line and over budget: replaces `(a1, b1)`.
    AboveLineInfeasible,
    /// Above the line and within budget: replaces `(a2, b2)`.
    AboveLineFeasible,
    /// Above the line and exactly on budget: optimal.
    ExactHit,
    /// Nothing above the line: scan the solution set and stop.
    Terminal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// `(wp, wc)` as used by the solve.
    pub weights: (f64, f64),
    /// Level of the anchor line, per unit of weight (the `λ`-form value).
    pub alpha: f64,
    /// Optimal scalarized value, per unit of weight.
    pub opt: f64,
    pub outcome: Outcome,
    pub branch: Branch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExactSolved,
    Approximate,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [Outcome; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BissaReport {
    pub status: Status,
    pub solution: Option<ChoiceVector>,
    pub outcome: Option<Outcome>,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub u: Option<f64>,
    pub triangle: Option<Triangle>,
    /// Infeasible-side anchor `(a1, b1)` at termination.
    pub anchor: Option<Outcome>,
    pub iterations: Vec<IterationRecord>,
    pub scalarized_count: usize,
    /// `|S|` of the last scalarized problem (1 when none was solved).
    pub s_cardinality: u64,
    /// Per-group tie sets of the terminal problem.
    pub terminal_ties: Option<Vec<Vec<usize>>>,
    pub tie_scan: Option<TieScanResult>,
    /// Whether the run used exact integer arithmetic.
    pub exact_arithmetic: bool,
    pub elapsed_ms: f64,
}

/// Upper bound from the final anchor line: returns `(lb, u, ub)` where `ub`
/// is the profit of the line through `(a1, b1)` and `x̂` at `f2 = -budget`.
pub fn uncertainty_bounds(a1: f64, b1: f64, approx: Outcome, budget: f64) -> Result<(f64, f64, f64)> {
    let denom = approx.f2 - b1;
    if denom == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    let u = (a1 - approx.f1) * (approx.f2 + budget) / denom;
    Ok((approx.f1, u, approx.f1 + u))
}

struct Point<T> {
    picks: Vec<usize>,
    f1: T,
    f2: T,
}

impl<T: Scalar> Point<T> {
    fn new(view: &Numeric<T>, picks: Vec<usize>) -> Self {
        let (p, c) = view.eval(&picks);
        Point { picks, f1: p, f2: -c }
    }
}

enum Finish {
    Exact(Vec<usize>),
    Infeasible,
    Approximate {
        anchor: (f64, f64),
        ties: Vec<Vec<usize>>,
        fallback: Vec<usize>,
    },
}

struct Run {
    finish: Finish,
    iterations: Vec<IterationRecord>,
    s_cardinality: u64,
}

fn drive<T: Scalar>(view: &Numeric<T>, budget: f64, max_iter: usize, tol: Tolerance) -> Result<Run> {
    let prof = profile(view, tol);
    let (x1, x2) = match prof.extreme_weights(tol) {
        Some((w1, w2)) => (
            solve_extreme(view, w1, Extreme::Profit, tol),
            solve_extreme(view, w2, Extreme::Cost, tol),
        ),
        // degenerate profile: both witnesses collapse onto one outcome
        None => (prof.x1.clone(), prof.x2.clone()),
    };
    let mut p1 = Point::new(view, x1);
    let mut p2 = Point::new(view, x2);
    let mut iterations = Vec::new();
    let done = |finish| Run {
        finish,
        iterations: Vec::new(),
        s_cardinality: 1,
    };

    let coincide = p1.f1.approx_eq(p2.f1, tol) && p1.f2.approx_eq(p2.f2, tol);
    let fits = |f2: T| T::fits_budget(-f2, budget);
    if coincide && fits(p2.f2) {
        return Ok(done(Finish::Exact(p2.picks)));
    }
    if fits(p1.f2) {
        return Ok(done(Finish::Exact(p1.picks)));
    }
    if T::hits_budget(-p2.f2, budget, tol) {
        return Ok(done(Finish::Exact(p2.picks)));
    }
    if !fits(p2.f2) {
        return Ok(done(Finish::Infeasible));
    }

    loop {
        if iterations.len() >= max_iter {
            return Err(Error::IterationLimit(max_iter));
        }
        let (wp, wc) = T::weight_pair(p2.f2 - p1.f2, p1.f1 - p2.f1);
        let alpha = wp * p1.f1 + wc * p1.f2;
        let sol = scalarize(view, wp, wc, tol);
        let x = Point::new(view, sol.picks.clone());
        let wsum = wp + wc;
        let mut record = IterationRecord {
            weights: (wp.to_f64(), wc.to_f64()),
            alpha: T::per_unit(alpha, wsum),
            opt: T::per_unit(sol.value, wsum),
            outcome: Outcome {
                f1: x.f1.to_f64(),
                f2: x.f2.to_f64(),
            },
            branch: Branch::Terminal,
        };
        if sol.value.approx_gt(alpha, tol) {
            let cost = -x.f2;
            if T::hits_budget(cost, budget, tol) {
                record.branch = Branch::ExactHit;
                iterations.push(record);
                return Ok(Run {
                    finish: Finish::Exact(x.picks),
                    iterations,
                    s_cardinality: sol.s_cardinality(),
                });
            } else if T::fits_budget(cost, budget) {
                record.branch = Branch::AboveLineFeasible;
                p2 = x;
            } else {
                record.branch = Branch::AboveLineInfeasible;
                p1 = x;
            }
            iterations.push(record);
        } else {
            iterations.push(record);
            let s_cardinality = sol.s_cardinality();
            return Ok(Run {
                finish: Finish::Approximate {
                    anchor: (p1.f1.to_f64(), p1.f2.to_f64()),
                    ties: sol.ties,
                    fallback: p2.picks,
                },
                iterations,
                s_cardinality,
            });
        }
    }
}

pub fn run_bissa(instance: &Instance, options: &BissaOptions) -> Result<BissaReport> {
    let start = Instant::now();
    let budget = instance.budget();
    let tol = options.tolerance;
    let max_iter = options
        .max_iterations
        .unwrap_or(10 * (instance.k() + instance.max_group_len()));
    let exact_view = Numeric::exact(instance);
    let exact_arithmetic = exact_view.is_some();
    let (run, scan) = match &exact_view {
        Some(view) => {
            let run = drive(view, budget, max_iter, tol)?;
            let scan = finish_scan(instance, view, &run, options.node_cap, tol);
            (run, scan)
        }
        None => {
            let view = Numeric::real(instance);
            let run = drive(&view, budget, max_iter, tol)?;
            let scan = finish_scan(instance, &view, &run, options.node_cap, tol);
            (run, scan)
        }
    };

    let mut report = BissaReport {
        status: Status::Infeasible,
        solution: None,
        outcome: None,
        lb: None,
        ub: None,
        u: None,
        triangle: None,
        anchor: None,
        scalarized_count: run.iterations.len(),
        iterations: run.iterations,
        s_cardinality: run.s_cardinality,
        terminal_ties: None,
        tie_scan: None,
        exact_arithmetic,
        elapsed_ms: 0.0,
    };
    match run.finish {
        Finish::Infeasible => {}
        Finish::Exact(picks) => {
            let choice = ChoiceVector(picks);
            let out = evaluate(instance, &choice)?;
            report.status = Status::ExactSolved;
            fill_bounds(&mut report, choice, out, 0.0, budget);
        }
        Finish::Approximate { anchor, ties, .. } => {
            let scan = scan.expect("terminal branch scans");
            let choice = scan.best.clone();
            let out = scan.best_outcome;
            let (_, u, _) = uncertainty_bounds(anchor.0, anchor.1, out, budget)?;
            report.status = Status::Approximate;
            report.anchor = Some(Outcome {
                f1: anchor.0,
                f2: anchor.1,
            });
            report.terminal_ties = Some(ties);
            report.tie_scan = Some(scan);
            fill_bounds(&mut report, choice, out, u, budget);
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn finish_scan<T: Scalar>(
    instance: &Instance,
    view: &Numeric<T>,
    run: &Run,
    node_cap: u64,
    tol: Tolerance,
) -> Option<TieScanResult> {
    let Finish::Approximate { ties, fallback, .. } = &run.finish else {
        return None;
    };
    let (best, exhaustive, nodes_visited) =
        tie_scan::scan(view, ties, instance.budget(), fallback, node_cap, tol);
    let best = ChoiceVector(best);
    let best_outcome = evaluate(instance, &best).expect("tie members are valid picks");
    Some(TieScanResult {
        best,
        best_outcome,
        exhaustive,
        nodes_visited,
        s_cardinality: tie_product(ties),
    })
}

fn fill_bounds(report: &mut BissaReport, choice: ChoiceVector, out: Outcome, u: f64, budget: f64) {
    let floor = Outcome {
        f1: out.f1,
        f2: -budget,
    };
    report.lb = Some(out.f1);
    report.u = Some(u);
    report.ub = Some(out.f1 + u);
    report.triangle = Some(Triangle {
        vertices: [
            out,
            Outcome {
                f1: out.f1 + u,
                f2: -budget,
            },
            floor,
        ],
    });
    report.solution = Some(choice);
    report.outcome = Some(out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1(b: f64) -> Instance {
        Instance::new(
            vec![vec![(10.0, 4.0), (7.0, 2.0)], vec![(6.0, 5.0), (3.0, 1.0)]],
            b,
        )
        .unwrap()
    }

    #[test]
    fn e1_trace() {
        let r = run_bissa(&e1(6.0), &BissaOptions::default()).unwrap();
        assert_eq!(r.status, Status::Approximate);
        assert!(r.exact_arithmetic);
        assert_eq!((r.lb, r.u, r.ub), (Some(13.0), Some(0.75), Some(13.75)));
        assert_eq!(r.scalarized_count, 2);
        assert_eq!(r.s_cardinality, 2);
        assert_eq!(r.solution.as_ref().unwrap().picks(), &[0, 1]);
        assert_eq!(r.anchor, Some(Outcome { f1: 16.0, f2: -9.0 }));

        let it = &r.iterations;
        assert_eq!(it[0].weights, (6.0, 6.0));
        assert_eq!((it[0].alpha, it[0].opt), (3.5, 4.0));
        assert_eq!(it[0].outcome, Outcome { f1: 13.0, f2: -5.0 });
        assert_eq!(it[0].branch, Branch::AboveLineFeasible);
        assert_eq!(it[1].weights, (4.0, 3.0));
        assert_eq!(it[1].alpha, it[1].opt);
        assert_eq!(it[1].branch, Branch::Terminal);

        let tri = r.triangle.unwrap().vertices;
        assert_eq!(tri[1], Outcome { f1: 13.75, f2: -6.0 });
    }

    #[test]
    fn e1_float_path_matches() {
        // a fractional item forces the float backend without moving the optimum
        let inst = Instance::new(
            vec![vec![(10.0, 4.0), (7.0, 2.0)], vec![(6.0, 5.0), (3.0, 1.0)], vec![(0.5, 0.0)]],
            6.0,
        )
        .unwrap();
        let r = run_bissa(&inst, &BissaOptions::default()).unwrap();
        assert!(!r.exact_arithmetic);
        assert_eq!(r.lb, Some(13.5));
        assert!((r.ub.unwrap() - 14.25).abs() < 1e-9);
        assert_eq!(r.scalarized_count, 2);
    }

    #[test]
    fn short_circuits() {
        let r = run_bissa(&e1(9.0), &BissaOptions::default()).unwrap();
        assert_eq!(r.status, Status::ExactSolved);
        assert_eq!((r.lb, r.u, r.ub), (Some(16.0), Some(0.0), Some(16.0)));
        assert_eq!(r.scalarized_count, 0);

        let r = run_bissa(&e1(3.0), &BissaOptions::default()).unwrap();
        assert_eq!(r.status, Status::ExactSolved);
        assert_eq!(r.lb, Some(10.0));

        let r = run_bissa(&e1(2.0), &BissaOptions::default()).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert_eq!(r.lb, None);

        let single = Instance::new(vec![vec![(5.0, 2.0)]], 2.0).unwrap();
        let r = run_bissa(&single, &BissaOptions::default()).unwrap();
        assert_eq!((r.status, r.lb), (Status::ExactSolved, Some(5.0)));
    }

    #[test]
    fn loop_exact_hit() {
        let r = run_bissa(&e1(5.0), &BissaOptions::default()).unwrap();
        assert_eq!(r.status, Status::ExactSolved);
        assert_eq!(r.lb, Some(13.0));
        assert_eq!(r.iterations.last().unwrap().branch, Branch::ExactHit);
    }

    #[test]
    fn bounds_formula() {
        let (lb, u, ub) = uncertainty_bounds(16.0, -9.0, Outcome { f1: 13.0, f2: -5.0 }, 6.0).unwrap();
        assert_eq!((lb, u, ub), (13.0, 0.75, 13.75));
        let (_, u, _) = uncertainty_bounds(16.0, -9.0, Outcome { f1: 13.0, f2: -6.0 }, 6.0).unwrap();
        assert_eq!(u, 0.0);
        assert!(matches!(
            uncertainty_bounds(16.0, -9.0, Outcome { f1: 13.0, f2: -9.0 }, 6.0),
            Err(Error::DegenerateGeometry)
        ));
    }

    #[test]
    fn iteration_limit() {
        let opts = BissaOptions {
            max_iterations: Some(1),
            ..BissaOptions::default()
        };
        assert!(matches!(run_bissa(&e1(6.0), &opts), Err(Error::IterationLimit(1))));
    }
}
