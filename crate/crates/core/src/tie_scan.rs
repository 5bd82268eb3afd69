//! Search of the terminal solution set for its most expensive feasible member.
//!
//! All members of the solution set of a scalarized problem lie on the same
//! weighted-sum level, so the feasible member with the largest cost is also
//! the one with the largest profit. The set is the Cartesian product of the
//! per-group tie sets and can be huge; the scan is a depth-first search with
//! budget and bound pruning and a node cap.

use serde::{Deserialize, Serialize};

use crate::arith::{Numeric, Scalar, Tolerance};
use crate::model::{evaluate, ChoiceVector, Instance, Outcome};
use crate::scalarized::tie_product;

pub const DEFAULT_NODE_CAP: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TieScanResult {
    pub best: ChoiceVector,
    pub best_outcome: Outcome,
    pub exhaustive: bool,
    pub nodes_visited: u64,
    pub s_cardinality: u64,
}

struct Search<'a, T> {
    view: &'a Numeric<T>,
    budget: f64,
    tol: Tolerance,
    /// group index at each depth
    order: Vec<usize>,
    /// `(item, cost)` candidates per depth, by decreasing cost
    cands: Vec<Vec<(usize, T)>>,
    /// min / max tie cost summed over depths `d..`
    rest_min: Vec<T>,
    rest_max: Vec<T>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_cost: T,
    nodes: u64,
    cap: u64,
    truncated: bool,
    done: bool,
}

impl<T: Scalar> Search<'_, T> {
    fn dfs(&mut self, depth: usize, partial: T) {
        if depth == self.order.len() {
            self.leaf(partial);
            return;
        }
        let g = self.order[depth];
        for idx in 0..self.cands[depth].len() {
            if self.done || self.truncated {
                return;
            }
            if self.nodes >= self.cap {
                self.truncated = true;
                return;
            }
            self.nodes += 1;
            let (j, c) = self.cands[depth][idx];
            let cost = partial + c;
            // candidates are sorted by decreasing cost: once the optimistic
            // bound cannot beat the incumbent, no later candidate can either
            if cost + self.rest_max[depth + 1] <= self.best_cost {
                return;
            }
            if !T::may_fit_budget(cost + self.rest_min[depth + 1], self.budget, self.tol) {
                continue;
            }
            self.current[g] = j;
            self.dfs(depth + 1, cost);
        }
    }

    fn leaf(&mut self, partial: T) {
        if partial <= self.best_cost {
            return;
        }
        // canonical group-order sum decides feasibility and improvement
        let (_, cost) = self.view.eval(&self.current);
        if T::fits_budget(cost, self.budget) && cost > self.best_cost {
            self.best_cost = cost;
            self.best.clone_from(&self.current);
            if T::hits_budget(cost, self.budget, self.tol) {
                self.done = true;
            }
        }
    }
}

pub(crate) fn scan<T: Scalar>(
    view: &Numeric<T>,
    ties: &[Vec<usize>],
    budget: f64,
    fallback: &[usize],
    node_cap: u64,
    tol: Tolerance,
) -> (Vec<usize>, bool, u64) {
    let k = view.k();
    let mut order: Vec<usize> = (0..k).collect();
    // larger tie sets first; stable sort keeps group order among equals
    order.sort_by(|&a, &b| ties[b].len().cmp(&ties[a].len()));
    let cands: Vec<Vec<(usize, T)>> = order
        .iter()
        .map(|&g| {
            let mut c: Vec<(usize, T)> = ties[g].iter().map(|&j| (j, view.groups[g][j].1)).collect();
            c.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite costs").then(a.0.cmp(&b.0)));
            c
        })
        .collect();
    let mut rest_min = vec![T::ZERO; k + 1];
    let mut rest_max = vec![T::ZERO; k + 1];
    for d in (0..k).rev() {
        rest_max[d] = rest_max[d + 1] + cands[d][0].1;
        rest_min[d] = rest_min[d + 1] + cands[d][cands[d].len() - 1].1;
    }
    let (_, fallback_cost) = view.eval(fallback);
    let mut search = Search {
        view,
        budget,
        tol,
        order,
        cands,
        rest_min,
        rest_max,
        current: fallback.to_vec(),
        best: fallback.to_vec(),
        best_cost: fallback_cost,
        nodes: 0,
        cap: node_cap.max(1),
        truncated: false,
        done: T::hits_budget(fallback_cost, budget, tol),
    };
    if !search.done {
        search.dfs(0, T::ZERO);
    }
    (search.best, !search.truncated, search.nodes)
}

/// Finds the member of `Π ties_i` with the largest cost not exceeding
/// `budget`. `fallback` must be a feasible member; it is returned unchanged
/// when nothing better is found within `node_cap` visited nodes.
pub fn scan_ties(
    instance: &Instance,
    ties: &[Vec<usize>],
    budget: f64,
    fallback: &ChoiceVector,
    node_cap: u64,
) -> TieScanResult {
    let tol = Tolerance::default();
    let (best, exhaustive, nodes_visited) = match Numeric::exact(instance) {
        Some(view) => scan(&view, ties, budget, fallback.picks(), node_cap, tol),
        None => scan(
            &Numeric::real(instance),
            ties,
            budget,
            fallback.picks(),
            node_cap,
            tol,
        ),
    };
    let best = ChoiceVector(best);
    let best_outcome = evaluate(instance, &best).expect("tie members are valid picks");
    TieScanResult {
        best,
        best_outcome,
        exhaustive,
        nodes_visited,
        s_cardinality: tie_product(ties),
    }
}
