//! Closed-form solution of the weighted-sum problems
//! `max wp·pᵀx − wc·cᵀx` over the choice space.
//!
//! The choice space is a Cartesian product of groups, so the maximum splits
//! into independent per-group argmax problems, each solved in `O(n_i)`.
//! The module also builds the submax profile (largest values and smallest
//! nonzero decreases of both objectives) that sizes the perturbation weights
//! of the two extreme problems.

use serde::{Deserialize, Serialize};

use crate::arith::{integral_weight, Numeric, Scalar, Tolerance};
use crate::error::{Error, Result};
use crate::model::{ChoiceVector, Group, Instance, Outcome};

/// Weights of a scalarized problem: maximize `wp·profit − wc·cost`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarWeights {
    pub wp: f64,
    pub wc: f64,
}

impl ScalarWeights {
    pub fn new(wp: f64, wc: f64) -> Option<Self> {
        (wp >= 0.0 && wc >= 0.0 && wp + wc > 0.0 && wp.is_finite() && wc.is_finite())
            .then_some(ScalarWeights { wp, wc })
    }

    /// The `λ`-form `(λ, 1 − λ)`.
    pub fn from_lambda(lambda: f64) -> Option<Self> {
        Self::new(lambda, 1.0 - lambda)
    }

    pub fn score(&self, outcome: &Outcome) -> f64 {
        self.wp * outcome.f1 + self.wc * outcome.f2
    }

    fn exact(&self) -> Option<(i128, i128)> {
        integral_weight(self.wp).zip(integral_weight(self.wc))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupScalarResult {
    pub v: f64,
    pub best_j: usize,
    pub ties: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarizedSolution {
    pub value: f64,
    pub representative: ChoiceVector,
    pub per_group: Vec<GroupScalarResult>,
    pub s_cardinality: u64,
    /// Whether the solve ran on exact integer arithmetic.
    pub exact: bool,
}

impl ScalarizedSolution {
    pub fn ties(&self) -> Vec<Vec<usize>> {
        self.per_group.iter().map(|g| g.ties.clone()).collect()
    }
}

pub(crate) struct GroupArgmax<T> {
    pub value: T,
    pub ties: Vec<usize>,
}

pub(crate) fn group_argmax<T: Scalar>(
    items: &[(T, T)],
    wp: T,
    wc: T,
    tol: Tolerance,
) -> GroupArgmax<T> {
    let score = |&(p, c): &(T, T)| wp * p - wc * c;
    let mut value = score(&items[0]);
    for it in &items[1..] {
        let s = score(it);
        if s > value {
            value = s;
        }
    }
    let ties = items
        .iter()
        .enumerate()
        .filter(|(_, it)| score(it).approx_eq(value, tol))
        .map(|(j, _)| j)
        .collect();
    GroupArgmax { value, ties }
}

pub(crate) struct Scalarized<T> {
    pub value: T,
    pub picks: Vec<usize>,
    pub ties: Vec<Vec<usize>>,
    pub group_values: Vec<T>,
}

impl<T> Scalarized<T> {
    pub fn s_cardinality(&self) -> u64 {
        tie_product(&self.ties)
    }
}

pub(crate) fn tie_product(ties: &[Vec<usize>]) -> u64 {
    ties.iter()
        .fold(1u64, |acc, t| acc.saturating_mul(t.len() as u64))
}

pub(crate) fn scalarize<T: Scalar>(view: &Numeric<T>, wp: T, wc: T, tol: Tolerance) -> Scalarized<T> {
    let mut value = T::ZERO;
    let mut picks = Vec::with_capacity(view.k());
    let mut ties = Vec::with_capacity(view.k());
    let mut group_values = Vec::with_capacity(view.k());
    for g in &view.groups {
        let r = group_argmax(g, wp, wc, tol);
        value = value + r.value;
        picks.push(r.ties[0]);
        group_values.push(r.value);
        ties.push(r.ties);
    }
    Scalarized {
        value,
        picks,
        ties,
        group_values,
    }
}

fn publish<T: Scalar>(s: Scalarized<T>) -> ScalarizedSolution {
    let s_cardinality = s.s_cardinality();
    ScalarizedSolution {
        value: s.value.to_f64(),
        representative: ChoiceVector(s.picks),
        per_group: s
            .group_values
            .into_iter()
            .zip(s.ties)
            .map(|(v, ties)| GroupScalarResult {
                v: v.to_f64(),
                best_j: ties[0],
                ties,
            })
            .collect(),
        s_cardinality,
        exact: T::EXACT,
    }
}

/// Solves one group's scalarized problem; `best_j` is the lowest maximizer.
pub fn group_scalar_argmax(group: &Group, weights: ScalarWeights) -> GroupScalarResult {
    let single = Instance::new(
        vec![group.items.iter().map(|it| (it.profit, it.cost)).collect()],
        0.0,
    )
    .expect("group of a validated instance");
    let mut sol = solve_scalarized(&single, weights);
    sol.per_group.pop().expect("one group")
}

pub fn solve_scalarized(instance: &Instance, weights: ScalarWeights) -> ScalarizedSolution {
    solve_scalarized_with(instance, weights, Tolerance::default())
}

/// Exact integer path when items and weights are integral, float path otherwise.
pub fn solve_scalarized_with(
    instance: &Instance,
    weights: ScalarWeights,
    tol: Tolerance,
) -> ScalarizedSolution {
    if let (Some(view), Some((wp, wc))) = (Numeric::exact(instance), weights.exact()) {
        if view.weights_fit(wp, wc) {
            return publish(scalarize(&view, wp, wc, tol));
        }
    }
    let view = Numeric::real(instance);
    publish(scalarize(&view, weights.wp, weights.wc, tol))
}

/// Extremes of both objectives and their smallest nonzero decreases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubmaxProfile {
    /// `F1 = max pᵀx`
    pub f1_max: f64,
    /// `F2 = max (−c)ᵀx`
    pub f2_max: f64,
    /// profit of the cost-minimal witness
    pub f1_at_f2max: f64,
    /// negated cost of the profit-maximal witness
    pub f2_at_f1max: f64,
    pub decr_p: Option<f64>,
    pub decr_negc: Option<f64>,
    pub vbar1: Option<f64>,
    pub vbar2: Option<f64>,
    /// Max profit, minimal cost among profit maximizers.
    pub x1: ChoiceVector,
    /// Min cost, maximal profit among cost minimizers.
    pub x2: ChoiceVector,
    pub exact: bool,
}

pub(crate) struct Profile<T> {
    pub f1_max: T,
    pub f2_max: T,
    pub f1_at_f2max: T,
    pub f2_at_f1max: T,
    pub decr_p: Option<T>,
    pub decr_negc: Option<T>,
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
}

fn min_opt<T: Scalar>(acc: Option<T>, v: T) -> Option<T> {
    match acc {
        Some(a) if a <= v => Some(a),
        _ => Some(v),
    }
}

pub(crate) fn profile<T: Scalar>(view: &Numeric<T>, tol: Tolerance) -> Profile<T> {
    let mut x1 = Vec::with_capacity(view.k());
    let mut x2 = Vec::with_capacity(view.k());
    let mut decr_p = None;
    let mut decr_negc = None;
    for g in &view.groups {
        let mut pmax = g[0].0;
        let mut cmin = g[0].1;
        for &(p, c) in &g[1..] {
            if p > pmax {
                pmax = p;
            }
            if c < cmin {
                cmin = c;
            }
        }
        // Witnesses refined by the secondary objective; submax values are the
        // best values strictly away from the extremes.
        let mut w1: Option<usize> = None;
        let mut w2: Option<usize> = None;
        let mut psub: Option<T> = None;
        let mut csub: Option<T> = None;
        for (j, &(p, c)) in g.iter().enumerate() {
            if p.approx_eq(pmax, tol) {
                if w1.is_none_or(|w| c < g[w].1) {
                    w1 = Some(j);
                }
            } else if psub.is_none_or(|s| p > s) {
                psub = Some(p);
            }
            if c.approx_eq(cmin, tol) {
                if w2.is_none_or(|w| p > g[w].0) {
                    w2 = Some(j);
                }
            } else if csub.is_none_or(|s| c < s) {
                csub = Some(c);
            }
        }
        x1.push(w1.expect("group nonempty"));
        x2.push(w2.expect("group nonempty"));
        if let Some(s) = psub {
            decr_p = min_opt(decr_p, pmax - s);
        }
        if let Some(s) = csub {
            decr_negc = min_opt(decr_negc, s - cmin);
        }
    }
    let (f1_max, c1) = view.eval(&x1);
    let (f1_at_f2max, c2) = view.eval(&x2);
    Profile {
        f1_max,
        f2_max: -c2,
        f1_at_f2max,
        f2_at_f1max: -c1,
        decr_p,
        decr_negc,
        x1,
        x2,
    }
}

impl<T: Scalar> Profile<T> {
    /// Cleared-denominator weight pairs of the two extreme problems:
    /// `(F2 − F̄2, decr(p))` and `(decr(−c), F1 − F̄1)`.
    pub fn extreme_weights(&self, tol: Tolerance) -> Option<((T, T), (T, T))> {
        let d2 = self.f2_max - self.f2_at_f1max;
        let d1 = self.f1_max - self.f1_at_f2max;
        if d2.approx_eq(T::ZERO, tol) || d1.approx_eq(T::ZERO, tol) {
            return None;
        }
        Some(((d2, self.decr_p?), (self.decr_negc?, d1)))
    }

    fn publish(&self) -> SubmaxProfile {
        SubmaxProfile {
            f1_max: self.f1_max.to_f64(),
            f2_max: self.f2_max.to_f64(),
            f1_at_f2max: self.f1_at_f2max.to_f64(),
            f2_at_f1max: self.f2_at_f1max.to_f64(),
            decr_p: self.decr_p.map(Scalar::to_f64),
            decr_negc: self.decr_negc.map(Scalar::to_f64),
            vbar1: self.decr_p.map(|d| (self.f1_max - d).to_f64()),
            vbar2: self.decr_negc.map(|d| (self.f2_max - d).to_f64()),
            x1: ChoiceVector(self.x1.clone()),
            x2: ChoiceVector(self.x2.clone()),
            exact: T::EXACT,
        }
    }
}

pub fn submax_profile(instance: &Instance) -> SubmaxProfile {
    let tol = Tolerance::default();
    match Numeric::exact(instance) {
        Some(view) => profile(&view, tol).publish(),
        None => profile(&Numeric::real(instance), tol).publish(),
    }
}

/// Weights of the two extreme problems. Integer pairs on the exact path,
/// `(1, ε1)` and `(ε2, 1)` otherwise.
pub fn epsilon_weights(profile: &SubmaxProfile) -> Result<(ScalarWeights, ScalarWeights)> {
    let tol = Tolerance::default();
    let d2 = profile.f2_max - profile.f2_at_f1max;
    let d1 = profile.f1_max - profile.f1_at_f2max;
    if d2.approx_eq(0.0, tol) || d1.approx_eq(0.0, tol) {
        return Err(Error::DegenerateObjective);
    }
    let (Some(dp), Some(dc)) = (profile.decr_p, profile.decr_negc) else {
        return Err(Error::DegenerateObjective);
    };
    if profile.exact {
        Ok((
            ScalarWeights { wp: d2, wc: dp },
            ScalarWeights { wp: dc, wc: d1 },
        ))
    } else {
        Ok((
            ScalarWeights { wp: 1.0, wc: dp / d2 },
            ScalarWeights { wp: dc / d1, wc: 1.0 },
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Extreme {
    /// Profit maximal, then cost minimal.
    Profit,
    /// Cost minimal, then profit maximal.
    Cost,
}

/// Picks one tie member per group, favouring the given extreme.
pub(crate) fn pick_extreme<T: Scalar>(view: &Numeric<T>, ties: &[Vec<usize>], which: Extreme) -> Vec<usize> {
    view.groups
        .iter()
        .zip(ties)
        .map(|(g, t)| {
            let mut best = t[0];
            for &j in &t[1..] {
                let (p, c) = g[j];
                let (bp, bc) = g[best];
                let better = match which {
                    Extreme::Profit => p > bp || (p == bp && c < bc),
                    Extreme::Cost => c < bc || (c == bc && p > bp),
                };
                if better {
                    best = j;
                }
            }
            best
        })
        .collect()
}

pub(crate) fn solve_extreme<T: Scalar>(
    view: &Numeric<T>,
    (wp, wc): (T, T),
    which: Extreme,
    tol: Tolerance,
) -> Vec<usize> {
    let (wp, wc) = T::weight_pair(wp, wc);
    let s = scalarize(view, wp, wc, tol);
    pick_extreme(view, &s.ties, which)
}

fn extreme_public(
    instance: &Instance,
    weights: ScalarWeights,
    which: Extreme,
) -> (ChoiceVector, Outcome) {
    let tol = Tolerance::default();
    let picks = match (Numeric::exact(instance), weights.exact()) {
        (Some(view), Some((wp, wc))) if view.weights_fit(wp, wc) => {
            solve_extreme(&view, (wp, wc), which, tol)
        }
        _ => solve_extreme(&Numeric::real(instance), (weights.wp, weights.wc), which, tol),
    };
    let choice = ChoiceVector(picks);
    let outcome = crate::model::evaluate(instance, &choice).expect("valid picks");
    (choice, outcome)
}

/// Solves the profit-extreme problem with weights `(1, ε1)`; the returned
/// outcome attains the maximal total profit.
pub fn solve_p1(instance: &Instance, profile: &SubmaxProfile) -> Result<(ChoiceVector, Outcome)> {
    let (w1, _) = epsilon_weights(profile)?;
    Ok(extreme_public(instance, w1, Extreme::Profit))
}

/// Solves the cost-extreme problem with weights `(ε2, 1)`; the returned
/// outcome attains the minimal total cost.
pub fn solve_p2(instance: &Instance, profile: &SubmaxProfile) -> Result<(ChoiceVector, Outcome)> {
    let (_, w2) = epsilon_weights(profile)?;
    Ok(extreme_public(instance, w2, Extreme::Cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate, global_bounds, ChoiceIter};

    fn e1() -> Instance {
        Instance::new(
            vec![vec![(10.0, 4.0), (7.0, 2.0)], vec![(6.0, 5.0), (3.0, 1.0)]],
            6.0,
        )
        .unwrap()
    }

    fn w(wp: f64, wc: f64) -> ScalarWeights {
        ScalarWeights::new(wp, wc).unwrap()
    }

    #[test]
    fn weights_reject_invalid() {
        assert!(ScalarWeights::new(0.0, 0.0).is_none());
        assert!(ScalarWeights::new(-1.0, 1.0).is_none());
        assert_eq!(ScalarWeights::from_lambda(0.25), Some(w(0.25, 0.75)));
    }

    #[test]
    fn group_argmax_e1() {
        let inst = e1();
        let r = group_scalar_argmax(&inst.groups()[0], w(0.5, 0.5));
        assert_eq!(r.v, 3.0);
        assert_eq!(r.best_j, 0);
        assert_eq!(r.ties, vec![0]);

        let r = group_scalar_argmax(&inst.groups()[1], w(4.0, 3.0));
        assert_eq!(r.v, 9.0);
        assert_eq!(r.best_j, 0);
        assert_eq!(r.ties, vec![0, 1]);
    }

    #[test]
    fn pure_profit_weight_picks_max_profit() {
        let inst = Instance::new(vec![vec![(3.0, 9.0), (8.0, 1.0), (8.0, 7.0)]], 1.0).unwrap();
        let r = group_scalar_argmax(&inst.groups()[0], w(1.0, 0.0));
        assert_eq!(r.ties, vec![1, 2]);
        assert_eq!(r.v, 8.0);
    }

    #[test]
    fn solve_e1() {
        let inst = e1();
        let s = solve_scalarized(&inst, w(0.5, 0.5));
        assert_eq!(s.value, 4.0);
        assert_eq!(s.representative.picks(), &[0, 1]);
        let o = evaluate(&inst, &s.representative).unwrap();
        assert_eq!((o.f1, o.f2), (13.0, -5.0));
        assert_eq!(s.s_cardinality, 1);
        assert!(!s.exact);

        let s = solve_scalarized(&inst, w(4.0, 3.0));
        assert!(s.exact);
        assert_eq!(s.value, 37.0);
        assert_eq!(s.s_cardinality, 2);
        assert_eq!(s.per_group[1].ties, vec![0, 1]);
    }

    #[test]
    fn solve_single_choice() {
        let inst = Instance::new(vec![vec![(5.0, 2.0)]], 0.0).unwrap();
        for (wp, wc) in [(1.0, 1.0), (0.3, 0.7), (7.0, 0.0)] {
            let s = solve_scalarized(&inst, w(wp, wc));
            assert_eq!(s.value, wp * 5.0 - wc * 2.0);
            assert_eq!(s.representative.picks(), &[0]);
        }
    }

    #[test]
    fn profile_e1() {
        let p = submax_profile(&e1());
        assert_eq!(p.f1_max, 16.0);
        assert_eq!(p.f2_max, -3.0);
        assert_eq!(p.f2_at_f1max, -9.0);
        assert_eq!(p.f1_at_f2max, 10.0);
        assert_eq!(p.decr_p, Some(3.0));
        assert_eq!(p.decr_negc, Some(2.0));
        assert_eq!(p.vbar1, Some(13.0));
        assert_eq!(p.vbar2, Some(-5.0));
        assert_eq!(p.x1.picks(), &[0, 0]);
        assert_eq!(p.x2.picks(), &[1, 1]);
    }

    #[test]
    fn profile_constant_profits_has_no_decrease() {
        let inst = Instance::new(vec![vec![(4.0, 1.0), (4.0, 3.0)], vec![(2.0, 2.0)]], 3.0).unwrap();
        let p = submax_profile(&inst);
        assert_eq!(p.decr_p, None);
        assert_eq!(p.decr_negc, Some(2.0));
        // profit ties resolved toward cost
        assert_eq!(p.x1.picks(), &[0, 0]);
        assert!(matches!(epsilon_weights(&p), Err(Error::DegenerateObjective)));
    }

    #[test]
    fn profile_single_items() {
        let inst = Instance::new(vec![vec![(4.0, 1.0)], vec![(2.0, 2.0)]], 3.0).unwrap();
        let p = submax_profile(&inst);
        assert_eq!(p.decr_p, None);
        assert_eq!(p.decr_negc, None);
        assert_eq!(p.x1, p.x2);
        assert!(matches!(epsilon_weights(&p), Err(Error::DegenerateObjective)));
    }

    #[test]
    fn submax_skips_repeated_maximum() {
        let inst = Instance::new(vec![vec![(9.0, 1.0), (9.0, 2.0), (4.0, 3.0)]], 3.0).unwrap();
        let p = submax_profile(&inst);
        assert_eq!(p.decr_p, Some(5.0));
        assert_eq!(p.decr_negc, Some(1.0));
    }

    #[test]
    fn epsilon_e1() {
        let p = submax_profile(&e1());
        let (w1, w2) = epsilon_weights(&p).unwrap();
        // integer pairs equal (1, 0.5) and (1/3, 1) up to scale
        assert_eq!((w1.wp, w1.wc), (6.0, 3.0));
        assert_eq!((w2.wp, w2.wc), (2.0, 6.0));
        assert_eq!(w1.wc / w1.wp, 0.5);
        assert_eq!(w2.wp / w2.wc, 1.0 / 3.0);
    }

    #[test]
    fn epsilon_float_form() {
        let inst = Instance::new(
            vec![vec![(10.5, 4.0), (7.5, 2.0)], vec![(6.0, 5.0), (3.0, 1.0)]],
            6.0,
        )
        .unwrap();
        let p = submax_profile(&inst);
        assert!(!p.exact);
        let (w1, w2) = epsilon_weights(&p).unwrap();
        assert_eq!(w1.wp, 1.0);
        assert_eq!(w1.wc, 3.0 / 6.0);
        assert_eq!(w2.wc, 1.0);
        assert_eq!(w2.wp, 2.0 / 6.0);
        assert!(w1.wc > 0.0 && w2.wp > 0.0);
    }

    #[test]
    fn extremes_e1() {
        let inst = e1();
        let p = submax_profile(&inst);
        let (x1, o1) = solve_p1(&inst, &p).unwrap();
        assert_eq!(x1.picks(), &[0, 0]);
        assert_eq!((o1.f1, o1.f2), (16.0, -9.0));
        let (x2, o2) = solve_p2(&inst, &p).unwrap();
        assert_eq!(x2.picks(), &[1, 1]);
        assert_eq!((o2.f1, o2.f2), (10.0, -3.0));

        let gb = global_bounds(&inst);
        assert_eq!(o1.f1, gb.p_max);
        assert_eq!(-o2.f2, gb.c_min);
        // both nondominated among all outcomes
        for c in ChoiceIter::new(&inst) {
            let o = evaluate(&inst, &c.into()).unwrap();
            assert!(!o.dominates(&o1) && !o.dominates(&o2));
        }
    }

    #[test]
    fn extreme_tie_resolves_toward_own_objective() {
        // Group 0 gap equals decr(p) and its cheap item reaches c_min while
        // group 1 is already cost-minimal at max profit: P1 ties group 0.
        let inst = Instance::new(vec![vec![(10.0, 5.0), (9.0, 1.0)], vec![(4.0, 1.0)]], 3.0).unwrap();
        let p = submax_profile(&inst);
        let (w1, _) = epsilon_weights(&p).unwrap();
        let s = solve_scalarized(&inst, w1);
        assert_eq!(s.per_group[0].ties, vec![0, 1]);
        let (_, o1) = solve_p1(&inst, &p).unwrap();
        assert_eq!(o1.f1, 14.0);
        let (_, o2) = solve_p2(&inst, &p).unwrap();
        assert_eq!(o2.f2, -2.0);
    }
}
