//! Instance data model: item groups, choice vectors and objective evaluation.
//!
//! A choice picks exactly one item per group, so the choice space is the
//! Cartesian product of the groups. Outcomes live in the bi-objective space
//! `(profit, -cost)`, both to be maximized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest magnitude at which every integer is exactly representable in `f64`.
pub(crate) const MAX_EXACT_F64: f64 = 9_007_199_254_740_992.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub profit: f64,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub items: Vec<Item>,
}

impl Group {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueClass {
    AllIntegral,
    Real,
}

/// A validated multiple-choice knapsack instance. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    groups: Vec<Group>,
    budget: f64,
    value_class: ValueClass,
}

pub(crate) fn is_integral(v: f64) -> bool {
    v.fract() == 0.0 && v.abs() <= MAX_EXACT_F64
}

fn check_value(v: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFiniteValue { what: what() });
    }
    if v < 0.0 {
        return Err(Error::NegativeValue { what: what(), value: v });
    }
    // normalizes -0.0
    Ok(v + 0.0)
}

/// Validates raw `(profit, cost)` groups and a budget into an [`Instance`].
pub fn validate_instance(raw: Vec<Vec<(f64, f64)>>, budget: f64) -> Result<Instance> {
    if raw.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let budget = check_value(budget, || "budget".to_string())?;
    let mut groups = Vec::with_capacity(raw.len());
    for (i, items) in raw.into_iter().enumerate() {
        if items.is_empty() {
            return Err(Error::EmptyGroup { group: i });
        }
        let items = items
            .into_iter()
            .enumerate()
            .map(|(j, (p, c))| {
                Ok(Item {
                    profit: check_value(p, || format!("profit of item {j} in group {i}"))?,
                    cost: check_value(c, || format!("cost of item {j} in group {i}"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        groups.push(Group { items });
    }
    let integral = is_integral(budget)
        && groups
            .iter()
            .flat_map(|g| &g.items)
            .all(|it| is_integral(it.profit) && is_integral(it.cost));
    Ok(Instance {
        groups,
        budget,
        value_class: if integral {
            ValueClass::AllIntegral
        } else {
            ValueClass::Real
        },
    })
}

impl Instance {
    pub fn new(raw: Vec<Vec<(f64, f64)>>, budget: f64) -> Result<Self> {
        validate_instance(raw, budget)
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Number of groups `k`.
    pub fn k(&self) -> usize {
        self.groups.len()
    }

    /// Total item count `n`.
    pub fn n(&self) -> usize {
        self.groups.iter().map(Group::len).sum()
    }

    pub fn max_group_len(&self) -> usize {
        self.groups.iter().map(Group::len).max().unwrap_or(0)
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn value_class(&self) -> ValueClass {
        self.value_class
    }

    /// Whether every profit and cost is integral (the budget may be real).
    pub fn items_integral(&self) -> bool {
        self.groups
            .iter()
            .flat_map(|g| &g.items)
            .all(|it| is_integral(it.profit) && is_integral(it.cost))
    }

    /// The same items with a different budget.
    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        let raw = self
            .groups
            .iter()
            .map(|g| g.items.iter().map(|it| (it.profit, it.cost)).collect())
            .collect();
        validate_instance(raw, budget)
    }

    /// Size of the choice space `Π n_i`, saturating.
    pub fn choice_count(&self) -> u128 {
        self.groups
            .iter()
            .fold(1u128, |acc, g| acc.saturating_mul(g.len() as u128))
    }

    pub fn item(&self, group: usize, pick: usize) -> Item {
        self.groups[group].items[pick]
    }

    pub fn check_choice(&self, choice: &ChoiceVector) -> Result<()> {
        if choice.0.len() != self.k() {
            return Err(Error::ChoiceLength {
                expected: self.k(),
                found: choice.0.len(),
            });
        }
        for (group, (&pick, g)) in choice.0.iter().zip(&self.groups).enumerate() {
            if pick >= g.len() {
                return Err(Error::IndexOutOfRange {
                    group,
                    pick,
                    len: g.len(),
                });
            }
        }
        Ok(())
    }
}

/// One item index per group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChoiceVector(pub Vec<usize>);

impl ChoiceVector {
    pub fn picks(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for ChoiceVector {
    fn from(v: Vec<usize>) -> Self {
        ChoiceVector(v)
    }
}

/// Objective pair `(f1, f2) = (total profit, -total cost)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub f1: f64,
    pub f2: f64,
}

impl Outcome {
    pub fn cost(&self) -> f64 {
        -self.f2
    }

    /// Pareto dominance for maximization of both components.
    pub fn dominates(&self, other: &Outcome) -> bool {
        self.f1 >= other.f1 && self.f2 >= other.f2 && (self.f1 > other.f1 || self.f2 > other.f2)
    }
}

/// Sums profit and cost in group order. Every feasibility decision in the
/// crate goes through this summation so that float results agree bit for bit.
pub(crate) fn sum_choice(instance: &Instance, picks: &[usize]) -> (f64, f64) {
    let mut profit = 0.0;
    let mut cost = 0.0;
    for (g, &j) in instance.groups.iter().zip(picks) {
        profit += g.items[j].profit;
        cost += g.items[j].cost;
    }
    (profit, cost)
}

pub fn evaluate(instance: &Instance, choice: &ChoiceVector) -> Result<Outcome> {
    instance.check_choice(choice)?;
    let (profit, cost) = sum_choice(instance, &choice.0);
    Ok(Outcome {
        f1: profit,
        f2: -cost,
    })
}

pub fn is_feasible(instance: &Instance, choice: &ChoiceVector) -> Result<bool> {
    let out = evaluate(instance, choice)?;
    Ok(-out.f2 <= instance.budget)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalBounds {
    pub c_min: f64,
    pub c_max: f64,
    pub p_max: f64,
    pub c_min_witness: ChoiceVector,
    pub c_max_witness: ChoiceVector,
    pub p_max_witness: ChoiceVector,
}

impl GlobalBounds {
    /// Budget strictly inside `[c_min, c_max)`: neither infeasible nor trivially solvable.
    pub fn is_nontrivial(&self, budget: f64) -> bool {
        self.c_min <= budget && budget < self.c_max
    }
}

fn arg_by(items: &[Item], better: impl Fn(&Item, &Item) -> bool) -> usize {
    let mut best = 0;
    for (j, it) in items.iter().enumerate().skip(1) {
        if better(it, &items[best]) {
            best = j;
        }
    }
    best
}

/// Per-group argmin/argmax sums; witnesses take the lowest index on ties.
pub fn global_bounds(instance: &Instance) -> GlobalBounds {
    let c_min_witness: Vec<usize> = instance
        .groups
        .iter()
        .map(|g| arg_by(&g.items, |a, b| a.cost < b.cost))
        .collect();
    let c_max_witness: Vec<usize> = instance
        .groups
        .iter()
        .map(|g| arg_by(&g.items, |a, b| a.cost > b.cost))
        .collect();
    let p_max_witness: Vec<usize> = instance
        .groups
        .iter()
        .map(|g| arg_by(&g.items, |a, b| a.profit > b.profit))
        .collect();
    GlobalBounds {
        c_min: sum_choice(instance, &c_min_witness).1,
        c_max: sum_choice(instance, &c_max_witness).1,
        p_max: sum_choice(instance, &p_max_witness).0,
        c_min_witness: ChoiceVector(c_min_witness),
        c_max_witness: ChoiceVector(c_max_witness),
        p_max_witness: ChoiceVector(p_max_witness),
    }
}

/// Iterates every choice in lexicographic order (last group varies fastest).
pub struct ChoiceIter {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ChoiceIter {
    pub fn new(instance: &Instance) -> Self {
        Self::from_sizes(instance.groups.iter().map(Group::len).collect())
    }

    pub fn from_sizes(sizes: Vec<usize>) -> Self {
        let next = if sizes.iter().all(|&s| s > 0) {
            Some(vec![0; sizes.len()])
        } else {
            None
        };
        ChoiceIter { sizes, next }
    }
}

impl Iterator for ChoiceIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.sizes[i] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[i] = 0;
        }
        Some(current)
    }
}
