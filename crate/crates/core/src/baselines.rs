//! Reference solvers: exhaustive enumeration, a cost-indexed dynamic program,
//! the LP-relaxation greedy with its upper bound, and a brute-force Pareto
//! front of the profit/cost bi-objective problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{global_bounds, sum_choice, ChoiceIter, ChoiceVector, Group, Instance, Outcome};

pub const DEFAULT_PRODUCT_CAP: u128 = 10_000_000;
pub const DEFAULT_DP_TABLE_BYTES: u128 = 2 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMethod {
    Brute,
    Dp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub opt_profit: f64,
    pub solution: ChoiceVector,
    pub method: ExactMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub greedy_profit: f64,
    pub greedy_solution: ChoiceVector,
    pub lp_upper_bound: f64,
}

fn check_product(instance: &Instance, cap: u128) -> Result<()> {
    let size = instance.choice_count();
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    Ok(())
}

/// Exhaustive search; profit ties go to the lexicographically smallest choice.
pub fn brute_force(instance: &Instance, product_cap: u128) -> Result<ExactResult> {
    check_product(instance, product_cap)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for picks in ChoiceIter::new(instance) {
        let (p, c) = sum_choice(instance, &picks);
        if c <= instance.budget() && best.as_ref().is_none_or(|(bp, _)| p > *bp) {
            best = Some((p, picks));
        }
    }
    let (opt_profit, picks) = best.ok_or(Error::InfeasibleInstance)?;
    Ok(ExactResult {
        opt_profit,
        solution: ChoiceVector(picks),
        method: ExactMethod::Brute,
    })
}

/// Cost-indexed dynamic program over groups.
///
/// Costs are shifted by each group's minimum so every reduced capacity
/// `0..=W`, `W = ⌊b⌋ − C_min`, has a feasible completion. Needs integral
/// items; a fractional budget is floored, which is exact for integral costs.
pub fn dp_exact(instance: &Instance) -> Result<ExactResult> {
    dp_exact_with(instance, DEFAULT_DP_TABLE_BYTES)
}

pub fn dp_exact_with(instance: &Instance, max_table_bytes: u128) -> Result<ExactResult> {
    if !instance.items_integral() {
        return Err(Error::NonIntegralData);
    }
    let gb = global_bounds(instance);
    if gb.c_min > instance.budget() {
        return Err(Error::InfeasibleInstance);
    }
    let cap = (instance.budget().floor().min(gb.c_max) - gb.c_min) as u128;
    let width = cap + 1;
    let needed = width
        .saturating_mul(instance.k() as u128)
        .saturating_mul(std::mem::size_of::<u32>() as u128)
        .saturating_add(width.saturating_mul(2 * std::mem::size_of::<i64>() as u128));
    if needed > max_table_bytes {
        return Err(Error::MemoryBudgetExceeded {
            needed,
            budget: max_table_bytes,
        });
    }
    let width = width as usize;

    let groups: Vec<Vec<(i64, usize)>> = instance
        .groups()
        .iter()
        .map(|g| {
            let cmin = g.items.iter().map(|it| it.cost).fold(f64::INFINITY, f64::min);
            g.items
                .iter()
                .map(|it| (it.profit as i64, (it.cost - cmin) as usize))
                .collect()
        })
        .collect();

    const NONE: i64 = i64::MIN;
    // prev[w]: best profit over the groups so far with reduced cost <= w
    let mut prev = vec![0i64; width];
    let mut next = vec![NONE; width];
    let mut choice = vec![0u32; instance.k() * width];
    for (i, items) in groups.iter().enumerate() {
        let row = &mut choice[i * width..(i + 1) * width];
        next.fill(NONE);
        for (j, &(p, c)) in items.iter().enumerate() {
            if c >= width {
                continue;
            }
            for w in c..width {
                let cand = prev[w - c] + p;
                if cand > next[w] {
                    next[w] = cand;
                    row[w] = j as u32;
                }
            }
        }
        std::mem::swap(&mut prev, &mut next);
    }

    let mut picks = vec![0usize; instance.k()];
    let mut w = width - 1;
    for i in (0..instance.k()).rev() {
        let j = choice[i * width + w] as usize;
        picks[i] = j;
        w -= groups[i][j].1;
    }
    let (profit, _) = sum_choice(instance, &picks);
    debug_assert_eq!(profit as i64, prev[width - 1]);
    Ok(ExactResult {
        opt_profit: profit,
        solution: ChoiceVector(picks),
        method: ExactMethod::Dp,
    })
}

/// A point of a group's LP-efficient frontier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierItem {
    pub index: usize,
    pub profit: f64,
    pub cost: f64,
}

/// Items on the upper convex hull of `(cost, profit)`, by increasing cost,
/// with strictly increasing profit and strictly decreasing incremental
/// efficiency.
pub fn lp_dominance_filter(group: &Group) -> Vec<FrontierItem> {
    let mut items: Vec<FrontierItem> = group
        .items
        .iter()
        .enumerate()
        .map(|(index, it)| FrontierItem {
            index,
            profit: it.profit,
            cost: it.cost,
        })
        .collect();
    items.sort_by(|a, b| {
        a.cost
            .total_cmp(&b.cost)
            .then(b.profit.total_cmp(&a.profit))
            .then(a.index.cmp(&b.index))
    });
    let mut hull: Vec<FrontierItem> = Vec::with_capacity(items.len());
    for it in items {
        if let Some(last) = hull.last() {
            // dominated: no more profit for at least the same cost
            if it.profit <= last.profit {
                continue;
            }
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b unless slope(a, b) > slope(b, it)
            let lhs = (b.profit - a.profit) * (it.cost - b.cost);
            let rhs = (it.profit - b.profit) * (b.cost - a.cost);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(it);
    }
    hull
}

struct Upgrade {
    group: usize,
    /// position on the group's frontier reached by this upgrade
    to: usize,
    dp: f64,
    dc: f64,
}

/// LP-relaxation greedy over the dominance-filtered groups.
pub fn greedy(instance: &Instance) -> Result<GreedyResult> {
    let frontiers: Vec<Vec<FrontierItem>> = instance.groups().iter().map(lp_dominance_filter).collect();
    let mut pos = vec![0usize; frontiers.len()];
    let mut profit: f64 = frontiers.iter().map(|f| f[0].profit).sum();
    let mut cost: f64 = frontiers.iter().map(|f| f[0].cost).sum();
    if cost > instance.budget() {
        return Err(Error::InfeasibleInstance);
    }
    let mut upgrades: Vec<Upgrade> = frontiers
        .iter()
        .enumerate()
        .flat_map(|(g, f)| {
            f.windows(2).enumerate().map(move |(t, w)| Upgrade {
                group: g,
                to: t + 1,
                dp: w[1].profit - w[0].profit,
                dc: w[1].cost - w[0].cost,
            })
        })
        .collect();
    upgrades.sort_by(|a, b| {
        // a.dp/a.dc > b.dp/b.dc, compared without division
        (b.dp * a.dc)
            .total_cmp(&(a.dp * b.dc))
            .then(a.dc.total_cmp(&b.dc))
            .then(a.group.cmp(&b.group))
            .then(a.to.cmp(&b.to))
    });

    let mut lp_upper_bound = None;
    let mut frozen = vec![false; frontiers.len()];
    for up in &upgrades {
        if frozen[up.group] || pos[up.group] + 1 != up.to {
            continue;
        }
        let residual = instance.budget() - cost;
        if up.dc <= residual {
            profit += up.dp;
            cost += up.dc;
            pos[up.group] = up.to;
        } else {
            if lp_upper_bound.is_none() {
                lp_upper_bound = Some(profit + residual * up.dp / up.dc);
            }
            frozen[up.group] = true;
        }
    }
    let picks: Vec<usize> = frontiers.iter().zip(&pos).map(|(f, &p)| f[p].index).collect();
    let (greedy_profit, _) = sum_choice(instance, &picks);
    Ok(GreedyResult {
        greedy_profit,
        greedy_solution: ChoiceVector(picks),
        lp_upper_bound: lp_upper_bound.unwrap_or(greedy_profit),
    })
}

/// Nondominated outcomes by decreasing `f1`, each with its lexicographically
/// smallest witness.
pub fn pareto_front(instance: &Instance, product_cap: u128) -> Result<Vec<(Outcome, ChoiceVector)>> {
    check_product(instance, product_cap)?;
    let mut all: Vec<(Outcome, Vec<usize>)> = ChoiceIter::new(instance)
        .map(|picks| {
            let (p, c) = sum_choice(instance, &picks);
            (Outcome { f1: p, f2: -c }, picks)
        })
        .collect();
    // stable: equal outcomes keep enumeration (lexicographic) order
    all.sort_by(|(a, _), (b, _)| b.f1.total_cmp(&a.f1).then(b.f2.total_cmp(&a.f2)));
    let mut front: Vec<(Outcome, ChoiceVector)> = Vec::new();
    let mut best_f2 = f64::NEG_INFINITY;
    for (o, picks) in all {
        if o.f2 > best_f2 {
            best_f2 = o.f2;
            front.push((o, ChoiceVector(picks)));
        }
    }
    Ok(front)
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
    fn brute_e1() {
        let r = brute_force(&e1(6.0), DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(r.opt_profit, 13.0);
        assert_eq!(r.solution.picks(), &[0, 1]);
        assert!(matches!(
            brute_force(&e1(2.0), DEFAULT_PRODUCT_CAP),
            Err(Error::InfeasibleInstance)
        ));
        assert!(matches!(brute_force(&e1(6.0), 3), Err(Error::TooLarge { size: 4, cap: 3 })));
    }

    #[test]
    fn brute_single_group() {
        let inst = Instance::new(vec![vec![(3.0, 1.0), (9.0, 5.0), (7.0, 4.0)]], 4.0).unwrap();
        let r = brute_force(&inst, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(r.opt_profit, 7.0);
        assert_eq!(r.solution.picks(), &[2]);
    }

    #[test]
    fn dp_e1() {
        let r = dp_exact(&e1(6.0)).unwrap();
        assert_eq!(r.opt_profit, 13.0);
        assert_eq!(r.method, ExactMethod::Dp);
        assert!(matches!(dp_exact(&e1(2.0)), Err(Error::InfeasibleInstance)));
        let r = dp_exact(&e1(9.0)).unwrap();
        assert_eq!(r.opt_profit, 16.0);
        // a fractional budget floors
        assert_eq!(dp_exact(&e1(6.5)).unwrap().opt_profit, 13.0);
    }

    #[test]
    fn dp_rejects_fractional_items_and_memory() {
        let inst = Instance::new(vec![vec![(1.5, 1.0)]], 1.0).unwrap();
        assert!(matches!(dp_exact(&inst), Err(Error::NonIntegralData)));
        let inst = Instance::new(vec![vec![(1.0, 0.0), (2.0, 1e9)]], 1e9).unwrap();
        assert!(matches!(
            dp_exact_with(&inst, 1 << 20),
            Err(Error::MemoryBudgetExceeded { .. })
        ));
    }

    #[test]
    fn frontier_examples() {
        let g = Group {
            items: vec![
                crate::model::Item { profit: 10.0, cost: 4.0 },
                crate::model::Item { profit: 7.0, cost: 2.0 },
            ],
        };
        let f = lp_dominance_filter(&g);
        assert_eq!(f.iter().map(|x| x.index).collect::<Vec<_>>(), vec![1, 0]);
        assert_eq!((f[1].profit - f[0].profit) / (f[1].cost - f[0].cost), 1.5);

        let inst = Instance::new(vec![vec![(5.0, 3.0), (4.0, 3.0)]], 3.0).unwrap();
        let f = lp_dominance_filter(&inst.groups()[0]);
        assert_eq!(f.iter().map(|x| x.index).collect::<Vec<_>>(), vec![0]);

        let inst = Instance::new(vec![vec![(1.0, 1.0), (2.0, 2.0), (10.0, 3.0)]], 3.0).unwrap();
        let f = lp_dominance_filter(&inst.groups()[0]);
        assert_eq!(f.iter().map(|x| x.index).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn frontier_drops_collinear_points() {
        let inst = Instance::new(vec![vec![(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]], 3.0).unwrap();
        let f = lp_dominance_filter(&inst.groups()[0]);
        assert_eq!(f.iter().map(|x| x.index).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn greedy_e1() {
        let r = greedy(&e1(6.0)).unwrap();
        assert_eq!(r.greedy_profit, 13.0);
        assert_eq!(r.greedy_solution.picks(), &[0, 1]);
        assert_eq!(r.lp_upper_bound, 13.75);
        let r = greedy(&e1(9.0)).unwrap();
        assert_eq!((r.greedy_profit, r.lp_upper_bound), (16.0, 16.0));
        assert!(matches!(greedy(&e1(2.0)), Err(Error::InfeasibleInstance)));
    }

    #[test]
    fn pareto_e1() {
        let front = pareto_front(&e1(6.0), DEFAULT_PRODUCT_CAP).unwrap();
        let outs: Vec<(f64, f64)> = front.iter().map(|(o, _)| (o.f1, o.f2)).collect();
        assert_eq!(outs, vec![(16.0, -9.0), (13.0, -5.0), (10.0, -3.0)]);
        let single = Instance::new(vec![vec![(2.0, 1.0)]], 0.0).unwrap();
        assert_eq!(pareto_front(&single, 10).unwrap().len(), 1);
    }
}
