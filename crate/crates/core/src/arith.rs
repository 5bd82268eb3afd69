//! Numeric backends for the solvers.
//!
//! Instances whose items are all integral run on `i128` with exact
//! comparisons; everything else runs on `f64` with a relative tolerance.
//! The solver code is generic over [`Scalar`] so both paths share one
//! implementation.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::model::{is_integral, Instance};

/// Relative comparison tolerance for the float path: `x` and `y` compare
/// equal when `|x - y| <= rel * max(1, |x|, |y|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-9)
    }
}

impl Tolerance {
    fn abs(self, x: f64, y: f64) -> f64 {
        self.0 * 1f64.max(x.abs()).max(y.abs())
    }
}

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const EXACT: bool;

    fn to_f64(self) -> f64;

    fn compare(self, other: Self, tol: Tolerance) -> Ordering;

    /// `cost <= budget`, decided exactly.
    fn fits_budget(cost: Self, budget: f64) -> bool;

    /// `cost == budget`, only ever true for a cost that also fits.
    fn hits_budget(cost: Self, budget: f64, tol: Tolerance) -> bool;

    /// `cost <= budget` with slack for summation order on the float path.
    fn may_fit_budget(cost: Self, budget: f64, tol: Tolerance) -> bool;

    /// Weight pair used for a scalarized solve: as-is on the exact path,
    /// normalized to sum one on the float path.
    fn weight_pair(wp: Self, wc: Self) -> (Self, Self);

    /// Value relative to the weight sum, for reporting.
    fn per_unit(value: Self, weight_sum: Self) -> f64;

    fn approx_eq(self, other: Self, tol: Tolerance) -> bool {
        self.compare(other, tol) == Ordering::Equal
    }

    fn approx_gt(self, other: Self, tol: Tolerance) -> bool {
        self.compare(other, tol) == Ordering::Greater
    }
}

impl Scalar for i128 {
    const ZERO: Self = 0;
    const EXACT: bool = true;

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn compare(self, other: Self, _tol: Tolerance) -> Ordering {
        self.cmp(&other)
    }

    fn fits_budget(cost: Self, budget: f64) -> bool {
        let floor = budget.floor();
        if floor >= 1e38 {
            return true;
        }
        cost <= floor as i128
    }

    fn hits_budget(cost: Self, budget: f64, _tol: Tolerance) -> bool {
        budget.fract() == 0.0 && budget < 1e38 && cost == budget as i128
    }

    fn may_fit_budget(cost: Self, budget: f64, _tol: Tolerance) -> bool {
        Self::fits_budget(cost, budget)
    }

    fn weight_pair(wp: Self, wc: Self) -> (Self, Self) {
        (wp, wc)
    }

    fn per_unit(value: Self, weight_sum: Self) -> f64 {
        value as f64 / weight_sum as f64
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const EXACT: bool = false;

    fn to_f64(self) -> f64 {
        self
    }

    fn compare(self, other: Self, tol: Tolerance) -> Ordering {
        if (self - other).abs() <= tol.abs(self, other) {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn fits_budget(cost: Self, budget: f64) -> bool {
        cost <= budget
    }

    fn hits_budget(cost: Self, budget: f64, tol: Tolerance) -> bool {
        cost <= budget && (budget - cost) <= tol.abs(cost, budget)
    }

    fn may_fit_budget(cost: Self, budget: f64, tol: Tolerance) -> bool {
        cost <= budget + tol.abs(cost, budget)
    }

    fn weight_pair(wp: Self, wc: Self) -> (Self, Self) {
        let s = wp + wc;
        (wp / s, wc / s)
    }

    fn per_unit(value: Self, weight_sum: Self) -> f64 {
        value / weight_sum
    }
}

/// Item data of an instance in a numeric backend: `(profit, cost)` per item.
#[derive(Clone, Debug)]
pub struct Numeric<T> {
    pub groups: Vec<Vec<(T, T)>>,
}

/// Items whose largest total profit or cost exceeds this cannot run on the
/// exact path: weights are bounded by these totals and scalarized sums by
/// twice their square, which must stay inside `i128`.
const EXACT_TOTAL_LIMIT: i128 = 1 << 61;

impl Numeric<i128> {
    /// Exact view, or `None` when items are non-integral or too large.
    pub fn exact(instance: &Instance) -> Option<Self> {
        if !instance.items_integral() {
            return None;
        }
        let groups: Vec<Vec<(i128, i128)>> = instance
            .groups()
            .iter()
            .map(|g| {
                g.items
                    .iter()
                    .map(|it| (it.profit as i128, it.cost as i128))
                    .collect()
            })
            .collect();
        let view = Numeric { groups };
        let (p, c) = view.max_totals();
        if p > EXACT_TOTAL_LIMIT || c > EXACT_TOTAL_LIMIT {
            return None;
        }
        Some(view)
    }

    /// Whether `Σ_i max_j (|wp p_ij| + |wc c_ij|)` fits comfortably in `i128`.
    pub fn weights_fit(&self, wp: i128, wc: i128) -> bool {
        let mut total: i128 = 0;
        for g in &self.groups {
            let mut best: i128 = 0;
            for &(p, c) in g {
                let term = wp
                    .checked_abs()
                    .and_then(|a| a.checked_mul(p))
                    .zip(wc.checked_abs().and_then(|a| a.checked_mul(c)))
                    .and_then(|(x, y)| x.checked_add(y));
                match term {
                    Some(t) => best = best.max(t),
                    None => return false,
                }
            }
            match total.checked_add(best) {
                Some(t) if t < i128::MAX / 4 => total = t,
                _ => return false,
            }
        }
        true
    }
}

impl Numeric<f64> {
    pub fn real(instance: &Instance) -> Self {
        Numeric {
            groups: instance
                .groups()
                .iter()
                .map(|g| g.items.iter().map(|it| (it.profit, it.cost)).collect())
                .collect(),
        }
    }
}

impl<T: Scalar> Numeric<T> {
    pub fn k(&self) -> usize {
        self.groups.len()
    }

    /// `(Σ profit, Σ cost)` summed in group order.
    pub fn eval(&self, picks: &[usize]) -> (T, T) {
        let mut p = T::ZERO;
        let mut c = T::ZERO;
        for (g, &j) in self.groups.iter().zip(picks) {
            p = p + g[j].0;
            c = c + g[j].1;
        }
        (p, c)
    }

    /// `(Σ_i max_j p_ij, Σ_i max_j c_ij)`.
    pub fn max_totals(&self) -> (T, T) {
        let mut p = T::ZERO;
        let mut c = T::ZERO;
        for g in &self.groups {
            let mut mp = g[0].0;
            let mut mc = g[0].1;
            for &(pi, ci) in &g[1..] {
                if pi > mp {
                    mp = pi;
                }
                if ci > mc {
                    mc = ci;
                }
            }
            p = p + mp;
            c = c + mc;
        }
        (p, c)
    }
}

/// Converts an `f64` weight to `i128` when it is integral and in range.
pub(crate) fn integral_weight(w: f64) -> Option<i128> {
    if is_integral(w) {
        Some(w as i128)
    } else {
        None
    }
}
