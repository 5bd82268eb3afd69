#![allow(dead_code)]

use mckp_core::gen::{compute_budget, rng_from_seed};
use mckp_core::{Instance, Outcome};
use num_rational::Ratio;
use rand::Rng;

pub type Q = Ratio<i128>;

/// Small integral instance: `k ∈ [1,6]`, `n_i ∈ [1,5]`, values in `[1,50]`,
/// budget from the generator's budget rule.
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = rng_from_seed(seed ^ 0x5eed_0000);
    let k = rng.gen_range(1..=6);
    let groups: Vec<Vec<(f64, f64)>> = (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            (0..n)
                .map(|_| (rng.gen_range(1..=50) as f64, rng.gen_range(1..=50) as f64))
                .collect()
        })
        .collect();
    let costs: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| g.iter().map(|&(_, c)| c).collect())
        .collect();
    let b = compute_budget(&costs, &mut rng);
    Instance::new(groups, b).unwrap()
}

pub fn corpus(count: u64) -> impl Iterator<Item = (u64, Instance)> {
    (0..count).map(|s| (s, small_instance(s)))
}

/// Exact rational of an `f64` holding an integer or half-integer.
pub fn q(x: f64) -> Q {
    let twice = x * 2.0;
    assert_eq!(twice.fract(), 0.0, "{x} is not a half-integer");
    Q::new(twice as i128, 2)
}

/// `f1(x̂) + (a1 − f1(x̂))·(f2(x̂) + b)/(f2(x̂) − b1)` in exact arithmetic.
pub fn ub_exact(anchor: Outcome, x: Outcome, budget: f64) -> Q {
    let (a1, b1, f1, f2, b) = (q(anchor.f1), q(anchor.f2), q(x.f1), q(x.f2), q(budget));
    f1 + (a1 - f1) * (f2 + b) / (f2 - b1)
}

pub fn q_to_f64(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}
