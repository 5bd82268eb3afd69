//! Seeded random instances.
//!
//! The generator is `Xoshiro256PlusPlus` seeded through SplitMix64
//! (`seed_from_u64`); uniform integers come from `gen_range`, which rejects
//! rather than reducing modulo the range.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Instance;

pub type GenRng = Xoshiro256PlusPlus;

pub const DEFAULT_RANGE: u64 = 10_000;
pub const DEFAULT_WCO_HALFWIDTH: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// profit and cost independent
    Unc,
    /// profit within `±h` of cost
    Wco,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Unc => "unc",
            Kind::Wco => "wco",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unc" => Ok(Kind::Unc),
            "wco" => Ok(Kind::Wco),
            _ => Err(Error::InvalidSpec(format!("unknown kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: Kind,
    pub k: usize,
    pub n: usize,
    pub r: u64,
    pub seed: u64,
    pub wco_halfwidth: u64,
}

impl GenSpec {
    pub fn new(kind: Kind, k: usize, n: usize, seed: u64) -> Self {
        GenSpec {
            kind,
            k,
            n,
            r: DEFAULT_RANGE,
            seed,
            wco_halfwidth: DEFAULT_WCO_HALFWIDTH,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.n == 0 || self.r == 0 {
            return Err(Error::InvalidSpec("k, n and R must be at least 1".into()));
        }
        if self.kind == Kind::Wco && self.r <= self.wco_halfwidth {
            return Err(Error::InvalidSpec("wco needs R > halfwidth".into()));
        }
        Ok(())
    }

    /// `<kind>_<k>_<n>_<seed>.mckp`
    pub fn file_name(&self) -> String {
        format!("{}_{}_{}_{}.mckp", self.kind.as_str(), self.k, self.n, self.seed)
    }
}

pub fn rng_from_seed(seed: u64) -> GenRng {
    GenRng::seed_from_u64(seed)
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    let r = spec.r;
    let h = spec.wco_halfwidth;
    let mut groups = Vec::with_capacity(spec.k);
    for _ in 0..spec.k {
        let mut items = Vec::with_capacity(spec.n);
        for _ in 0..spec.n {
            let (p, c) = match spec.kind {
                Kind::Unc => {
                    let p = rng.gen_range(1..=r);
                    let c = rng.gen_range(1..=r);
                    (p, c)
                }
                Kind::Wco => {
                    let c = rng.gen_range(1..=r);
                    let p = rng.gen_range(c.saturating_sub(h).max(1)..=c + h);
                    (p, c)
                }
            };
            items.push((p as f64, c as f64));
        }
        groups.push(items);
    }
    let costs: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| g.iter().map(|&(_, c)| c).collect())
        .collect();
    let b = compute_budget(&costs, &mut rng);
    Instance::new(groups, b)
}

/// `c ± U{0..⌊c/4⌋}` with `c = ½ Σ_i (min_j c_ij + max_j c_ij)`; the sign
/// is a fair coin. `c` keeps its `.5` when the sum is odd.
pub fn compute_budget<R: Rng + ?Sized>(costs: &[Vec<f64>], rng: &mut R) -> f64 {
    let sum: f64 = costs
        .iter()
        .map(|g| {
            let lo = g.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            lo + hi
        })
        .sum();
    let c = sum / 2.0;
    let r = (c / 4.0).floor() as u64;
    let plus = rng.gen_bool(0.5);
    let off = rng.gen_range(0..=r) as f64;
    if plus {
        c + off
    } else {
        c - off
    }
}
