use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cdist::talagrand_product;
use crate::error::{Error, Result};
use crate::rng::StreamFactory;
use crate::space::StateSpace;
use crate::spec::MultisliceSpec;
use crate::verdict::Verdict;

pub const MAX_TALAGRAND_STATES: u128 = 720;

const TALAGRAND_TOL: f64 = 1e-9;
const MAX_RANDOM_SET: usize = 16;
const MAX_ALL_SUBSETS_STATES: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TalagrandReport {
    pub spec: String,
    /// Number of sets `A` examined.
    pub trials: usize,
    /// `max_A ℙ(A) 𝔼 exp(d_T(·, A)² / 144)`.
    pub max_product: f64,
    /// Members of the maximizing set, as state indices.
    pub worst_set: Vec<usize>,
    pub verdict: Verdict,
}

fn report(spec: &MultisliceSpec, sets: impl Iterator<Item = Vec<usize>>, space: &StateSpace) -> Result<TalagrandReport> {
    let mut trials = 0;
    let mut max_product = f64::NEG_INFINITY;
    let mut worst_set = Vec::new();
    for set in sets {
        let p = talagrand_product(space, &set)?;
        trials += 1;
        if p > max_product {
            max_product = p;
            worst_set = set;
        }
    }
    Ok(TalagrandReport {
        spec: spec.label(),
        trials,
        max_product,
        worst_set,
        verdict: Verdict::from_pass(max_product <= 1.0 + TALAGRAND_TOL),
    })
}

/// Random sets `A`, of size `set_size` or, if absent, uniform in
/// `1..=min(|Ω|, 16)`.
pub fn run_talagrand_exact(
    spec: &MultisliceSpec,
    set_size: Option<usize>,
    trials: usize,
    seed: u64,
) -> Result<TalagrandReport> {
    let space = StateSpace::new(spec, MAX_TALAGRAND_STATES)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if let Some(s) = set_size {
        if s == 0 || s > space.len() {
            return Err(Error::InvalidArgument(format!(
                "set size must lie in 1..={}, got {s}",
                space.len()
            )));
        }
    }
    let streams = StreamFactory::new(seed);
    let size = space.len();
    let sets = (0..trials as u64).map(|i| {
        let mut rng = streams.stream(i);
        let k = set_size.unwrap_or_else(|| rng.random_range(1..=size.min(MAX_RANDOM_SET)));
        let mut set = rand::seq::index::sample(&mut rng, size, k).into_vec();
        set.sort_unstable();
        set
    });
    report(spec, sets, &space)
}

/// Every nonempty `A ⊆ Ω_κ`; only for `|Ω_κ| ≤ 12`.
pub fn talagrand_all_subsets(spec: &MultisliceSpec) -> Result<TalagrandReport> {
    let space = StateSpace::new(spec, MAX_ALL_SUBSETS_STATES as u128)?;
    let size = space.len();
    let sets = (1u32..1 << size).map(|mask| (0..size).filter(|&k| mask >> k & 1 == 1).collect());
    report(spec, sets, &space)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_subsets_small() {
        let spec = MultisliceSpec::with_index_values(vec![2, 1]).unwrap();
        let r = talagrand_all_subsets(&spec).unwrap();
        assert_eq!(r.trials, 7);
        assert_eq!(r.verdict, Verdict::Pass);
        // A = Ω gives exactly 1
        assert!((r.max_product - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_sets_are_seeded() {
        let spec = MultisliceSpec::with_index_values(vec![2, 2]).unwrap();
        let a = run_talagrand_exact(&spec, None, 5, 11).unwrap();
        let b = run_talagrand_exact(&spec, None, 5, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.verdict.is_ok());
        assert!(run_talagrand_exact(&spec, Some(7), 1, 0).is_err());
        let big = MultisliceSpec::with_index_values(vec![4, 4]).unwrap();
        assert!(run_talagrand_exact(&big, None, 1, 0).is_ok());
        let huge = MultisliceSpec::with_index_values(vec![5, 4, 1]).unwrap();
        assert!(run_talagrand_exact(&huge, None, 1, 0).is_err());
    }
}
