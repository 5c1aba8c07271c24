//! Seeded random corpora run through every check.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::checks::*;
use super::prefix::{check_swor_lsi, check_swor_mlsi};
use super::projection::{Coarsening, MAX_PERMUTATION_POSITIONS};
use super::{CheckReport, DifferenceOperatorId, FunctionTable, PrefixTable};
use crate::error::Result;
use crate::rng::StreamFactory;
use crate::space::{PrefixSpace, StateSpace};
use crate::spec::MultisliceSpec;
use crate::statistics::MultilinearPolynomial;

/// Largest state space a suite will enumerate.
pub const SUITE_MAX_STATES: u128 = 720;

/// The small specs every suite covers.
pub fn default_specs() -> Vec<MultisliceSpec> {
    let mut specs: Vec<MultisliceSpec> = [
        vec![1, 1],
        vec![2, 1],
        vec![2, 2],
        vec![3, 2],
        vec![2, 2, 1],
        vec![1, 1, 1, 1],
        vec![3, 3],
        vec![4, 2],
        vec![3, 2, 1],
        vec![2, 2, 2],
        vec![1, 1, 1, 1, 1],
        vec![2, 2, 1, 1],
        vec![4, 4],
        vec![5, 3],
        vec![3, 2, 2],
        vec![4, 3, 1],
        vec![3, 2, 1, 1],
        vec![3, 3, 2],
        vec![2, 2, 2, 1],
        vec![1, 1, 1, 1, 1, 1],
    ]
    .into_iter()
    .map(|k| MultisliceSpec::with_index_values(k).expect("valid"))
    .collect();
    specs.push(MultisliceSpec::new(vec![2, 1, 2], vec![-1.0, 0.5, 2.0]).expect("valid"));
    specs
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteOptions {
    /// Random functions per spec (and per prefix length).
    pub functions: usize,
    /// Random multilinear polynomials per spec.
    pub polynomials: usize,
    pub seed: u64,
    pub beckner_exponents: Vec<f64>,
    pub moment_exponents: Vec<f64>,
    pub prefix_checks: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            functions: 100,
            polynomials: 50,
            seed: 20_240_601,
            beckner_exponents: vec![1.25, 1.5, 2.0],
            moment_exponents: vec![2.0, 3.0, 4.0],
            prefix_checks: true,
        }
    }
}

/// All reports for one spec plus the empirical LSI constant.
#[derive(Debug, Clone)]
pub struct SpecSuite {
    pub spec: MultisliceSpec,
    pub reports: Vec<CheckReport>,
    /// `max_f Ent(f²) / (2 𝔼Γ(f)²)` over the corpus.
    pub best_lsi_constant: f64,
}

impl SpecSuite {
    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| !r.passed())
    }
}

fn spec_tag(spec: &MultisliceSpec) -> u64 {
    spec.label()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// A multilinear polynomial of degree at most 3 with up to `2N` monomials.
pub fn random_polynomial<R: Rng + ?Sized>(num_vars: usize, rng: &mut R) -> MultilinearPolynomial {
    let mut p = MultilinearPolynomial::new(num_vars);
    let terms = rng.random_range(1..=2 * num_vars);
    for _ in 0..terms {
        let order = rng.random_range(0..=3usize.min(num_vars));
        let idx = rand::seq::index::sample(rng, num_vars, order).into_vec();
        let c = rng.random_range(-1.0..=1.0);
        p.add_term(&idx, c).expect("distinct in-range indices");
    }
    p
}

/// A random function of the value counts, hence symmetric.
fn random_symmetric<'a, R: Rng + ?Sized>(space: &'a PrefixSpace, rng: &mut R) -> PrefixTable<'a> {
    let mut by_counts: HashMap<Vec<usize>, f64> = HashMap::new();
    let values = space
        .states()
        .iter()
        .map(|s| {
            let mut key = s.clone();
            key.sort_unstable();
            *by_counts.entry(key).or_insert_with(|| rng.random_range(-1.0..=1.0))
        })
        .collect();
    PrefixTable::new(space, values).expect("finite values")
}

/// Runs every check on a seeded corpus for one spec.
pub fn run_spec(spec: &MultisliceSpec, opts: &SuiteOptions) -> Result<SpecSuite> {
    let space = StateSpace::new(spec, SUITE_MAX_STATES)?;
    let streams = StreamFactory::new(opts.seed).derive(spec_tag(spec));
    let coarsening = if spec.total() <= MAX_PERMUTATION_POSITIONS {
        Some(Coarsening::new(&space)?)
    } else {
        None
    };
    let lsi_sigma = lsi_sigma_sq(spec);
    let mut reports = Vec::new();
    let mut best = 0.0f64;

    for s in 0..opts.functions as u64 {
        let mut rng = streams.stream(s);
        let f = FunctionTable::random(&space, &mut rng);
        reports.push(check_lsi(&f)?);
        reports.push(check_poincare(&f, lsi_sigma)?);
        if let Some(r) = lsi_ratio(&f)? {
            best = best.max(r);
        }
        reports.push(check_mlsi(&f, DifferenceOperatorId::Gamma, 4.0)?);
        reports.push(check_mlsi(&f, DifferenceOperatorId::GammaPlus, 8.0)?);
        let positive = f.map(f64::exp)?;
        for &p in &opts.beckner_exponents {
            reports.push(check_beckner(&positive, p)?);
        }
        for &p in &opts.moment_exponents {
            reports.push(check_moment_estimate(&f, p)?);
        }
        reports.push(check_local_variance_identity(&f)?);
        if let Some(c) = &coarsening {
            let g = FunctionTable::random(&space, &mut rng);
            reports.push(c.check(&f, &g)?);
        }
    }

    let poly_streams = streams.derive(1);
    for s in 0..opts.polynomials as u64 {
        let poly = random_polynomial(spec.total(), &mut poly_streams.stream(s));
        reports.push(check_gradient_estimate(&poly, &space)?);
    }

    let convex_streams = streams.derive(2);
    for s in 0..opts.functions.min(10) as u64 {
        let mut rng = convex_streams.stream(s);
        let n = spec.total();
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let linear = |w: &[f64]| w.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>();
        reports.push(check_convex_mlsi(&space, linear, |_| a.clone())?);
        let beta: f64 = rng.random_range(0.5..4.0);
        reports.push(check_convex_mlsi(
            &space,
            |w| log_sum_exp(w, beta),
            |w| softmax(w, beta),
        )?);
    }

    if opts.prefix_checks {
        let prefix_streams = streams.derive(3);
        for n in 1..=spec.total() {
            let prefix = PrefixSpace::new(spec, n, SUITE_MAX_STATES)?;
            let sub = prefix_streams.derive(n as u64);
            for s in 0..opts.functions as u64 {
                let f = random_symmetric(&prefix, &mut sub.stream(s));
                reports.push(check_swor_mlsi(&f, DifferenceOperatorId::H)?);
                reports.push(check_swor_mlsi(&f, DifferenceOperatorId::HPlus)?);
                reports.push(check_swor_lsi(&f)?);
            }
        }
    }

    Ok(SpecSuite {
        spec: spec.clone(),
        reports,
        best_lsi_constant: best,
    })
}

/// `β⁻¹ log Σ exp(β ω_i)`, a smooth convex maximum.
pub fn log_sum_exp(w: &[f64], beta: f64) -> f64 {
    let m = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + w.iter().map(|x| (beta * (x - m)).exp()).sum::<f64>().ln() / beta
}

/// Gradient of [`log_sum_exp`].
pub fn softmax(w: &[f64], beta: f64) -> Vec<f64> {
    let m = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = w.iter().map(|x| (beta * (x - m)).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}
