use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ci::{clopper_pearson, CI_ALPHA};
use super::statistic::Statistic;
use super::{Centering, Tail, TailExperiment};
use crate::error::{Error, Result};
use crate::rng::StreamFactory;
use crate::sampling::sample_uniform_indices;
use crate::verdict::Verdict;

/// A centering value with its Monte Carlo standard error, if estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterEstimate {
    pub value: f64,
    pub se: Option<f64>,
    pub method: Centering,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub t: f64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailMetadata {
    pub statistic: String,
    pub bound: String,
    /// `quantitative` or `qualitative`.
    pub mode: String,
    pub tail: Tail,
    pub centering: Centering,
    pub center: f64,
    pub center_se: Option<f64>,
    /// The bound is evaluated at `t − 3·SE` when the center is estimated.
    pub widening: f64,
    pub seed: u64,
    pub samples: u64,
    pub workers: usize,
    pub runtime_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub rows: Vec<TailRow>,
    pub metadata: TailMetadata,
}

impl TailReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.verdict.is_ok())
    }

    /// `t,p_hat,ci_lo,ci_hi,bound,verdict` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,p_hat,ci_lo,ci_hi,bound,verdict\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{},{}", r.t, r.p_hat, r.ci_lo, r.ci_hi, r.bound, r.verdict);
        }
        out
    }

    pub fn metadata_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.metadata)?)
    }
}

/// Draws every sample value in sample-index order. Sample `i` uses stream
/// `i`, so the result does not depend on `workers`.
pub(crate) fn draw_samples(exp: &TailExperiment, workers: usize) -> Result<Vec<f64>> {
    let stat = Statistic::resolve(&exp.statistic, &exp.spec)?;
    let factory = StreamFactory::new(exp.run.seed);
    let spec = &exp.spec;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| {
        (0..exp.run.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = factory.stream(i);
                let idx = sample_uniform_indices(spec, &mut rng);
                let omega: Vec<f64> = idx.iter().map(|&l| spec.values()[l]).collect();
                stat.eval(&omega)
            })
            .collect()
    })
}

fn center_from(exp: &TailExperiment, stat: &Statistic, samples: &[f64]) -> Result<CenterEstimate> {
    let method = exp.run.centering;
    match method {
        Centering::ExactExpectation => {
            let value = stat.exact_expectation().ok_or_else(|| {
                Error::Config(format!(
                    "statistic `{}` has no closed-form expectation; use mc-expectation",
                    stat.id()
                ))
            })?;
            Ok(CenterEstimate { value, se: None, method })
        }
        Centering::McExpectation => {
            let n = samples.len() as f64;
            let mean = samples.iter().sum::<f64>() / n;
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            Ok(CenterEstimate { value: mean, se: Some((var / n).sqrt()), method })
        }
        Centering::Median => {
            let mut sorted = samples.to_vec();
            sorted.sort_by(f64::total_cmp);
            Ok(CenterEstimate { value: sorted[(sorted.len() - 1) / 2], se: None, method })
        }
    }
}

/// Closed form where available, otherwise estimated from the experiment's samples.
pub fn estimate_center(exp: &TailExperiment) -> Result<CenterEstimate> {
    exp.validate()?;
    let stat = Statistic::resolve(&exp.statistic, &exp.spec)?;
    if exp.run.centering == Centering::ExactExpectation {
        return center_from(exp, &stat, &[]);
    }
    let samples = draw_samples(exp, exp.effective_workers()?)?;
    center_from(exp, &stat, &samples)
}

pub fn run_tail(exp: &TailExperiment) -> Result<TailReport> {
    exp.validate()?;
    let started = Instant::now();
    let workers = exp.effective_workers()?;
    let stat = Statistic::resolve(&exp.statistic, &exp.spec)?;
    let bound = exp.resolved_bound()?;
    bound.evaluate(0.0)?;
    let qualitative = exp.is_qualitative();

    let samples = draw_samples(exp, workers)?;
    let center = center_from(exp, &stat, &samples)?;
    let widening = center.se.map_or(0.0, |se| 3.0 * se);
    let deviations: Vec<f64> = samples
        .iter()
        .map(|&x| match exp.run.tail {
            Tail::TwoSided => (x - center.value).abs(),
            Tail::Upper => x - center.value,
            Tail::Lower => center.value - x,
        })
        .collect();

    let total = exp.run.samples;
    let mut rows = Vec::with_capacity(exp.run.t_grid.len());
    let mut previous = f64::INFINITY;
    for &grid_t in &exp.run.t_grid {
        let t = if exp.run.relative { grid_t * center.value } else { grid_t };
        // counting borderline ties as exceedances only makes p̂ larger
        let threshold = t - 1e-12 * t.abs().max(1.0);
        let hits = deviations.iter().filter(|&&d| d >= threshold).count() as u64;
        let p_hat = hits as f64 / total as f64;
        let (ci_lo, ci_hi) = clopper_pearson(hits, total, CI_ALPHA)?;
        let b = exp.run.bound_scale * bound.evaluate((t - widening).max(0.0))?.capped;
        let verdict = if qualitative {
            Verdict::from_pass(p_hat <= previous)
        } else if b == 0.0 {
            Verdict::from_domination(hits == 0)
        } else {
            Verdict::from_domination(ci_hi <= b)
        };
        previous = p_hat;
        rows.push(TailRow { t, p_hat, ci_lo, ci_hi, bound: b, verdict });
    }

    Ok(TailReport {
        rows,
        metadata: TailMetadata {
            statistic: stat.id().to_string(),
            bound: bound.id.to_string(),
            mode: if qualitative { "qualitative" } else { "quantitative" }.to_string(),
            tail: exp.run.tail,
            centering: center.method,
            center: center.value,
            center_se: center.se,
            widening,
            seed: exp.run.seed,
            samples: total,
            workers,
            runtime_secs: started.elapsed().as_secs_f64(),
        },
    })
}
