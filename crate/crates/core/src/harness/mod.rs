//! Monte Carlo tail experiments compared against the closed-form bounds.

mod ci;
mod statistic;
mod talagrand;
mod tail;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundId, BoundSpec};
use crate::error::{Error, Result};
use crate::spec::MultisliceSpec;

pub use ci::{clopper_pearson, CI_ALPHA};
pub use statistic::{Statistic, StatisticId, StatisticSpec};
pub use talagrand::{run_talagrand_exact, talagrand_all_subsets, TalagrandReport, MAX_TALAGRAND_STATES};
pub use tail::{estimate_center, run_tail, CenterEstimate, TailMetadata, TailReport, TailRow};

/// Environment variable overriding the configured worker count.
pub const THREADS_ENV: &str = "CONC_THREADS";

pub const MIN_SAMPLES: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Centering {
    ExactExpectation,
    McExpectation,
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    #[default]
    TwoSided,
    Upper,
    Lower,
}

/// The `[run]` config section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub t_grid: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "one")]
    pub workers: usize,
    pub centering: Centering,
    #[serde(default)]
    pub tail: Tail,
    /// Interpret `t_grid` as relative deviations `ε`, with `t = ε · center`.
    #[serde(default)]
    pub relative: bool,
    /// Multiplier applied to the bound, e.g. `2` to cover both tails by a
    /// union of one-sided bounds.
    #[serde(default = "unit")]
    pub bound_scale: f64,
}

fn one() -> usize {
    1
}

fn unit() -> f64 {
    1.0
}

/// A complete experiment, as read from a TOML config with sections
/// `[spec]`, `[statistic]`, `[bound]` and `[run]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailExperiment {
    pub spec: MultisliceSpec,
    pub statistic: StatisticSpec,
    pub bound: BoundSpec,
    pub run: RunSpec,
}

impl TailExperiment {
    pub fn from_toml(text: &str) -> Result<Self> {
        let exp: TailExperiment = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        exp.validate()?;
        Ok(exp)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let run = &self.run;
        if run.samples < MIN_SAMPLES {
            return Err(Error::Config(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                run.samples
            )));
        }
        if run.t_grid.is_empty() {
            return Err(Error::Config("t_grid must not be empty".into()));
        }
        if run.t_grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite())
            || run.t_grid.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Config("t_grid must be nonnegative and strictly increasing".into()));
        }
        if run.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if !(run.bound_scale > 0.0) {
            return Err(Error::Config("bound_scale must be positive".into()));
        }
        Statistic::resolve(&self.statistic, &self.spec)?;
        Ok(())
    }

    /// Worker count after applying the environment override.
    pub fn effective_workers(&self) -> Result<usize> {
        match std::env::var(THREADS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(w) if w > 0 => Ok(w),
                _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
            },
            Err(_) => Ok(self.run.workers),
        }
    }

    /// The bound with parameters not given explicitly filled in from the
    /// spec and the statistic.
    pub fn resolved_bound(&self) -> Result<BoundSpec> {
        let stat = Statistic::resolve(&self.statistic, &self.spec)?;
        let mut b = self.bound.clone();
        let total = self.spec.total();
        let diam = self.spec.diameter();
        b.diam.get_or_insert(diam);
        match b.id {
            BoundId::Triangles => {
                b.n.get_or_insert(stat.vertices());
                b.p.get_or_insert(self.spec.kappa()[1] as f64 / total as f64);
            }
            _ => {
                b.total.get_or_insert(total);
                b.n.get_or_insert(stat.sample_size());
            }
        }
        if b.sum_c_sq.is_none() && b.id == BoundId::SworBoundedDifference {
            let n = stat.sample_size() as f64;
            match stat.id() {
                StatisticId::SampleMean => b.sum_c_sq = Some(diam * diam / n),
                StatisticId::Sum => b.sum_c_sq = Some(n * diam * diam),
                _ => {}
            }
        }
        Ok(b)
    }

    /// Bounds with an unspecified absolute constant and no user value run
    /// in qualitative mode.
    pub fn is_qualitative(&self) -> bool {
        self.bound.id.has_unspecified_constant() && self.bound.c.is_none()
    }
}
