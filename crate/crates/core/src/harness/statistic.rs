use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::MultisliceSpec;
use crate::statistics::{
    edge_index, edge_slots, expected_triangles, kolmogorov_stat, largest_abs_eigenvalue,
    sample_mean, sample_std, triangle_count,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatisticId {
    SampleMean,
    SampleStd,
    Sum,
    Kolmogorov,
    /// `√n` times the one-sided Kolmogorov distance.
    KolmogorovScaled,
    Triangles,
    LargestEigenvalue,
}

impl StatisticId {
    pub const ALL: [StatisticId; 7] = [
        StatisticId::SampleMean,
        StatisticId::SampleStd,
        StatisticId::Sum,
        StatisticId::Kolmogorov,
        StatisticId::KolmogorovScaled,
        StatisticId::Triangles,
        StatisticId::LargestEigenvalue,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StatisticId::SampleMean => "sample-mean",
            StatisticId::SampleStd => "sample-std",
            StatisticId::Sum => "sum",
            StatisticId::Kolmogorov => "kolmogorov",
            StatisticId::KolmogorovScaled => "kolmogorov-scaled",
            StatisticId::Triangles => "triangles",
            StatisticId::LargestEigenvalue => "largest-eigenvalue",
        }
    }

    fn is_graph(&self) -> bool {
        matches!(self, StatisticId::Triangles | StatisticId::LargestEigenvalue)
    }
}

impl fmt::Display for StatisticId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatisticId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatisticId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// The `[statistic]` config section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatisticSpec {
    pub id: StatisticId,
    /// Sample size for prefix statistics; defaults to `N`.
    #[serde(default)]
    pub n: Option<usize>,
    /// Vertex count for graph statistics.
    #[serde(default)]
    pub vertices: Option<usize>,
}

/// A statistic resolved against a spec.
#[derive(Debug, Clone, PartialEq)]
pub struct Statistic {
    id: StatisticId,
    n: usize,
    vertices: usize,
    spec: MultisliceSpec,
}

impl Statistic {
    pub fn resolve(stat: &StatisticSpec, spec: &MultisliceSpec) -> Result<Self> {
        let total = spec.total();
        if stat.id.is_graph() {
            let v = stat.vertices.ok_or_else(|| {
                Error::Config(format!("statistic `{}` needs `vertices`", stat.id))
            })?;
            if edge_slots(v) != total {
                return Err(Error::Config(format!(
                    "{v} vertices have {} edge slots but the spec has N = {total}",
                    edge_slots(v)
                )));
            }
            if stat.id == StatisticId::Triangles && spec.values() != [0.0, 1.0] {
                return Err(Error::Config("triangle counts need values {0, 1}".into()));
            }
            return Ok(Self { id: stat.id, n: total, vertices: v, spec: spec.clone() });
        }
        let n = stat.n.unwrap_or(total);
        if n == 0 || n > total {
            return Err(Error::Config(format!("sample size must lie in 1..={total}, got {n}")));
        }
        if stat.id == StatisticId::SampleStd && n < 2 {
            return Err(Error::Config("sample-std needs n ≥ 2".into()));
        }
        Ok(Self { id: stat.id, n, vertices: 0, spec: spec.clone() })
    }

    pub fn id(&self) -> StatisticId {
        self.id
    }

    /// Number of leading coordinates the statistic reads.
    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    /// Evaluates the statistic on a full configuration.
    pub fn eval(&self, omega: &[f64]) -> Result<f64> {
        let prefix = &omega[..self.n];
        match self.id {
            StatisticId::SampleMean => sample_mean(prefix),
            StatisticId::SampleStd => sample_std(prefix),
            StatisticId::Sum => Ok(prefix.iter().sum()),
            StatisticId::Kolmogorov => kolmogorov_stat(prefix, &self.spec),
            StatisticId::KolmogorovScaled => {
                Ok((self.n as f64).sqrt() * kolmogorov_stat(prefix, &self.spec)?)
            }
            StatisticId::Triangles => Ok(triangle_count(self.vertices, omega) as f64),
            StatisticId::LargestEigenvalue => {
                let v = self.vertices;
                let m = DMatrix::from_fn(v, v, |i, j| {
                    if i == j { 0.0 } else { omega[edge_index(v, i, j)] }
                });
                largest_abs_eigenvalue(&m)
            }
        }
    }

    /// `𝔼 f` in closed form, when one is known.
    pub fn exact_expectation(&self) -> Option<f64> {
        match self.id {
            StatisticId::SampleMean => Some(self.spec.population_mean()),
            StatisticId::Sum => Some(self.n as f64 * self.spec.population_mean()),
            StatisticId::Triangles => {
                let edges = self.spec.kappa()[1];
                expected_triangles(self.vertices, edges).ok()
            }
            _ => None,
        }
    }
}
