//! Exact verification of functional inequalities by enumeration.
//!
//! Functions live in [`Table`]s over an enumerated [`StateSpace`] (uniform
//! measure on `Ω_κ`) or [`PrefixSpace`] (`ℙ_{κ,n}`). Every check returns a
//! [`CheckReport`] with `slack = lhs − rhs`.

mod checks;
mod prefix;
mod projection;
pub mod suite;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{PrefixSpace, StateSpace};
use crate::verdict::Verdict;

pub use checks::{
    check_beckner, check_convex_mlsi, check_gradient_estimate, check_local_variance_identity,
    check_lsi, check_mlsi, check_moment_estimate, check_poincare, gradient_counterexample,
    lsi_sigma_sq, lsi_ratio, mlsi_sigma_sq, THETA,
};
pub use prefix::{check_swor_lsi, check_swor_mlsi, swor_lsi_sigma_sq, swor_mlsi_sigma_sq};
pub use projection::{check_projection_identities, coarsening_map, Coarsening, MAX_PERMUTATION_POSITIONS};

/// Default slack tolerance for inequality checks.
pub const CHECK_TOL: f64 = 1e-9;

/// A finite probability space whose points are real vectors.
pub trait WeightedSpace {
    fn size(&self) -> usize;
    fn mass(&self, k: usize) -> f64;
    fn coordinates(&self, k: usize) -> Vec<f64>;
    fn describe(&self) -> String;
}

impl WeightedSpace for StateSpace {
    fn size(&self) -> usize {
        self.len()
    }

    fn mass(&self, _k: usize) -> f64 {
        1.0 / self.len() as f64
    }

    fn coordinates(&self, k: usize) -> Vec<f64> {
        self.point(k)
    }

    fn describe(&self) -> String {
        self.spec().label()
    }
}

impl WeightedSpace for PrefixSpace {
    fn size(&self) -> usize {
        self.len()
    }

    fn mass(&self, k: usize) -> f64 {
        self.weight(k)
    }

    fn coordinates(&self, k: usize) -> Vec<f64> {
        self.point(k)
    }

    fn describe(&self) -> String {
        format!("{} n={}", self.spec().label(), self.prefix_len())
    }
}

/// A real function on an enumerated space, indexed by enumeration order.
#[derive(Debug, Clone)]
pub struct Table<'a, S> {
    space: &'a S,
    values: Vec<f64>,
}

/// A function on `Ω_κ`.
pub type FunctionTable<'a> = Table<'a, StateSpace>;
/// A function on `Ω_{κ,n}`.
pub type PrefixTable<'a> = Table<'a, PrefixSpace>;

impl<'a, S: WeightedSpace> Table<'a, S> {
    pub fn new(space: &'a S, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a space of {} states",
                values.len(),
                space.size()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("function values must be finite".into()));
        }
        Ok(Self { space, values })
    }

    pub fn from_fn(space: &'a S, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..space.size()).map(|k| f(&space.coordinates(k))).collect();
        Self::new(space, values)
    }

    /// Values drawn uniformly from `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(space: &'a S, rng: &mut R) -> Self {
        let values = (0..space.size()).map(|_| rng.random_range(-1.0..=1.0)).collect();
        Self { space, values }
    }

    pub fn space(&self) -> &'a S {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.space, self.values.iter().map(|&v| f(v)).collect())
    }

    pub(crate) fn same_space(&self, other: &Self) -> Result<()> {
        if self.values.len() != other.values.len() {
            return Err(Error::ShapeMismatch("functions live on different spaces".into()));
        }
        Ok(())
    }

    /// `𝔼 g(f, k)` summed in enumeration order.
    pub(crate) fn expect_with(&self, g: impl Fn(f64, usize) -> f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| self.space.mass(k) * g(v, k))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect_with(|v, _| v)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.expect_with(|v, _| (v - m) * (v - m))
    }

    /// `𝔼 f log f − 𝔼 f log 𝔼 f`; requires `f > 0`.
    pub fn entropy(&self) -> Result<f64> {
        if let Some(v) = self.values.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::Domain(format!("entropy needs a positive function, found {v}")));
        }
        let m = self.mean();
        Ok(self.expect_with(|v, _| v * v.ln()) - m * m.ln())
    }

    /// `(𝔼 |f|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.expect_with(|v, _| v.abs().powf(p)).powf(1.0 / p)
    }
}

/// Which difference operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DifferenceOperatorId {
    Gamma,
    GammaPlus,
    H,
    HPlus,
    EuclideanGradient,
}

impl DifferenceOperatorId {
    pub fn as_str(&self) -> &'static str {
        match self {
            DifferenceOperatorId::Gamma => "gamma",
            DifferenceOperatorId::GammaPlus => "gamma-plus",
            DifferenceOperatorId::H => "h",
            DifferenceOperatorId::HPlus => "h-plus",
            DifferenceOperatorId::EuclideanGradient => "euclidean-gradient",
        }
    }
}

impl fmt::Display for DifferenceOperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DifferenceOperatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use DifferenceOperatorId::*;
        [Gamma, GammaPlus, H, HPlus, EuclideanGradient]
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

fn mismatch(op: DifferenceOperatorId, space: &str) -> Error {
    Error::InvalidArgument(format!("operator `{op}` is not defined on {space}"))
}

impl<'a> FunctionTable<'a> {
    /// `Γ(f)²` or `Γ⁺(f)²` pointwise.
    pub fn gamma_sq(&self, op: DifferenceOperatorId) -> Result<Vec<f64>> {
        let positive = match op {
            DifferenceOperatorId::Gamma => false,
            DifferenceOperatorId::GammaPlus => true,
            other => return Err(mismatch(other, "the multislice")),
        };
        let scale = 1.0 / (2.0 * self.space.positions() as f64);
        Ok((0..self.values.len())
            .map(|k| {
                let fk = self.values[k];
                scale
                    * self
                        .space
                        .switched_all(k)
                        .iter()
                        .map(|&t| {
                            let d = fk - self.values[t];
                            if positive { d.max(0.0).powi(2) } else { d * d }
                        })
                        .sum::<f64>()
            })
            .collect())
    }

    /// `Γ(f)` or `Γ⁺(f)` as a table.
    pub fn gamma(&self, op: DifferenceOperatorId) -> Result<FunctionTable<'a>> {
        let sq = self.gamma_sq(op)?;
        FunctionTable::new(self.space, sq.into_iter().map(f64::sqrt).collect())
    }
}

impl<'a> PrefixTable<'a> {
    /// `𝔥(f)²` or `𝔥⁺(f)²` pointwise, with sup and inf over admissible
    /// single-site replacements.
    pub fn h_sq(&self, op: DifferenceOperatorId) -> Result<Vec<f64>> {
        let plus = match op {
            DifferenceOperatorId::H => false,
            DifferenceOperatorId::HPlus => true,
            other => return Err(mismatch(other, "a prefix space")),
        };
        let n = self.space.prefix_len();
        Ok((0..self.values.len())
            .map(|k| {
                0.5 * (0..n)
                    .map(|i| {
                        let reach = self.space.replacements(k, i);
                        let lo = reach.iter().map(|&r| self.values[r]).fold(f64::INFINITY, f64::min);
                        let hi = if plus {
                            self.values[k]
                        } else {
                            reach.iter().map(|&r| self.values[r]).fold(f64::NEG_INFINITY, f64::max)
                        };
                        (hi - lo).powi(2)
                    })
                    .sum::<f64>()
            })
            .collect())
    }

    pub fn gamma(&self, op: DifferenceOperatorId) -> Result<PrefixTable<'a>> {
        let sq = self.h_sq(op)?;
        PrefixTable::new(self.space, sq.into_iter().map(f64::sqrt).collect())
    }

    /// Invariant under every permutation of the `n` coordinates, up to a
    /// relative rounding tolerance.
    pub fn is_symmetric(&self) -> bool {
        let n = self.space.prefix_len();
        let scale = self.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        (0..self.values.len()).all(|k| {
            (0..n.saturating_sub(1)).all(|i| {
                let t = self.space.adjacent_swap(k, i);
                (self.values[k] - self.values[t]).abs() <= 1e-12 * scale
            })
        })
    }
}

/// `𝓔_κ(f, g) = (1/2N) Σ_{i<j} 𝔼 (Γ_ij f)(Γ_ij g)`.
pub fn dirichlet_form(f: &FunctionTable<'_>, g: &FunctionTable<'_>) -> Result<f64> {
    f.same_space(g)?;
    let space = f.space;
    let scale = 1.0 / (2.0 * space.positions() as f64);
    let (fv, gv) = (f.values(), g.values());
    Ok(scale
        * f.expect_with(|_, k| {
            space
                .switched_all(k)
                .iter()
                .map(|&t| (fv[k] - fv[t]) * (gv[k] - gv[t]))
                .sum()
        }))
}

/// One verified inequality or identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub spec: String,
    /// Constant or exponent the check was run with, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

impl CheckReport {
    pub fn new(check: &str, spec: String, param: Option<f64>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            check: check.to_string(),
            spec,
            param,
            lhs,
            rhs,
            slack,
            tol,
            verdict: Verdict::from_pass(slack <= tol),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
