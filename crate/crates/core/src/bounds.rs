//! Closed-form tail bounds.
//!
//! Every calculator is a pure function of the model parameters and the
//! threshold `t ≥ 0`. Bounds carrying the finite-sampling factor `1 − n/N`
//! degenerate at `n = N`: they return their prefactor at `t = 0` and `0` for
//! `t > 0`, since the statistic is then deterministic.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("threshold must be finite and nonnegative, got {t}")));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

/// `1 − n/N`.
pub fn finite_sampling_factor(n: usize, total: usize) -> Result<f64> {
    if total == 0 || n > total {
        return Err(Error::Domain(format!("need n ≤ N with N ≥ 1, got n = {n}, N = {total}")));
    }
    Ok(1.0 - n as f64 / total as f64)
}

/// `prefactor · exp(−t² / denom)`, with the degenerate conventions for `denom = 0`.
fn gaussian_tail(prefactor: f64, t: f64, denom: f64) -> f64 {
    if t == 0.0 {
        prefactor
    } else if denom == 0.0 {
        0.0
    } else {
        prefactor * (-t * t / denom).exp()
    }
}

/// `exp(−N t² / (4 Σ_{i<j} c_ij²))` for switch-bounded differences.
pub fn bounded_difference(total: usize, sum_c_sq: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("Σ c_ij²", sum_c_sq)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    if sum_c_sq == 0.0 {
        return Err(Error::Domain(
            "Σ c_ij² must be positive for t > 0".into(),
        ));
    }
    Ok((-(total as f64) * t * t / (4.0 * sum_c_sq)).exp())
}

/// `exp(−t² / (16 |𝒳|²))` for convex 1-Lipschitz functions.
pub fn convex_lipschitz(diam: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("|𝒳|", diam)?;
    Ok(gaussian_tail(1.0, t, 16.0 * diam * diam))
}

/// One entry `‖𝔼 ∇^k f‖_𝓘` of the multilinear bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormTerm {
    /// Derivative order `k`.
    pub order: usize,
    /// Number of blocks `|𝓘|`.
    pub blocks: usize,
    pub value: f64,
}

/// `2 exp(−c min_k min_𝓘 (t / (|𝒳|^k ‖𝔼∇^k f‖_𝓘))^{2/|𝓘|})`.
///
/// Terms with zero norm impose no constraint and are skipped.
pub fn multilinear(t: f64, norms: &[NormTerm], diam: f64, c: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("|𝒳|", diam)?;
    check_nonneg("c", c)?;
    if norms.is_empty() {
        return Err(Error::InvalidArgument("multilinear bound needs at least one norm".into()));
    }
    if t == 0.0 {
        return Ok(2.0);
    }
    let mut exponent = f64::INFINITY;
    for term in norms {
        check_nonneg("tensor norm", term.value)?;
        if term.order == 0 || term.blocks == 0 || term.blocks > term.order {
            return Err(Error::InvalidArgument(format!(
                "invalid norm term: order {}, {} blocks",
                term.order, term.blocks
            )));
        }
        let scale = diam.powi(term.order as i32) * term.value;
        if scale == 0.0 {
            continue;
        }
        exponent = exponent.min((t / scale).powf(2.0 / term.blocks as f64));
    }
    Ok(2.0 * (-c * exponent).exp())
}

/// `2 exp(−c min(t²/(n³ + p²n³ + p⁴n⁴), t/(n^{1/2} + pn), t^{2/3}))` for the
/// triangle count in `G(n, M)`, `p = M/N`.
pub fn triangles(vertices: usize, p: f64, t: f64, c: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("c", c)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge density must lie in [0, 1], got {p}")));
    }
    if t == 0.0 {
        return Ok(2.0);
    }
    let n = vertices as f64;
    let a = t * t / (n.powi(3) + p * p * n.powi(3) + p.powi(4) * n.powi(4));
    let b = t / (n.sqrt() + p * n);
    let d = t.powf(2.0 / 3.0);
    Ok(2.0 * (-c * a.min(b).min(d)).exp())
}

/// `2 exp(−c min(ε² n³ p⁶, (ε² ∧ ε^{2/3}) n² p²))`: the relative-deviation
/// form of [`triangles`] at `t = ε 𝔼f`, valid up to the absolute constant.
pub fn triangles_relative(vertices: usize, p: f64, eps: f64, c: f64) -> Result<f64> {
    check_t(eps)?;
    check_nonneg("c", c)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge density must lie in [0, 1], got {p}")));
    }
    let n = vertices as f64;
    let first = eps * eps * n.powi(3) * p.powi(6);
    let second = (eps * eps).min(eps.powf(2.0 / 3.0)) * n * n * p * p;
    Ok(2.0 * (-c * first.min(second)).exp())
}

/// `exp(−t² / (4 (1 − n/N) Σ c_i²))` for sampling without replacement.
pub fn swor_bounded_difference(n: usize, total: usize, sum_ci_sq: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("Σ c_i²", sum_ci_sq)?;
    let q = finite_sampling_factor(n, total)?;
    if t > 0.0 && sum_ci_sq == 0.0 {
        return Err(Error::Domain("Σ c_i² must be positive for t > 0".into()));
    }
    Ok(gaussian_tail(1.0, t, 4.0 * q * sum_ci_sq))
}

/// `exp(−n t² / (4 (1 − n/N) |𝒳|²))`: Serfling-type bound for the sample mean.
pub fn serfling(n: usize, total: usize, diam: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("|𝒳|", diam)?;
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let q = finite_sampling_factor(n, total)?;
    Ok(gaussian_tail(1.0, t, 4.0 * q * diam * diam / n as f64))
}

/// `exp(−2 n t² / ((1 − (n−1)/N) |𝒳|²))`: Serfling's original constant.
pub fn serfling_original(n: usize, total: usize, diam: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("|𝒳|", diam)?;
    if n == 0 || n > total {
        return Err(Error::Domain(format!("need 1 ≤ n ≤ N, got n = {n}, N = {total}")));
    }
    let q = 1.0 - (n - 1) as f64 / total as f64;
    Ok(gaussian_tail(1.0, t, q * diam * diam / (2.0 * n as f64)))
}

/// `2 exp(−t² / (4 (1 − n/N)))` for `√n |f − 𝔼f|`, `f` the one-sided
/// Kolmogorov distance.
pub fn kolmogorov(n: usize, total: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    let q = finite_sampling_factor(n, total)?;
    Ok(gaussian_tail(2.0, t, 4.0 * q))
}

/// `4 exp(−t² / (144 L² |𝒳|²))` for convex `L`-Lipschitz functions around a median.
pub fn convex_lipschitz_median(lipschitz: f64, diam: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    check_nonneg("L", lipschitz)?;
    check_nonneg("|𝒳|", diam)?;
    Ok(gaussian_tail(4.0, t, 144.0 * lipschitz * lipschitz * diam * diam))
}

/// `4 exp(−t² / (144 |𝒳|²))` for the largest absolute eigenvalue.
pub fn eigenvalue(diam: f64, t: f64) -> Result<f64> {
    convex_lipschitz_median(1.0, diam, t)
}

/// `e · exp(−t² / (16 (1 − n/N)))` for the convex distance to a symmetric set
/// of probability at least 1/2.
pub fn swor_convex_distance(n: usize, total: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    let q = finite_sampling_factor(n, total)?;
    Ok(gaussian_tail(E, t, 16.0 * q))
}

/// `2e · exp(−t² / (16 (1 − n/N) L² |𝒳|²))` for convex symmetric Lipschitz functions.
pub fn swor_convex_lipschitz(
    n: usize,
    total: usize,
    lipschitz: f64,
    diam: f64,
    t: f64,
) -> Result<f64> {
    check_t(t)?;
    check_nonneg("L", lipschitz)?;
    check_nonneg("|𝒳|", diam)?;
    let q = finite_sampling_factor(n, total)?;
    Ok(gaussian_tail(2.0 * E, t, 16.0 * q * lipschitz * lipschitz * diam * diam))
}

/// `2e √(4π (1 − n/N) |𝒳|² L²)`, the mean–median gap implied by
/// [`swor_convex_lipschitz`].
pub fn mean_median_gap(n: usize, total: usize, lipschitz: f64, diam: f64) -> Result<f64> {
    check_nonneg("L", lipschitz)?;
    check_nonneg("|𝒳|", diam)?;
    let q = finite_sampling_factor(n, total)?;
    Ok(2.0 * E * (4.0 * PI * q * diam * diam * lipschitz * lipschitz).sqrt())
}

/// Stable string ids for every calculator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundId {
    BoundedDifference,
    ConvexLipschitz,
    Multilinear,
    Triangles,
    SworBoundedDifference,
    Serfling,
    SerflingOriginal,
    Kolmogorov,
    ConvexLipschitzMedian,
    Eigenvalue,
    SworConvexDistance,
    SworConvexLipschitz,
}

impl BoundId {
    pub const ALL: [BoundId; 12] = [
        BoundId::BoundedDifference,
        BoundId::ConvexLipschitz,
        BoundId::Multilinear,
        BoundId::Triangles,
        BoundId::SworBoundedDifference,
        BoundId::Serfling,
        BoundId::SerflingOriginal,
        BoundId::Kolmogorov,
        BoundId::ConvexLipschitzMedian,
        BoundId::Eigenvalue,
        BoundId::SworConvexDistance,
        BoundId::SworConvexLipschitz,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundId::BoundedDifference => "bounded-difference",
            BoundId::ConvexLipschitz => "convex-lipschitz",
            BoundId::Multilinear => "multilinear",
            BoundId::Triangles => "triangles",
            BoundId::SworBoundedDifference => "swor-bounded-difference",
            BoundId::Serfling => "serfling",
            BoundId::SerflingOriginal => "serfling-original",
            BoundId::Kolmogorov => "kolmogorov",
            BoundId::ConvexLipschitzMedian => "convex-lipschitz-median",
            BoundId::Eigenvalue => "eigenvalue",
            BoundId::SworConvexDistance => "swor-convex-distance",
            BoundId::SworConvexLipschitz => "swor-convex-lipschitz",
        }
    }

    /// Bound at `t = 0`.
    pub fn prefactor(&self) -> f64 {
        match self {
            BoundId::BoundedDifference
            | BoundId::ConvexLipschitz
            | BoundId::SworBoundedDifference
            | BoundId::Serfling
            | BoundId::SerflingOriginal => 1.0,
            BoundId::Multilinear | BoundId::Triangles | BoundId::Kolmogorov => 2.0,
            BoundId::ConvexLipschitzMedian | BoundId::Eigenvalue => 4.0,
            BoundId::SworConvexDistance => E,
            BoundId::SworConvexLipschitz => 2.0 * E,
        }
    }

    /// Bounds whose absolute constant is only known to exist.
    pub fn has_unspecified_constant(&self) -> bool {
        matches!(self, BoundId::Multilinear | BoundId::Triangles)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// A calculator id with its parameters. Unused parameters are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    pub id: BoundId,
    /// Population size `N` (or edge slots for graphs).
    #[serde(default)]
    pub total: Option<usize>,
    /// Sample size `n`, or vertex count for [`BoundId::Triangles`].
    #[serde(default)]
    pub n: Option<usize>,
    /// `|𝒳|`.
    #[serde(default)]
    pub diam: Option<f64>,
    #[serde(default)]
    pub lipschitz: Option<f64>,
    /// `Σ c_ij²` or `Σ c_i²`.
    #[serde(default)]
    pub sum_c_sq: Option<f64>,
    #[serde(default)]
    pub norms: Vec<NormTerm>,
    /// Edge density `p = M/N`.
    #[serde(default)]
    pub p: Option<f64>,
    /// Absolute constant for bounds that only assert its existence.
    #[serde(default)]
    pub c: Option<f64>,
}

/// Raw and prefactor-capped values of a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub raw: f64,
    pub capped: f64,
}

impl BoundSpec {
    /// Parses the body of a `[bound]` table.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn new(id: BoundId) -> Self {
        Self {
            id,
            total: None,
            n: None,
            diam: None,
            lipschitz: None,
            sum_c_sq: None,
            norms: Vec::new(),
            p: None,
            c: None,
        }
    }

    fn need<T: Copy>(&self, v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| {
            Error::InvalidArgument(format!("bound `{}` needs parameter `{name}`", self.id))
        })
    }

    pub fn evaluate(&self, t: f64) -> Result<BoundValue> {
        let diam = || self.need(self.diam, "diam");
        let total = || self.need(self.total, "total");
        let n = || self.need(self.n, "n");
        let lip = self.lipschitz.unwrap_or(1.0);
        let c = self.c.unwrap_or(1.0);
        let raw = match self.id {
            BoundId::BoundedDifference => {
                bounded_difference(total()?, self.need(self.sum_c_sq, "sum_c_sq")?, t)?
            }
            BoundId::ConvexLipschitz => convex_lipschitz(diam()? * lip, t)?,
            BoundId::Multilinear => multilinear(t, &self.norms, diam()?, c)?,
            BoundId::Triangles => triangles(n()?, self.need(self.p, "p")?, t, c)?,
            BoundId::SworBoundedDifference => {
                swor_bounded_difference(n()?, total()?, self.need(self.sum_c_sq, "sum_c_sq")?, t)?
            }
            BoundId::Serfling => serfling(n()?, total()?, diam()?, t)?,
            BoundId::SerflingOriginal => serfling_original(n()?, total()?, diam()?, t)?,
            BoundId::Kolmogorov => kolmogorov(n()?, total()?, t)?,
            BoundId::ConvexLipschitzMedian => convex_lipschitz_median(lip, diam()?, t)?,
            BoundId::Eigenvalue => eigenvalue(diam()?, t)?,
            BoundId::SworConvexDistance => swor_convex_distance(n()?, total()?, t)?,
            BoundId::SworConvexLipschitz => swor_convex_lipschitz(n()?, total()?, lip, diam()?, t)?,
        };
        Ok(BoundValue {
            raw,
            capped: raw.min(self.id.prefactor()),
        })
    }
}
