use std::collections::HashMap;

use super::{dirichlet_form, CheckReport, DifferenceOperatorId, FunctionTable, CHECK_TOL};
use crate::error::{Error, Result};
use crate::space::StateSpace;
use crate::spec::MultisliceSpec;
use crate::statistics::MultilinearPolynomial;

/// `θ = √e / (√e − 1)`.
pub const THETA: f64 = 2.541_494_082_536_798;

/// Tolerance of the exact local variance identity.
pub const IDENTITY_TOL: f64 = 1e-12;

fn label(f: &FunctionTable<'_>) -> String {
    f.space().spec().label()
}

fn mean_of(f: &FunctionTable<'_>, xs: &[f64]) -> f64 {
    f.expect_with(|_, k| xs[k])
}

/// `2 log(N/κ_min) / log 2`.
pub fn lsi_sigma_sq(spec: &MultisliceSpec) -> f64 {
    2.0 * (spec.total() as f64 / spec.kappa_min() as f64).ln() / std::f64::consts::LN_2
}

/// `4` for `Γ`, `8` for `Γ⁺`.
pub fn mlsi_sigma_sq(op: DifferenceOperatorId) -> Result<f64> {
    match op {
        DifferenceOperatorId::Gamma => Ok(4.0),
        DifferenceOperatorId::GammaPlus => Ok(8.0),
        other => Err(Error::InvalidArgument(format!("no multislice mLSI constant for `{other}`"))),
    }
}

/// `Ent(f²) ≤ 2σ² 𝔼 Γ(f)²` with `σ² = 2 log(N/κ_min)/log 2`.
pub fn check_lsi(f: &FunctionTable<'_>) -> Result<CheckReport> {
    let sigma_sq = lsi_sigma_sq(f.space().spec());
    let ent = f.map(|v| v * v)?.entropy()?;
    let energy = mean_of(f, &f.gamma_sq(DifferenceOperatorId::Gamma)?);
    Ok(CheckReport::new("lsi", label(f), Some(sigma_sq), ent, 2.0 * sigma_sq * energy, CHECK_TOL))
}

/// `Ent(f²) / (2 𝔼 Γ(f)²)`, the smallest `σ²` for which `f` satisfies the LSI.
pub fn lsi_ratio(f: &FunctionTable<'_>) -> Result<Option<f64>> {
    let ent = f.map(|v| v * v)?.entropy()?;
    let energy = mean_of(f, &f.gamma_sq(DifferenceOperatorId::Gamma)?);
    Ok((energy > 0.0).then(|| ent / (2.0 * energy)))
}

/// `Var(f) ≤ σ² 𝔼 Γ(f)²`.
pub fn check_poincare(f: &FunctionTable<'_>, sigma_sq: f64) -> Result<CheckReport> {
    let energy = mean_of(f, &f.gamma_sq(DifferenceOperatorId::Gamma)?);
    Ok(CheckReport::new("poincare", label(f), Some(sigma_sq), f.variance(), sigma_sq * energy, CHECK_TOL))
}

/// `Ent(e^f) ≤ (σ²/2) 𝔼 Γ(f)² e^f` for `Γ` or `Γ⁺`.
pub fn check_mlsi(f: &FunctionTable<'_>, op: DifferenceOperatorId, sigma_sq: f64) -> Result<CheckReport> {
    let g = f.gamma_sq(op)?;
    let ent = f.map(f64::exp)?.entropy()?;
    let rhs = sigma_sq / 2.0 * f.expect_with(|v, k| g[k] * v.exp());
    let id = match op {
        DifferenceOperatorId::GammaPlus => "mlsi-gamma-plus",
        _ => "mlsi-gamma",
    };
    Ok(CheckReport::new(id, label(f), Some(sigma_sq), ent, rhs, CHECK_TOL))
}

/// `𝔼 f^p − (𝔼 f)^p ≤ (β_p p / 2) 𝓔(f, f^{p−1})` with `β_p = 4N / (p(N+2))`.
pub fn check_beckner(f: &FunctionTable<'_>, p: f64) -> Result<CheckReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("Beckner exponent must lie in (1, 2], got {p}")));
    }
    if let Some(v) = f.values().iter().find(|&&v| !(v >= 0.0)) {
        return Err(Error::Domain(format!("Beckner inequality needs f ≥ 0, found {v}")));
    }
    let n = f.space().positions() as f64;
    let beta = 4.0 * n / (p * (n + 2.0));
    let lhs = f.expect_with(|v, _| v.powf(p)) - f.mean().powf(p);
    let g = f.map(|v| v.powf(p - 1.0))?;
    let rhs = beta * p / 2.0 * dirichlet_form(f, &g)?;
    Ok(CheckReport::new("beckner", label(f), Some(p), lhs, rhs, CHECK_TOL))
}

/// `‖f − 𝔼f‖_p ≤ √(4θp) ‖Γ(f)‖_p` for `p ≥ 2`.
pub fn check_moment_estimate(f: &FunctionTable<'_>, p: f64) -> Result<CheckReport> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::Domain(format!("moment estimate needs p ≥ 2, got {p}")));
    }
    let m = f.mean();
    let lhs = f.map(|v| v - m)?.lp_norm(p);
    let rhs = (4.0 * THETA * p).sqrt() * f.gamma(DifferenceOperatorId::Gamma)?.lp_norm(p);
    Ok(CheckReport::new("moment-estimate", label(f), Some(p), lhs, rhs, CHECK_TOL))
}

/// `Γ_ij(f)²(ω) = 2 ∫ (f(ω) − f(ω_{{i,j}ᶜ}, η))² dℙ_κ(η | ω_{{i,j}ᶜ})`.
///
/// The conditional law is recovered by grouping the enumerated states by
/// their coordinates outside `{i, j}`; it is uniform on each group. The
/// report's `lhs` is the worst absolute discrepancy.
pub fn check_local_variance_identity(f: &FunctionTable<'_>) -> Result<CheckReport> {
    let space = f.space();
    let vals = f.values();
    let mut worst: f64 = 0.0;
    for (p, &(i, j)) in space.pairs().iter().enumerate() {
        let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (k, s) in space.states().iter().enumerate() {
            let mut key = s.clone();
            key[i] = usize::MAX;
            key[j] = usize::MAX;
            groups.entry(key).or_default().push(k);
        }
        for members in groups.values() {
            let weight = 1.0 / members.len() as f64;
            for &k in members {
                let rhs: f64 = 2.0
                    * members
                        .iter()
                        .map(|&e| weight * (vals[k] - vals[e]).powi(2))
                        .sum::<f64>();
                let lhs = (vals[k] - vals[space.switched(k, p)]).powi(2);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(CheckReport::new("local-variance-identity", label(f), None, worst, 0.0, IDENTITY_TOL))
}

/// Relative tolerance for validating a supplied gradient.
pub const GRADIENT_TOL: f64 = 1e-6;

/// `Ent(e^f) ≤ 4|𝒳|² 𝔼 e^f |∇f|²` for convex `f` on `[x₁, x_L]^N`.
///
/// `grad` is compared with central differences at every state first.
pub fn check_convex_mlsi(
    space: &StateSpace,
    f: impl Fn(&[f64]) -> f64,
    grad: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<CheckReport> {
    let n = space.positions();
    let mut sq_grad = Vec::with_capacity(space.len());
    for k in 0..space.len() {
        let x = space.point(k);
        let g = grad(&x);
        if g.len() != n {
            return Err(Error::ShapeMismatch(format!("gradient of length {} for N = {n}", g.len())));
        }
        let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut y = x.clone();
        for i in 0..n {
            let h = 1e-5 * x[i].abs().max(1.0);
            y[i] = x[i] + h;
            let up = f(&y);
            y[i] = x[i] - h;
            let down = f(&y);
            y[i] = x[i];
            let fd = (up - down) / (2.0 * h);
            if (fd - g[i]).abs() > GRADIENT_TOL * scale {
                return Err(Error::InvalidArgument(format!(
                    "supplied gradient disagrees with central differences at state {k}, \
                     coordinate {i}: {} vs {fd}",
                    g[i]
                )));
            }
        }
        sq_grad.push(g.iter().map(|v| v * v).sum::<f64>());
    }
    let tbl = FunctionTable::from_fn(space, &f)?;
    let diam = space.spec().diameter();
    let ent = tbl.map(f64::exp)?.entropy()?;
    let rhs = 4.0 * diam * diam * tbl.expect_with(|v, k| v.exp() * sq_grad[k]);
    Ok(CheckReport::new("convex-mlsi", label(&tbl), Some(8.0 * diam * diam), ent, rhs, CHECK_TOL))
}

/// Pointwise `Γ(f)² ≤ (3|𝒳|²/2)|∇f|² + (3|𝒳|⁴/(4N))‖∇²f‖²_HS` for a
/// multilinear polynomial; reports the state with the largest slack.
pub fn check_gradient_estimate(poly: &MultilinearPolynomial, space: &StateSpace) -> Result<CheckReport> {
    let n = space.positions();
    if poly.num_vars() != n {
        return Err(Error::ShapeMismatch(format!(
            "polynomial in {} variables on a multislice of length {n}",
            poly.num_vars()
        )));
    }
    let tbl = FunctionTable::from_fn(space, |w| poly.eval(w).expect("length checked"))?;
    let gamma_sq = tbl.gamma_sq(DifferenceOperatorId::Gamma)?;
    let diam = space.spec().diameter();
    let (a, b) = (1.5 * diam * diam, 0.75 * diam.powi(4) / n as f64);
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
    for (k, &g_sq) in gamma_sq.iter().enumerate() {
        let w = space.point(k);
        let grad_sq: f64 = poly.gradient(&w)?.iter().map(|g| g * g).sum();
        let hess_sq = if poly.degree() >= 2 {
            poly.gradient_tensor(&w, 2)?.hs_norm().powi(2)
        } else {
            0.0
        };
        let rhs = a * grad_sq + b * hess_sq;
        if g_sq - rhs > worst.0 {
            worst = (g_sq - rhs, g_sq, rhs);
        }
    }
    Ok(CheckReport::new("gradient-estimate", label(&tbl), None, worst.1, worst.2, CHECK_TOL))
}

/// `(|∇f(ω)|, Γ(f)(ω))` for `N = 3`, `𝒳 = {0, 1}`, `f = ω₁ω₂ − ω₁ω₃` and
/// `ω = (0, 1, 1)`: the gradient vanishes while `Γ(f)` does not.
pub fn gradient_counterexample() -> Result<(f64, f64)> {
    let spec = MultisliceSpec::new(vec![1, 2], vec![0.0, 1.0])?;
    let space = StateSpace::new(&spec, 10)?;
    let poly = MultilinearPolynomial::new(3)
        .with_term(&[0, 1], 1.0)?
        .with_term(&[0, 2], -1.0)?;
    let omega = [0.0, 1.0, 1.0];
    let k = space.index_of(&[0, 1, 1]).expect("state exists");
    let grad = poly.gradient(&omega)?.iter().map(|g| g * g).sum::<f64>().sqrt();
    let tbl = FunctionTable::from_fn(&space, |w| poly.eval(w).expect("length 3"))?;
    Ok((grad, tbl.gamma_sq(DifferenceOperatorId::Gamma)?[k].sqrt()))
}
