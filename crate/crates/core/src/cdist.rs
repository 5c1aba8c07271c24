//! Talagrand's convex distance
//! `d_T(ω, A) = sup_{|α|=1} d_α(ω, A) = min_{ν ∈ 𝓜(A)} ‖(ν(ω′_k ≠ ω_k))_k‖₂`.
//!
//! The minimum over measures on `A` is a convex quadratic over the simplex,
//! solved by Frank–Wolfe with away steps. The current disagreement vector
//! `v = Bᵀν` also yields the dual certificate `α = v / |v|`, so the solver
//! stops on the exact gap between primal and dual values.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::space::StateSpace;
use crate::spec::{Configuration, MultisliceSpec};

/// An explicit set `A` of configurations of one common length.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetIndicator {
    members: Vec<Configuration>,
    positions: usize,
}

fn bit_key(c: &Configuration) -> Vec<u64> {
    c.entries().iter().map(|x| x.to_bits()).collect()
}

impl SubsetIndicator {
    /// Rejects empty sets, duplicates and ragged lengths.
    pub fn new(members: Vec<Configuration>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidArgument("a set must have at least one member".into()));
        };
        let positions = first.len();
        let mut seen = HashSet::with_capacity(members.len());
        for m in &members {
            if m.len() != positions {
                return Err(Error::ShapeMismatch(format!(
                    "set members of lengths {positions} and {}",
                    m.len()
                )));
            }
            if !seen.insert(bit_key(m)) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate set member {:?}",
                    m.entries()
                )));
            }
        }
        Ok(Self { members, positions })
    }

    /// Like [`SubsetIndicator::new`], additionally requiring every member to
    /// lie in `Ω_κ` (or in `Ω_{κ,n}` for shorter members).
    pub fn in_space(spec: &MultisliceSpec, members: Vec<Configuration>) -> Result<Self> {
        let set = Self::new(members)?;
        let full = set.positions == spec.total();
        for m in &set.members {
            let ok = if full { spec.is_member(m) } else { spec.is_prefix(m) };
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "{:?} is not an element of the state space",
                    m.entries()
                )));
            }
        }
        Ok(set)
    }

    pub fn members(&self) -> &[Configuration] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Configuration length.
    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn contains(&self, omega: &Configuration) -> bool {
        let key = bit_key(omega);
        self.members.iter().any(|m| bit_key(m) == key)
    }

    /// Closed under coordinate permutations. Adjacent transpositions
    /// generate `S_n`, so checking them for every member suffices.
    pub fn is_symmetric(&self) -> bool {
        let keys: HashSet<Vec<u64>> = self.members.iter().map(bit_key).collect();
        self.members.iter().all(|m| {
            let mut k = bit_key(m);
            (0..self.positions.saturating_sub(1)).all(|i| {
                k.swap(i, i + 1);
                let hit = keys.contains(&k);
                k.swap(i, i + 1);
                hit
            })
        })
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::Hypothesis(
                "set is not closed under permutations of coordinates".into(),
            ))
        }
    }

    fn check_query(&self, omega: &Configuration) -> Result<()> {
        if omega.len() != self.positions {
            return Err(Error::ShapeMismatch(format!(
                "query of length {} against a set of length-{} configurations",
                omega.len(),
                self.positions
            )));
        }
        Ok(())
    }

    /// `B_{a,k} = 1{a_k ≠ ω_k}`, row-major `|A| × N`.
    pub fn disagreement(&self, omega: &Configuration) -> Result<Vec<f64>> {
        self.check_query(omega)?;
        let w = omega.entries();
        Ok(self
            .members
            .iter()
            .flat_map(|m| {
                m.entries()
                    .iter()
                    .zip(w)
                    .map(|(a, b)| if a.to_bits() == b.to_bits() { 0.0 } else { 1.0 })
            })
            .collect())
    }
}

/// A probability vector over the members of a set.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    weights: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument("simplex weights must be nonnegative".into()));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("simplex weights sum to {s}")));
        }
        Ok(Self { weights })
    }

    pub fn vertex(len: usize, k: usize) -> Self {
        let mut weights = vec![0.0; len];
        weights[k] = 1.0;
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `d_α(ω, A) = min_{ω′ ∈ A} Σ |α_i| 1{ω_i ≠ ω′_i}` for a unit vector `α`.
pub fn alpha_distance(omega: &Configuration, set: &SubsetIndicator, alpha: &[f64]) -> Result<f64> {
    set.check_query(omega)?;
    if alpha.len() != set.positions {
        return Err(Error::ShapeMismatch(format!(
            "weight vector of length {} for configurations of length {}",
            alpha.len(),
            set.positions
        )));
    }
    let norm = alpha.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("α must be a unit vector, |α| = {norm}")));
    }
    let b = set.disagreement(omega)?;
    let n = set.positions;
    Ok((0..set.len())
        .map(|a| (0..n).map(|k| alpha[k].abs() * b[a * n + k]).sum::<f64>())
        .fold(f64::INFINITY, f64::min))
}

/// Result of a convex distance solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDistance {
    /// Primal value `‖Bᵀν‖₂`, an upper bound on `d_T`.
    pub value: f64,
    /// Primal minus dual value; `d_T ∈ [value − gap, value]`.
    pub gap: f64,
    pub iterations: usize,
    pub measure: SimplexPoint,
}

pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `‖Bᵀν‖₂` over the simplex until the duality gap is at most `tol`.
pub fn convex_distance(
    omega: &Configuration,
    set: &SubsetIndicator,
    tol: f64,
) -> Result<ConvexDistance> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let b = set.disagreement(omega)?;
    let (m, n) = (set.len(), set.positions);
    let row = |a: usize| &b[a * n..(a + 1) * n];

    // start at the Hamming-nearest member
    let start = (0..m)
        .min_by(|&x, &y| row(x).iter().sum::<f64>().total_cmp(&row(y).iter().sum::<f64>()))
        .expect("nonempty set");
    let mut nu = vec![0.0; m];
    nu[start] = 1.0;
    let mut v = row(start).to_vec();
    let mut scores = vec![0.0; m];
    let mut gap = f64::INFINITY;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        let g = dot(&v, &v);
        if g == 0.0 {
            gap = 0.0;
            break;
        }
        for (a, s) in scores.iter_mut().enumerate() {
            *s = dot(row(a), &v);
        }
        // lowest index wins ties
        let mut fw = 0;
        for a in 1..m {
            if scores[a] < scores[fw] {
                fw = a;
            }
        }
        let norm = g.sqrt();
        gap = ((g - scores[fw]) / norm).max(0.0);
        if gap <= tol {
            break;
        }
        let mut away = None::<usize>;
        for a in 0..m {
            if nu[a] > 0.0 && away.is_none_or(|w| scores[a] > scores[w]) {
                away = Some(a);
            }
        }
        let away = away.expect("measure has support");
        iterations += 1;

        let fw_gain = g - scores[fw];
        let away_gain = scores[away] - g;
        if fw_gain >= away_gain || nu[away] >= 1.0 {
            // v ← v + γ (B_s − v)
            let d: Vec<f64> = row(fw).iter().zip(&v).map(|(s, x)| s - x).collect();
            let dd = dot(&d, &d);
            let gamma = if dd > 0.0 { (-dot(&v, &d) / dd).clamp(0.0, 1.0) } else { 0.0 };
            for x in nu.iter_mut() {
                *x *= 1.0 - gamma;
            }
            nu[fw] += gamma;
            if gamma == 1.0 {
                nu.iter_mut().for_each(|x| *x = 0.0);
                nu[fw] = 1.0;
            }
        } else {
            // v ← v + γ (v − B_a)
            let d: Vec<f64> = v.iter().zip(row(away)).map(|(x, s)| x - s).collect();
            let dd = dot(&d, &d);
            let gamma_max = nu[away] / (1.0 - nu[away]);
            let gamma = if dd > 0.0 { (-dot(&v, &d) / dd).clamp(0.0, gamma_max) } else { 0.0 };
            for x in nu.iter_mut() {
                *x *= 1.0 + gamma;
            }
            nu[away] -= gamma;
            if gamma == gamma_max {
                nu[away] = 0.0;
            }
        }
        let total: f64 = nu.iter().sum();
        nu.iter_mut().for_each(|x| *x /= total);
        v.iter_mut().for_each(|x| *x = 0.0);
        for (a, &wgt) in nu.iter().enumerate() {
            if wgt > 0.0 {
                for (x, s) in v.iter_mut().zip(row(a)) {
                    *x += wgt * s;
                }
            }
        }
    }

    Ok(ConvexDistance {
        value: dot(&v, &v).sqrt(),
        gap,
        iterations,
        measure: SimplexPoint { weights: nu },
    })
}

/// Largest set accepted by [`convex_distance_bruteforce`].
pub const BRUTEFORCE_MAX_MEMBERS: usize = 5;

/// Minimum of `‖Bᵀν‖₂` over simplex points with coordinates in `(1/grid)ℤ`.
///
/// All but the last two weights run over the grid; the remaining pair is
/// optimized exactly among its grid points, since the objective restricted
/// to that segment is a one-dimensional convex quadratic.
pub fn convex_distance_bruteforce(
    omega: &Configuration,
    set: &SubsetIndicator,
    grid: usize,
) -> Result<f64> {
    if set.len() > BRUTEFORCE_MAX_MEMBERS {
        return Err(Error::InvalidArgument(format!(
            "grid search supports at most {BRUTEFORCE_MAX_MEMBERS} members, got {}",
            set.len()
        )));
    }
    if grid == 0 {
        return Err(Error::InvalidArgument("grid resolution must be positive".into()));
    }
    let b = set.disagreement(omega)?;
    let (m, n) = (set.len(), set.positions);
    if m == 1 {
        return Ok(b.iter().sum::<f64>().sqrt());
    }
    let h = 1.0 / grid as f64;
    let mut best = f64::INFINITY;
    let mut v0 = vec![0.0; n];
    search(&b, n, m, 0, grid, h, &mut v0, &mut best);
    Ok(best.sqrt())
}

#[allow(clippy::too_many_arguments)]
fn search(b: &[f64], n: usize, m: usize, a: usize, left: usize, h: f64, v0: &mut Vec<f64>, best: &mut f64) {
    if a + 2 == m {
        let r = left as f64 * h;
        let (p, q) = (&b[a * n..(a + 1) * n], &b[(a + 1) * n..(a + 2) * n]);
        // v(λ) = u + λ w with λ the weight of member a
        let u: Vec<f64> = v0.iter().zip(q).map(|(x, s)| x + r * s).collect();
        let w: Vec<f64> = p.iter().zip(q).map(|(s, t)| s - t).collect();
        let ww = dot(&w, &w);
        let eval = |k: usize| {
            let l = k as f64 * h;
            u.iter().zip(&w).map(|(x, y)| (x + l * y).powi(2)).sum::<f64>()
        };
        let mut candidates = vec![0, left];
        if ww > 0.0 {
            let star = (-dot(&u, &w) / ww / h).clamp(0.0, left as f64);
            candidates.push(star.floor() as usize);
            candidates.push((star.ceil() as usize).min(left));
        }
        for k in candidates {
            *best = best.min(eval(k));
        }
        return;
    }
    let row = &b[a * n..(a + 1) * n];
    for k in 0..=left {
        let wgt = k as f64 * h;
        for (x, s) in v0.iter_mut().zip(row) {
            *x += wgt * s;
        }
        search(b, n, m, a + 1, left - k, h, v0, best);
        for (x, s) in v0.iter_mut().zip(row) {
            *x -= wgt * s;
        }
    }
}

/// Largest state space accepted by [`check_self_bounding`].
pub const SELF_BOUNDING_MAX_STATES: u128 = 10_000;
pub const SELF_BOUNDING_TOL: f64 = 1e-8;

/// Worst slacks of `Γ⁺(f)² ≤ f` and `|f(ω) − f(τ_ij ω)| ≤ 1` for
/// `f = d_T(·, A)² / 4` over all of `Ω_κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfBoundingReport {
    pub states: usize,
    /// `max_ω Γ⁺(f)²(ω) − f(ω)`.
    pub gamma_slack: f64,
    /// `max_{ω,i<j} |f(ω) − f(τ_ij ω)| − 1`.
    pub difference_slack: f64,
    pub passed: bool,
}

/// `f(ω_k) = d_T(ω_k, A)² / 4` for every state of `space`.
pub fn quarter_squared_distances(space: &StateSpace, set: &SubsetIndicator) -> Result<Vec<f64>> {
    (0..space.len())
        .map(|k| {
            let d = convex_distance(&space.configuration(k), set, DEFAULT_TOL)?;
            Ok(d.value * d.value / 4.0)
        })
        .collect()
}

pub fn check_self_bounding(spec: &MultisliceSpec, set: &SubsetIndicator) -> Result<SelfBoundingReport> {
    let space = StateSpace::new(spec, SELF_BOUNDING_MAX_STATES)?;
    if set.positions() != spec.total() {
        return Err(Error::ShapeMismatch(format!(
            "set of length-{} configurations on a multislice of length {}",
            set.positions(),
            spec.total()
        )));
    }
    let f = quarter_squared_distances(&space, set)?;
    let scale = 1.0 / (2.0 * spec.total() as f64);
    let mut gamma_slack = f64::NEG_INFINITY;
    let mut difference_slack = f64::NEG_INFINITY;
    for k in 0..space.len() {
        let mut acc = 0.0;
        for &t in space.switched_all(k) {
            let diff = f[k] - f[t];
            acc += diff.max(0.0).powi(2);
            difference_slack = difference_slack.max(diff.abs() - 1.0);
        }
        gamma_slack = gamma_slack.max(scale * acc - f[k]);
    }
    Ok(SelfBoundingReport {
        states: space.len(),
        gamma_slack,
        difference_slack,
        passed: gamma_slack <= SELF_BOUNDING_TOL && difference_slack <= SELF_BOUNDING_TOL,
    })
}

/// `ℙ_κ(A) · 𝔼_κ exp(d_T(·, A)² / 144)` with `A` given by state indices.
pub fn talagrand_product(space: &StateSpace, members: &[usize]) -> Result<f64> {
    let configs = members
        .iter()
        .map(|&k| {
            if k >= space.len() {
                Err(Error::IndexOutOfRange { index: k, len: space.len() })
            } else {
                Ok(space.configuration(k))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let set = SubsetIndicator::new(configs)?;
    let f = quarter_squared_distances(space, &set)?;
    let size = space.len() as f64;
    let mean_exp = f.iter().map(|q| (4.0 * q / 144.0).exp()).sum::<f64>() / size;
    Ok(members.len() as f64 / size * mean_exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: &[f64]) -> Configuration {
        Configuration::new(v.to_vec())
    }

    fn sqrt15_instance() -> (Configuration, SubsetIndicator) {
        let set = SubsetIndicator::new(vec![cfg(&[0.0, 1.0, 0.0]), cfg(&[1.0, 0.0, 0.0])]).unwrap();
        (cfg(&[0.0, 0.0, 1.0]), set)
    }

    #[test]
    fn alpha_distance_examples() {
        let (omega, set) = sqrt15_instance();
        let a = 1.0 / 3f64.sqrt();
        let d = alpha_distance(&omega, &set, &[a, a, a]).unwrap();
        assert!((d - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        let single = SubsetIndicator::new(vec![cfg(&[1.0, 0.0, 1.0])]).unwrap();
        assert_eq!(alpha_distance(&omega, &single, &[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(alpha_distance(&omega, &set, &[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(alpha_distance(&omega, &set, &[1.0, 1.0, 0.0]).is_err());
        assert!(alpha_distance(&omega, &set, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn sqrt_one_and_a_half() {
        let (omega, set) = sqrt15_instance();
        let d = convex_distance(&omega, &set, DEFAULT_TOL).unwrap();
        assert!((d.value - 1.5f64.sqrt()).abs() < 1e-9, "{d:?}");
        assert!(d.gap <= DEFAULT_TOL);
        let w = d.measure.weights();
        assert!((w[0] - 0.5).abs() < 1e-6);
        // dual side: α = (1, 1, 2)/√6
        let s = 6f64.sqrt();
        let lower = alpha_distance(&omega, &set, &[1.0 / s, 1.0 / s, 2.0 / s]).unwrap();
        assert!((lower - 1.5f64.sqrt()).abs() < 1e-12);
        let grid = convex_distance_bruteforce(&omega, &set, 1000).unwrap();
        assert!((grid - 1.224_74).abs() < 1e-3);
    }

    #[test]
    fn members_and_singletons() {
        let (omega, _) = sqrt15_instance();
        let inside = SubsetIndicator::new(vec![cfg(&[1.0, 0.0, 0.0]), omega.clone()]).unwrap();
        assert_eq!(convex_distance(&omega, &inside, DEFAULT_TOL).unwrap().value, 0.0);
        assert_eq!(convex_distance_bruteforce(&omega, &inside, 10).unwrap(), 0.0);
        let single = SubsetIndicator::new(vec![cfg(&[1.0, 1.0, 0.0])]).unwrap();
        let d = convex_distance(&omega, &single, DEFAULT_TOL).unwrap();
        assert!((d.value - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(convex_distance_bruteforce(&omega, &single, 7).unwrap(), d.value);
    }

    #[test]
    fn set_validation() {
        assert!(SubsetIndicator::new(vec![]).is_err());
        assert!(SubsetIndicator::new(vec![cfg(&[0.0, 1.0]), cfg(&[0.0, 1.0])]).is_err());
        assert!(SubsetIndicator::new(vec![cfg(&[0.0, 1.0]), cfg(&[0.0])]).is_err());
        let spec = MultisliceSpec::new(vec![2, 1], vec![0.0, 1.0]).unwrap();
        assert!(SubsetIndicator::in_space(&spec, vec![cfg(&[1.0, 1.0, 0.0])]).is_err());
        assert!(SubsetIndicator::in_space(&spec, vec![cfg(&[0.0, 1.0])]).is_ok());
    }

    #[test]
    fn symmetry_detection() {
        let sym = SubsetIndicator::new(vec![cfg(&[0.0, 1.0]), cfg(&[1.0, 0.0]), cfg(&[0.0, 0.0])])
            .unwrap();
        assert!(sym.is_symmetric());
        let not = SubsetIndicator::new(vec![cfg(&[0.0, 1.0])]).unwrap();
        assert!(!not.is_symmetric());
        assert!(not.require_symmetric().is_err());
    }

    #[test]
    fn self_bounding_small_cases() {
        let spec = MultisliceSpec::new(vec![2, 1], vec![0.0, 1.0]).unwrap();
        let whole = SubsetIndicator::new(crate::space::enumerate(&spec, 10).unwrap()).unwrap();
        let r = check_self_bounding(&spec, &whole).unwrap();
        assert!(r.passed);
        assert_eq!(r.gamma_slack, 0.0);
        let single = SubsetIndicator::new(vec![cfg(&[0.0, 1.0, 0.0])]).unwrap();
        assert!(check_self_bounding(&spec, &single).unwrap().passed);
    }

    #[test]
    fn talagrand_whole_space_is_one() {
        let spec = MultisliceSpec::new(vec![2, 2], vec![0.0, 1.0]).unwrap();
        let space = StateSpace::new(&spec, 100).unwrap();
        let all: Vec<usize> = (0..space.len()).collect();
        assert!((talagrand_product(&space, &all).unwrap() - 1.0).abs() < 1e-15);
        assert!(talagrand_product(&space, &[0]).unwrap() <= 1.0);
    }
}
