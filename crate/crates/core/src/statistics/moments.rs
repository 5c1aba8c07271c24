use crate::error::{Error, Result};
use crate::spec::{falling_factorial, MultisliceSpec};

/// Largest moment order supported by [`product_moment`].
pub const MAX_MOMENT_ORDER: usize = 6;

/// `ℙ_κ(ω_{i_1} = x_{l_1}, …, ω_{i_k} = x_{l_k})` for any `k` distinct
/// positions. By exchangeability this does not depend on the positions.
pub fn joint_probability(spec: &MultisliceSpec, value_indices: &[usize]) -> Result<f64> {
    let total = spec.total();
    if value_indices.len() > total {
        return Err(Error::InvalidArgument(format!(
            "{} positions requested from a configuration of length {total}",
            value_indices.len()
        )));
    }
    let mut used = vec![0usize; spec.num_values()];
    let mut p = 1.0;
    for (r, &l) in value_indices.iter().enumerate() {
        let kappa = *spec.kappa().get(l).ok_or(Error::IndexOutOfRange {
            index: l,
            len: spec.num_values(),
        })?;
        if used[l] >= kappa {
            return Ok(0.0);
        }
        p *= (kappa - used[l]) as f64 / (total - r) as f64;
        used[l] += 1;
    }
    Ok(p)
}

/// `𝔼_κ[ω_{i_1} ⋯ ω_{i_k}]` for distinct positions, by summing over all
/// `L^k` value assignments with their multivariate hypergeometric weights.
pub fn product_moment(spec: &MultisliceSpec, indices: &[usize]) -> Result<f64> {
    let total = spec.total();
    for (a, &i) in indices.iter().enumerate() {
        if i >= total {
            return Err(Error::IndexOutOfRange { index: i, len: total });
        }
        if indices[..a].contains(&i) {
            return Err(Error::InvalidArgument(format!(
                "product moment needs distinct positions, {i} is repeated"
            )));
        }
    }
    product_moment_of_order(spec, indices.len())
}

/// `𝔼_κ` of a product over any `k` distinct positions.
pub fn product_moment_of_order(spec: &MultisliceSpec, k: usize) -> Result<f64> {
    if k > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!(
            "product moments are limited to order {MAX_MOMENT_ORDER}, got {k}"
        )));
    }
    if k > spec.total() {
        return Err(Error::InvalidArgument(format!(
            "order {k} exceeds the configuration length {}",
            spec.total()
        )));
    }
    let l_count = spec.num_values();
    let mut assignment = vec![0usize; k];
    let mut sum = 0.0;
    loop {
        let p = joint_probability(spec, &assignment)?;
        if p > 0.0 {
            let prod: f64 = assignment.iter().map(|&l| spec.values()[l]).product();
            sum += p * prod;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(sum);
            }
            assignment[pos] += 1;
            if assignment[pos] < l_count {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// `M (M-1) ⋯ (M-k+1) / (N (N-1) ⋯ (N-k+1))`: the 0/1 product moment with
/// `M` ones among `N` positions.
pub fn binary_product_moment(total: usize, ones: usize, k: usize) -> f64 {
    if k > total {
        return 0.0;
    }
    falling_factorial(ones as f64, k) / falling_factorial(total as f64, k)
}
