use crate::error::{Error, Result};
use crate::spec::MultisliceSpec;

/// Arithmetic mean of a sample.
pub fn sample_mean(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("sample mean of an empty sample".into()));
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// `(1/(n-1) Σ (ω_i − ω̄)²)^{1/2}`.
pub fn sample_std(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "sample standard deviation needs at least two entries".into(),
        ));
    }
    let mean = sample_mean(xs)?;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((ss / (xs.len() - 1) as f64).sqrt())
}

/// Pairwise form `(1/(n(n-1)) Σ_{i<j} (ω_i − ω_j)²)^{1/2}`; equal to
/// [`sample_std`] in exact arithmetic.
pub fn sample_std_pairwise(xs: &[f64]) -> Result<f64> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "sample standard deviation needs at least two entries".into(),
        ));
    }
    let mut ss = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            ss += (xs[i] - xs[j]) * (xs[i] - xs[j]);
        }
    }
    Ok((ss / (n * (n - 1)) as f64).sqrt())
}

/// One-sided Kolmogorov statistic `sup_t (F̂_n(t) − F(t))` of a prefix
/// against the population CDF.
///
/// Both CDFs are right-continuous step functions jumping only at population
/// values, so the supremum is attained at one of them (or is 0, the value
/// left of `x_1`).
pub fn kolmogorov_stat(prefix: &[f64], spec: &MultisliceSpec) -> Result<f64> {
    if prefix.is_empty() {
        return Err(Error::InvalidArgument("Kolmogorov statistic of an empty prefix".into()));
    }
    let n = prefix.len() as f64;
    let total = spec.total() as f64;
    let mut emp_count = vec![0usize; spec.num_values()];
    for &x in prefix {
        let l = spec.value_index(x).ok_or_else(|| {
            Error::InvalidArgument(format!("value {x} is not in the spec's value set"))
        })?;
        emp_count[l] += 1;
    }
    let mut emp = 0usize;
    let mut pop = 0usize;
    let mut sup = 0.0f64;
    for (l, &k) in spec.kappa().iter().enumerate() {
        emp += emp_count[l];
        pop += k;
        sup = sup.max(emp as f64 / n - pop as f64 / total);
    }
    Ok(sup)
}
