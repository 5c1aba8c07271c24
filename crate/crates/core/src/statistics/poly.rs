use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::moments::product_moment_of_order;
use crate::error::{Error, Result};
use crate::spec::MultisliceSpec;
use crate::tensor::DenseTensor;

/// Largest dense derivative tensor we are willing to build (`64³` entries).
pub const MAX_DENSE_ENTRIES: usize = 64 * 64 * 64;

/// `f(ω) = a₀ + Σ a_i ω_i + Σ_{i<j} a_ij ω_i ω_j + …`, stored sparsely with
/// strictly increasing index tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

/// One serialized monomial; `order = indices.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub order: usize,
    pub indices: Vec<usize>,
    pub coefficient: f64,
}

impl MultilinearPolynomial {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `coefficient · Π_{i ∈ indices} ω_i`. Indices may come in any
    /// order but must be distinct.
    pub fn add_term(&mut self, indices: &[usize], coefficient: f64) -> Result<()> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "multilinear monomial with repeated index: {indices:?}"
            )));
        }
        if let Some(&i) = idx.iter().find(|&&i| i >= self.num_vars) {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.num_vars,
            });
        }
        if !coefficient.is_finite() {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        *self.terms.entry(idx).or_insert(0.0) += coefficient;
        Ok(())
    }

    pub fn with_term(mut self, indices: &[usize], coefficient: f64) -> Result<Self> {
        self.add_term(indices, coefficient)?;
        Ok(self)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, _)| k.len())
            .max()
            .unwrap_or(0)
    }

    fn check_point(&self, omega: &[f64]) -> Result<()> {
        if omega.len() != self.num_vars {
            return Err(Error::ShapeMismatch(format!(
                "polynomial in {} variables evaluated at a point of length {}",
                self.num_vars,
                omega.len()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, omega: &[f64]) -> Result<f64> {
        self.check_point(omega)?;
        Ok(self
            .terms
            .iter()
            .map(|(idx, &c)| c * idx.iter().map(|&i| omega[i]).product::<f64>())
            .sum())
    }

    fn check_order(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.degree() {
            return Err(Error::InvalidArgument(format!(
                "derivative order must lie in 1..={}, got {k}",
                self.degree()
            )));
        }
        let entries = self.num_vars.checked_pow(k as u32).unwrap_or(usize::MAX);
        if entries > MAX_DENSE_ENTRIES {
            return Err(Error::InvalidArgument(format!(
                "dense derivative tensor of order {k} in {} variables is too large",
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Accumulates `∇^k f` with `weight(rest)` supplying the factor contributed
    /// by the variables not differentiated.
    fn derivative(&self, k: usize, mut weight: impl FnMut(&[usize]) -> f64) -> DenseTensor {
        let mut out = DenseTensor::zeros(vec![self.num_vars; k]);
        let mut subset = Vec::with_capacity(k);
        let mut rest = Vec::new();
        for (idx, &c) in &self.terms {
            if idx.len() < k || c == 0.0 {
                continue;
            }
            for_each_subset(idx.len(), k, &mut subset, &mut |chosen| {
                rest.clear();
                let mut it = chosen.iter().peekable();
                for (pos, &i) in idx.iter().enumerate() {
                    if it.peek() == Some(&&pos) {
                        it.next();
                    } else {
                        rest.push(i);
                    }
                }
                let value = c * weight(&rest);
                let picked: Vec<usize> = chosen.iter().map(|&p| idx[p]).collect();
                for_each_permutation(&picked, &mut |perm| out.add_at(perm, value));
            });
        }
        out
    }

    /// `∇^k f(ω)` as a dense `N^k` tensor; zero on repeated indices.
    pub fn gradient_tensor(&self, omega: &[f64], k: usize) -> Result<DenseTensor> {
        self.check_point(omega)?;
        self.check_order(k)?;
        Ok(self.derivative(k, |rest| rest.iter().map(|&i| omega[i]).product()))
    }

    /// `∇f(ω)`.
    pub fn gradient(&self, omega: &[f64]) -> Result<Vec<f64>> {
        self.check_point(omega)?;
        let mut g = vec![0.0; self.num_vars];
        for (idx, &c) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let others: f64 = idx
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != pos)
                    .map(|(_, &j)| omega[j])
                    .product();
                g[i] += c * others;
            }
        }
        Ok(g)
    }

    /// `𝔼_κ ∇^k f`, using exchangeable product moments of the remaining variables.
    pub fn expected_gradient_tensor(&self, spec: &MultisliceSpec, k: usize) -> Result<DenseTensor> {
        if spec.total() != self.num_vars {
            return Err(Error::ShapeMismatch(format!(
                "polynomial in {} variables on a multislice of length {}",
                self.num_vars,
                spec.total()
            )));
        }
        self.check_order(k)?;
        let max_rest = self.degree() - k;
        let moments = (0..=max_rest)
            .map(|r| product_moment_of_order(spec, r))
            .collect::<Result<Vec<f64>>>()?;
        Ok(self.derivative(k, |rest| moments[rest.len()]))
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(idx, &c)| TermRecord {
                order: idx.len(),
                indices: idx.clone(),
                coefficient: c,
            })
            .collect()
    }

    pub fn from_records(num_vars: usize, records: &[TermRecord]) -> Result<Self> {
        let mut p = Self::new(num_vars);
        for r in records {
            if r.order != r.indices.len() {
                return Err(Error::InvalidArgument(format!(
                    "term order {} does not match {} indices",
                    r.order,
                    r.indices.len()
                )));
            }
            p.add_term(&r.indices, r.coefficient)?;
        }
        Ok(p)
    }
}

/// Calls `f` with every `k`-subset of `0..n` as increasing positions.
fn for_each_subset(n: usize, k: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for i in start..n {
            buf.push(i);
            rec(i + 1, n, k, buf, f);
            buf.pop();
        }
    }
    buf.clear();
    rec(0, n, k, buf, f);
}

/// Calls `f` with every ordering of `items` (which are distinct).
fn for_each_permutation(items: &[usize], f: &mut impl FnMut(&[usize])) {
    fn rec(items: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
        if start == items.len() {
            f(items);
            return;
        }
        for i in start..items.len() {
            items.swap(start, i);
            rec(items, start + 1, f);
            items.swap(start, i);
        }
    }
    let mut v = items.to_vec();
    rec(&mut v, 0, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_two() {
        let f = MultilinearPolynomial::new(2).with_term(&[0, 1], 1.0).unwrap();
        assert_eq!(f.eval(&[3.0, -2.0]).unwrap(), -6.0);
        let g = f.gradient_tensor(&[3.0, -2.0], 1).unwrap();
        assert_eq!(g.data(), &[-2.0, 3.0]);
        assert_eq!(f.gradient(&[3.0, -2.0]).unwrap(), vec![-2.0, 3.0]);
        let h = f.gradient_tensor(&[3.0, -2.0], 2).unwrap();
        assert_eq!(h.data(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(f.gradient_tensor(&[3.0, -2.0], 3).is_err());
        assert!(f.gradient_tensor(&[3.0, -2.0], 0).is_err());
    }

    #[test]
    fn top_derivative_is_constant() {
        let f = MultilinearPolynomial::new(4)
            .with_term(&[0, 1, 3], 2.0)
            .unwrap()
            .with_term(&[2], -1.0)
            .unwrap()
            .with_term(&[], 5.0)
            .unwrap();
        let a = f.gradient_tensor(&[1.0, 2.0, 3.0, 4.0], 3).unwrap();
        let b = f.gradient_tensor(&[-1.0, 0.5, 0.0, 7.0], 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(&[3, 0, 1]), 2.0);
        assert_eq!(a.get(&[0, 0, 1]), 0.0);
    }

    #[test]
    fn rejects_repeated_indices() {
        let mut f = MultilinearPolynomial::new(3);
        assert!(f.add_term(&[1, 1], 1.0).is_err());
        assert!(f.add_term(&[3], 1.0).is_err());
        assert!(f.eval(&[0.0; 2]).is_err());
    }

    #[test]
    fn records_round_trip() {
        let f = MultilinearPolynomial::new(5)
            .with_term(&[4, 1], 0.25)
            .unwrap()
            .with_term(&[], -1.0)
            .unwrap();
        let back = MultilinearPolynomial::from_records(5, &f.to_records()).unwrap();
        assert_eq!(back, f);
    }
}
