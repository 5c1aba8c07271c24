//! Multislice specifications and configurations.
//!
//! A multislice `Ω_κ` is the set of length-`N` sequences over `L` distinct real
//! values `x_1 < … < x_L` in which `x_ℓ` appears exactly `κ_ℓ` times. A
//! [`Configuration`] is either a full element of `Ω_κ` or a length-`n` prefix
//! of one (an `n`-out-of-`N` sample drawn without replacement).
//!
//! Positions are 0-based throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of states any exhaustive routine will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct MultisliceSpec {
    kappa: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawSpec {
    kappa: Vec<usize>,
    values: Vec<f64>,
}

impl TryFrom<RawSpec> for MultisliceSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        MultisliceSpec::new(raw.kappa, raw.values)
    }
}

impl From<MultisliceSpec> for RawSpec {
    fn from(spec: MultisliceSpec) -> Self {
        RawSpec {
            kappa: spec.kappa,
            values: spec.values,
        }
    }
}

impl MultisliceSpec {
    pub fn new(kappa: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if kappa.len() < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least two distinct values, got L = {}",
                kappa.len()
            )));
        }
        if kappa.len() != values.len() {
            return Err(Error::InvalidSpec(format!(
                "kappa has {} entries but values has {}",
                kappa.len(),
                values.len()
            )));
        }
        if let Some(pos) = kappa.iter().position(|&k| k == 0) {
            return Err(Error::InvalidSpec(format!("kappa[{pos}] must be at least 1")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("values must be finite".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(
                "values must be strictly increasing".into(),
            ));
        }
        Ok(Self { kappa, values })
    }

    /// Spec with values `0, 1, …, L-1`.
    pub fn with_index_values(kappa: Vec<usize>) -> Result<Self> {
        let values = (0..kappa.len()).map(|l| l as f64).collect();
        Self::new(kappa, values)
    }

    /// The symmetric-group multislice `κ = (1, …, 1)` on values `1, …, N`.
    pub fn permutations(n: usize) -> Result<Self> {
        Self::new(vec![1; n], (1..=n).map(|v| v as f64).collect())
    }

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_values(&self) -> usize {
        self.kappa.len()
    }

    /// `N = Σ κ_ℓ`.
    pub fn total(&self) -> usize {
        self.kappa.iter().sum()
    }

    /// `|𝒳| = x_L − x_1`.
    pub fn diameter(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }

    pub fn kappa_min(&self) -> usize {
        *self.kappa.iter().min().expect("L >= 2")
    }

    /// Population mean `Σ κ_ℓ x_ℓ / N`.
    pub fn population_mean(&self) -> f64 {
        let s: f64 = self
            .kappa
            .iter()
            .zip(&self.values)
            .map(|(&k, &x)| k as f64 * x)
            .sum();
        s / self.total() as f64
    }

    /// Position of `x` in the value list, by exact bit equality.
    pub fn value_index(&self, x: f64) -> Option<usize> {
        self.values.iter().position(|&v| v.to_bits() == x.to_bits())
    }

    /// `|Ω_κ| = N! / (κ_1! ⋯ κ_L!)`.
    pub fn cardinality(&self) -> Result<u128> {
        multinomial(&self.kappa).ok_or_else(|| Error::too_large("> 2^128", u128::MAX))
    }

    /// Value indices of the sorted arrangement `(0,…,0,1,…,1,…)`.
    pub fn canonical_indices(&self) -> Vec<usize> {
        self.kappa
            .iter()
            .enumerate()
            .flat_map(|(l, &k)| std::iter::repeat_n(l, k))
            .collect()
    }

    pub fn canonical(&self) -> Configuration {
        self.from_indices(&self.canonical_indices())
    }

    pub fn from_indices(&self, idx: &[usize]) -> Configuration {
        Configuration::new(idx.iter().map(|&l| self.values[l]).collect())
    }

    /// Converts a configuration to value indices, failing on foreign values.
    pub fn to_indices(&self, cfg: &Configuration) -> Result<Vec<usize>> {
        cfg.entries()
            .iter()
            .map(|&x| {
                self.value_index(x).ok_or_else(|| {
                    Error::InvalidArgument(format!("value {x} is not in the spec's value set"))
                })
            })
            .collect()
    }

    /// Counts per value of the entries of `cfg`.
    pub fn counts(&self, cfg: &Configuration) -> Result<Vec<usize>> {
        let mut counts = vec![0; self.num_values()];
        for l in self.to_indices(cfg)? {
            counts[l] += 1;
        }
        Ok(counts)
    }

    /// True iff `cfg` is an element of `Ω_κ`.
    pub fn is_member(&self, cfg: &Configuration) -> bool {
        cfg.len() == self.total() && self.counts(cfg).is_ok_and(|c| c == self.kappa)
    }

    /// True iff `cfg` is an element of `Ω_{κ,n}` for `n = cfg.len()`.
    pub fn is_prefix(&self, cfg: &Configuration) -> bool {
        cfg.len() <= self.total()
            && self
                .counts(cfg)
                .is_ok_and(|c| c.iter().zip(&self.kappa).all(|(a, b)| a <= b))
    }

    /// Population CDF `x ↦ Σ_{ℓ : x_ℓ ≤ x} κ_ℓ / N`.
    pub fn population_cdf(&self, x: f64) -> f64 {
        let below: usize = self
            .kappa
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v <= x)
            .map(|(&k, _)| k)
            .sum();
        below as f64 / self.total() as f64
    }

    /// Human-readable label, e.g. `κ=(2,2) 𝒳={0,1}`.
    pub fn label(&self) -> String {
        let k: Vec<String> = self.kappa.iter().map(|k| k.to_string()).collect();
        let v: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("kappa=({}) values={{{}}}", k.join(","), v.join(","))
    }
}

/// A full or prefix arrangement of spec values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration {
    entries: Vec<f64>,
}

impl Configuration {
    pub fn new(entries: Vec<f64>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `τ_ij ω`: exchanges positions `i` and `j`.
    pub fn switch(&self, i: usize, j: usize) -> Result<Configuration> {
        let len = self.len();
        for idx in [i, j] {
            if idx >= len {
                return Err(Error::IndexOutOfRange { index: idx, len });
            }
        }
        if i == j {
            return Err(Error::InvalidArgument(format!(
                "switch needs distinct positions, got i = j = {i}"
            )));
        }
        let mut out = self.clone();
        out.entries.swap(i, j);
        Ok(out)
    }

    /// `pr_n ω`, the first `n` entries.
    pub fn prefix(&self, n: usize) -> Result<Configuration> {
        if n > self.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.len(),
            });
        }
        Ok(Configuration::new(self.entries[..n].to_vec()))
    }

    /// Number of positions where `self` and `other` differ (bit equality).
    pub fn hamming(&self, other: &Configuration) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "configurations of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| a.to_bits() != b.to_bits())
            .count())
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(entries: Vec<f64>) -> Self {
        Configuration::new(entries)
    }
}

/// `C(n, k)` in `u128`, `None` on overflow.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        let g = gcd(acc, i + 1);
        let (a, d) = (acc / g, (i + 1) / g);
        acc = a.checked_mul((n - i) / d)?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Multinomial coefficient `(Σ k)! / Π k!`, `None` on overflow.
pub fn multinomial(counts: &[usize]) -> Option<u128> {
    let mut total: u128 = 0;
    let mut acc: u128 = 1;
    for &k in counts {
        total += k as u128;
        acc = acc.checked_mul(binomial(total, k as u128)?)?;
    }
    Some(acc)
}

/// Falling factorial `n (n-1) ⋯ (n-k+1)` as a float.
pub fn falling_factorial(n: f64, k: usize) -> f64 {
    (0..k).map(|i| n - i as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kappa: &[usize]) -> MultisliceSpec {
        MultisliceSpec::with_index_values(kappa.to_vec()).unwrap()
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(spec(&[1, 1]).cardinality().unwrap(), 2);
        assert_eq!(spec(&[2, 2]).cardinality().unwrap(), 6);
        assert_eq!(spec(&[2, 1, 1]).cardinality().unwrap(), 12);
        assert_eq!(spec(&[10, 10]).cardinality().unwrap(), 184_756);
    }

    #[test]
    fn cardinality_overflow_is_reported() {
        let s = spec(&[20, 20, 20]);
        assert!(s.cardinality().is_ok());
        let huge = MultisliceSpec::with_index_values(vec![40; 20]).unwrap();
        assert!(matches!(
            huge.cardinality(),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(MultisliceSpec::new(vec![1], vec![0.0]).is_err());
        assert!(MultisliceSpec::new(vec![1, 0], vec![0.0, 1.0]).is_err());
        assert!(MultisliceSpec::new(vec![1, 1], vec![1.0, 1.0]).is_err());
        assert!(MultisliceSpec::new(vec![1, 1], vec![2.0, 1.0]).is_err());
        assert!(MultisliceSpec::new(vec![1, 1], vec![0.0]).is_err());
    }

    #[test]
    fn derived_quantities() {
        let s = MultisliceSpec::new(vec![3, 1, 2], vec![-1.0, 0.5, 2.0]).unwrap();
        assert_eq!(s.total(), 6);
        assert_eq!(s.kappa_min(), 1);
        assert_eq!(s.diameter(), 3.0);
        assert_eq!(s.canonical_indices(), vec![0, 0, 0, 1, 2, 2]);
    }

    #[test]
    fn switch_examples() {
        let w = Configuration::new(vec![0.0, 1.0, 0.0]);
        assert_eq!(w.switch(0, 1).unwrap().entries(), &[1.0, 0.0, 0.0]);
        assert_eq!(w.switch(0, 2).unwrap(), w);
        assert_eq!(w.switch(1, 2).unwrap().switch(1, 2).unwrap(), w);
        assert!(matches!(
            w.switch(0, 3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
        assert!(w.switch(1, 1).is_err());
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..40u128 {
            for k in 1..n {
                assert_eq!(
                    binomial(n, k).unwrap(),
                    binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn spec_serde_validates() {
        let s: MultisliceSpec = toml::from_str("kappa = [2, 1]\nvalues = [0.0, 1.0]").unwrap();
        assert_eq!(s.total(), 3);
        let bad: std::result::Result<MultisliceSpec, _> =
            toml::from_str("kappa = [2, 1]\nvalues = [1.0, 0.0]");
        assert!(bad.is_err());
    }
}
