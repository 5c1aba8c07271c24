//! Exhaustive state spaces: `Ω_κ` with its switch table, and the prefix
//! space `Ω_{κ,n}` with exact push-forward weights.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::spec::{multinomial, Configuration, MultisliceSpec};

/// Every element of `Ω_κ` in lexicographic order of value-index vectors.
pub fn enumerate(spec: &MultisliceSpec, cap: u128) -> Result<Vec<Configuration>> {
    let states = enumerate_indices(spec, cap)?;
    Ok(states.iter().map(|s| spec.from_indices(s)).collect())
}

/// Like [`enumerate`] but yields value-index vectors.
pub fn enumerate_indices(spec: &MultisliceSpec, cap: u128) -> Result<Vec<Vec<usize>>> {
    let size = spec.cardinality()?;
    if size > cap {
        return Err(Error::too_large(size, cap));
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut remaining = spec.kappa().to_vec();
    let mut current = Vec::with_capacity(spec.total());
    fill(&mut remaining, &mut current, spec.total(), &mut out);
    Ok(out)
}

fn fill(remaining: &mut [usize], current: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    for l in 0..remaining.len() {
        if remaining[l] > 0 {
            remaining[l] -= 1;
            current.push(l);
            fill(remaining, current, len, out);
            current.pop();
            remaining[l] += 1;
        }
    }
}

/// All unordered position pairs `(i, j)` with `i < j < n`.
pub fn position_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// The enumerated multislice together with its precomputed switch table.
#[derive(Debug, Clone)]
pub struct StateSpace {
    spec: MultisliceSpec,
    states: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    pairs: Vec<(usize, usize)>,
    switch: Vec<usize>,
}

impl StateSpace {
    pub fn new(spec: &MultisliceSpec, cap: u128) -> Result<Self> {
        let states = enumerate_indices(spec, cap)?;
        let lookup: HashMap<_, _> = states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        let pairs = position_pairs(spec.total());
        let mut switch = Vec::with_capacity(states.len() * pairs.len());
        let mut buf = Vec::new();
        for s in &states {
            for &(i, j) in &pairs {
                buf.clone_from(s);
                buf.swap(i, j);
                switch.push(lookup[&buf]);
            }
        }
        Ok(Self {
            spec: spec.clone(),
            states,
            lookup,
            pairs,
            switch,
        })
    }

    pub fn spec(&self) -> &MultisliceSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `N`, the configuration length.
    pub fn positions(&self) -> usize {
        self.spec.total()
    }

    pub fn state(&self, k: usize) -> &[usize] {
        &self.states[k]
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn configuration(&self, k: usize) -> Configuration {
        self.spec.from_indices(&self.states[k])
    }

    /// Real-valued entries of state `k`.
    pub fn point(&self, k: usize) -> Vec<f64> {
        self.states[k]
            .iter()
            .map(|&l| self.spec.values()[l])
            .collect()
    }

    pub fn index_of(&self, idx: &[usize]) -> Option<usize> {
        self.lookup.get(idx).copied()
    }

    pub fn index_of_configuration(&self, cfg: &Configuration) -> Option<usize> {
        self.spec
            .to_indices(cfg)
            .ok()
            .and_then(|idx| self.index_of(&idx))
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Index of `τ_ij ω_k` where `(i, j) = pairs()[pair]`.
    pub fn switched(&self, k: usize, pair: usize) -> usize {
        self.switch[k * self.pairs.len() + pair]
    }

    /// Switched indices for all pairs of state `k`.
    pub fn switched_all(&self, k: usize) -> &[usize] {
        let p = self.pairs.len();
        &self.switch[k * p..(k + 1) * p]
    }
}

/// `Ω_{κ,n}` with `ℙ_{κ,n}` weights and admissible single-site replacements.
#[derive(Debug, Clone)]
pub struct PrefixSpace {
    spec: MultisliceSpec,
    n: usize,
    states: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    weights: Vec<f64>,
    replacements: Vec<Vec<usize>>,
}

impl PrefixSpace {
    pub fn new(spec: &MultisliceSpec, n: usize, cap: u128) -> Result<Self> {
        let total = spec.total();
        if n == 0 || n > total {
            return Err(Error::InvalidArgument(format!(
                "prefix length must lie in 1..={total}, got {n}"
            )));
        }
        let full = spec.cardinality()? as f64;
        let mut states = Vec::new();
        let mut remaining = spec.kappa().to_vec();
        let mut current = Vec::with_capacity(n);
        fill_prefix(&mut remaining, &mut current, n, &mut states, cap)?;

        let lookup: HashMap<_, _> = states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();

        let weights = states
            .iter()
            .map(|s| {
                let mut rest = spec.kappa().to_vec();
                for &l in s {
                    rest[l] -= 1;
                }
                let completions = multinomial(&rest).expect("completions fit below |Ω_κ|");
                completions as f64 / full
            })
            .collect();

        let l_count = spec.num_values();
        let mut replacements = Vec::with_capacity(states.len() * n);
        let mut buf = Vec::new();
        for s in &states {
            let mut counts = vec![0usize; l_count];
            for &l in s {
                counts[l] += 1;
            }
            for i in 0..n {
                let reach: Vec<usize> = (0..l_count)
                    .filter(|&l| l == s[i] || counts[l] < spec.kappa()[l])
                    .map(|l| {
                        buf.clone_from(s);
                        buf[i] = l;
                        lookup[&buf]
                    })
                    .collect();
                replacements.push(reach);
            }
        }

        Ok(Self {
            spec: spec.clone(),
            n,
            states,
            lookup,
            weights,
            replacements,
        })
    }

    pub fn spec(&self) -> &MultisliceSpec {
        &self.spec
    }

    /// Prefix length `n`.
    pub fn prefix_len(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, k: usize) -> &[usize] {
        &self.states[k]
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn configuration(&self, k: usize) -> Configuration {
        self.spec.from_indices(&self.states[k])
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        self.states[k]
            .iter()
            .map(|&l| self.spec.values()[l])
            .collect()
    }

    pub fn index_of(&self, idx: &[usize]) -> Option<usize> {
        self.lookup.get(idx).copied()
    }

    /// `ℙ_{κ,n}({ω_k})`.
    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// States reachable from `k` by an admissible replacement at position
    /// `i`, including `k` itself.
    pub fn replacements(&self, k: usize, i: usize) -> &[usize] {
        &self.replacements[k * self.n + i]
    }

    /// Index of the state with positions `i` and `i + 1` exchanged.
    pub fn adjacent_swap(&self, k: usize, i: usize) -> usize {
        let mut buf = self.states[k].clone();
        buf.swap(i, i + 1);
        self.lookup[&buf]
    }
}

fn fill_prefix(
    remaining: &mut [usize],
    current: &mut Vec<usize>,
    n: usize,
    out: &mut Vec<Vec<usize>>,
    cap: u128,
) -> Result<()> {
    if current.len() == n {
        if out.len() as u128 >= cap {
            return Err(Error::too_large(format!("> {cap}"), cap));
        }
        out.push(current.clone());
        return Ok(());
    }
    for l in 0..remaining.len() {
        if remaining[l] > 0 {
            remaining[l] -= 1;
            current.push(l);
            fill_prefix(remaining, current, n, out, cap)?;
            current.pop();
            remaining[l] += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::DEFAULT_ENUMERATION_CAP as CAP;

    fn entries(cfgs: &[Configuration]) -> Vec<Vec<f64>> {
        cfgs.iter().map(|c| c.entries().to_vec()).collect()
    }

    #[test]
    fn enumerate_examples() {
        let s = MultisliceSpec::new(vec![1, 1], vec![0.0, 1.0]).unwrap();
        assert_eq!(
            entries(&enumerate(&s, CAP).unwrap()),
            vec![vec![0.0, 1.0], vec![1.0, 0.0]]
        );

        let s = MultisliceSpec::new(vec![2, 1], vec![0.0, 1.0]).unwrap();
        assert_eq!(
            entries(&enumerate(&s, CAP).unwrap()),
            vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]
        );

        let s = MultisliceSpec::new(vec![1, 1, 1], vec![1.0, 2.0, 3.0]).unwrap();
        let all = entries(&enumerate(&s, CAP).unwrap());
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![1.0, 2.0, 3.0]);
        assert_eq!(all[5], vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn enumerate_respects_cap() {
        let s = MultisliceSpec::with_index_values(vec![5, 5]).unwrap();
        assert!(matches!(
            enumerate(&s, 100),
            Err(Error::EnumerationTooLarge { .. })
        ));
        assert_eq!(enumerate(&s, 252).unwrap().len(), 252);
    }

    #[test]
    fn switch_table_is_an_involution() {
        let s = MultisliceSpec::with_index_values(vec![2, 2, 1]).unwrap();
        let space = StateSpace::new(&s, CAP).unwrap();
        for k in 0..space.len() {
            for p in 0..space.pairs().len() {
                assert_eq!(space.switched(space.switched(k, p), p), k);
            }
        }
    }

    #[test]
    fn prefix_weights_sum_to_one() {
        let s = MultisliceSpec::with_index_values(vec![3, 2, 2]).unwrap();
        for n in 1..=s.total() {
            let p = PrefixSpace::new(&s, n, CAP).unwrap();
            let total: f64 = p.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "n = {n}: {total}");
        }
    }

    #[test]
    fn prefix_weights_match_hypergeometric() {
        let s = MultisliceSpec::new(vec![2, 2], vec![0.0, 1.0]).unwrap();
        let p = PrefixSpace::new(&s, 2, CAP).unwrap();
        let k = p.index_of(&[1, 1]).unwrap();
        assert!((p.weight(k) - 1.0 / 6.0).abs() < 1e-15);

        let s = MultisliceSpec::new(vec![3, 1], vec![0.0, 1.0]).unwrap();
        let p = PrefixSpace::new(&s, 1, CAP).unwrap();
        assert!((p.weight(p.index_of(&[1]).unwrap()) - 0.25).abs() < 1e-15);
    }
}
