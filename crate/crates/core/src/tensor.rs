//! Dense tensors and the partition-indexed norms `‖A‖_𝓘`.
//!
//! For a partition `𝓘 = {I_1, …, I_k}` of the axes, `‖A‖_𝓘` is the supremum of
//! `⟨A, x^(1) ⊗ ⋯ ⊗ x^(k)⟩` over unit vectors `x^(ℓ)` living on the flattened
//! index set of block `I_ℓ`. The coarsest partition gives the Hilbert–Schmidt
//! norm, the finest gives the operator norm.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::StreamFactory;

/// Row-major dense tensor with arbitrary (possibly rectangular) shape.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::ShapeMismatch("tensor order must be at least 1".into()));
        }
        let size: usize = shape.iter().product();
        if size != data.len() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape:?} needs {size} entries, got {}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("tensor entries must be finite".into()));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let size = shape.iter().product();
        Self {
            shape,
            data: vec![0.0; size],
        }
    }

    /// Cubical tensor of order `d` with side `n`, entries from `f(index)`.
    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(shape);
        let mut idx = vec![0; t.order()];
        for k in 0..t.data.len() {
            t.unravel(k, &mut idx);
            t.data[k] = f(&idx);
        }
        t
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order());
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    fn unravel(&self, mut k: usize, out: &mut [usize]) {
        for (slot, &n) in out.iter_mut().zip(&self.shape).rev() {
            *slot = k % n;
            k /= n;
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let k = self.offset(idx);
        self.data[k] = value;
    }

    pub fn add_at(&mut self, idx: &[usize], value: f64) {
        let k = self.offset(idx);
        self.data[k] += value;
    }

    pub fn scaled(&self, c: f64) -> DenseTensor {
        DenseTensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// `(Σ a²)^{1/2}`.
    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Nonzero entries as `(index, value)` pairs.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, f64)> {
        let mut idx = vec![0; self.order()];
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(k, &v)| {
                self.unravel(k, &mut idx);
                (idx.clone(), v)
            })
            .collect()
    }

    /// Builds a tensor from sparse `(index, value)` entries.
    pub fn from_entries(shape: Vec<usize>, entries: &[(Vec<usize>, f64)]) -> Result<Self> {
        let mut t = DenseTensor::new(shape.clone(), vec![0.0; shape.iter().product()])?;
        for (idx, v) in entries {
            if idx.len() != shape.len() || idx.iter().zip(&shape).any(|(i, n)| i >= n) {
                return Err(Error::ShapeMismatch(format!(
                    "index {idx:?} does not fit shape {shape:?}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidArgument("tensor entries must be finite".into()));
            }
            t.add_at(idx, *v);
        }
        Ok(t)
    }
}

/// A set partition of the axes `{0, …, d-1}`, stored canonically: each block
/// sorted, blocks ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    order: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(order: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; order];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidArgument("partition blocks must be nonempty".into()));
            }
            block.sort_unstable();
            for &a in block.iter() {
                if a >= order || seen[a] {
                    return Err(Error::InvalidArgument(format!(
                        "axis {a} is out of range or repeated in partition of order {order}"
                    )));
                }
                seen[a] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(
                "partition blocks must cover every axis".into(),
            ));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { order, blocks })
    }

    /// `{{0}, …, {d-1}}`: the operator-norm partition.
    pub fn finest(order: usize) -> Self {
        Self {
            order,
            blocks: (0..order).map(|a| vec![a]).collect(),
        }
    }

    /// `{{0, …, d-1}}`: the Hilbert–Schmidt partition.
    pub fn coarsest(order: usize) -> Self {
        Self {
            order,
            blocks: vec![(0..order).collect()],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `|𝓘|`, the number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.order == coarser.order
            && self.blocks.iter().all(|b| {
                coarser
                    .blocks
                    .iter()
                    .any(|c| b.iter().all(|a| c.contains(a)))
            })
    }
}

impl fmt::Display for Partition {
    /// 1-based axes, e.g. `{1,3}{2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            let inner: Vec<String> = block.iter().map(|a| (a + 1).to_string()).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse partition `{s}`"));
        let mut blocks = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(bad)?;
            let end = body.find('}').ok_or_else(bad)?;
            let block = body[..end]
                .split(',')
                .map(|t| t.trim().parse::<usize>().ok().filter(|&a| a >= 1).map(|a| a - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(bad)?;
            blocks.push(block);
            rest = body[end + 1..].trim_start();
        }
        let order = blocks.iter().map(Vec::len).sum();
        Partition::new(order, blocks)
    }
}

/// All set partitions of `{0, …, d-1}` (Bell(d) of them), via restricted
/// growth strings.
pub fn enumerate_partitions(d: usize) -> Result<Vec<Partition>> {
    if !(1..=6).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "partition order must lie in 1..=6, got {d}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; d];
    loop {
        let k = rgs.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); k];
        for (axis, &b) in rgs.iter().enumerate() {
            blocks[b].push(axis);
        }
        out.push(Partition { order: d, blocks });

        // next restricted growth string
        let mut pos = d;
        loop {
            if pos == 1 {
                return Ok(out);
            }
            pos -= 1;
            let prefix_max = rgs[..pos].iter().copied().max().unwrap_or(0);
            if rgs[pos] <= prefix_max {
                rgs[pos] += 1;
                for r in rgs.iter_mut().skip(pos + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
    pub max_sweeps: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            tol: 1e-10,
            seed: 0,
            max_sweeps: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    /// Best value over all restarts; a lower bound on `‖A‖_𝓘`.
    pub value: f64,
    pub restarts: usize,
    /// Best minus worst restart value. Zero when every restart agrees.
    pub spread: f64,
    /// Largest number of sweeps any restart used.
    pub sweeps: usize,
}

/// `‖A‖_𝓘` by block-wise alternating maximization with random restarts.
///
/// With every block but one fixed, the maximizer over the free block is the
/// normalized contraction of `A` against the fixed vectors, and the value is
/// the contraction's Euclidean norm.
pub fn partition_norm(
    tensor: &DenseTensor,
    partition: &Partition,
    opts: &NormOptions,
) -> Result<NormEstimate> {
    if partition.order() != tensor.order() {
        return Err(Error::ShapeMismatch(format!(
            "partition of order {} for a tensor of order {}",
            partition.order(),
            tensor.order()
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    let layout = BlockLayout::new(tensor, partition);
    let streams = StreamFactory::new(opts.seed);

    let mut best = f64::NEG_INFINITY;
    let mut worst = f64::INFINITY;
    let mut sweeps_max = 0;
    for r in 0..opts.restarts {
        let mut rng = streams.stream(r as u64);
        let mut xs: Vec<Vec<f64>> = layout
            .dims
            .iter()
            .map(|&n| {
                let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                normalize(&mut v);
                v
            })
            .collect();
        let (value, sweeps) = layout.maximize(tensor.data(), &mut xs, opts);
        best = best.max(value);
        worst = worst.min(value);
        sweeps_max = sweeps_max.max(sweeps);
    }
    Ok(NormEstimate {
        value: best,
        restarts: opts.restarts,
        spread: best - worst,
        sweeps: sweeps_max,
    })
}

/// `‖A‖_HS`, exactly.
pub fn hs_norm(tensor: &DenseTensor) -> f64 {
    tensor.hs_norm()
}

/// `‖A‖_op` via the finest partition.
pub fn operator_norm(tensor: &DenseTensor, opts: &NormOptions) -> Result<NormEstimate> {
    partition_norm(tensor, &Partition::finest(tensor.order()), opts)
}

/// Per-entry block coordinates of the tensor under a partition.
struct BlockLayout {
    dims: Vec<usize>,
    /// `coords[e * k + b]` is the flattened block-`b` index of entry `e`.
    coords: Vec<usize>,
}

impl BlockLayout {
    fn new(tensor: &DenseTensor, partition: &Partition) -> Self {
        let shape = tensor.shape();
        let dims: Vec<usize> = partition
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&a| shape[a]).product())
            .collect();
        let k = dims.len();
        let mut coords = Vec::with_capacity(tensor.len() * k);
        let mut idx = vec![0; tensor.order()];
        for e in 0..tensor.len() {
            tensor.unravel(e, &mut idx);
            for block in partition.blocks() {
                coords.push(block.iter().fold(0, |acc, &a| acc * shape[a] + idx[a]));
            }
        }
        Self { dims, coords }
    }

    fn maximize(&self, data: &[f64], xs: &mut [Vec<f64>], opts: &NormOptions) -> (f64, usize) {
        let k = self.dims.len();
        let mut prev = f64::NEG_INFINITY;
        let mut value = 0.0;
        for sweep in 1..=opts.max_sweeps {
            for b in 0..k {
                let mut v = vec![0.0; self.dims[b]];
                for (e, &a) in data.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    let c = &self.coords[e * k..(e + 1) * k];
                    let mut prod = a;
                    for (other, x) in xs.iter().enumerate() {
                        if other != b {
                            prod *= x[c[other]];
                        }
                    }
                    v[c[b]] += prod;
                }
                value = normalize(&mut v);
                if value > 0.0 {
                    xs[b] = v;
                }
            }
            if value == 0.0 || (value - prev).abs() <= opts.tol * value {
                return (value, sweep);
            }
            prev = value;
        }
        (value, opts.max_sweeps)
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6)
            .map(|d| enumerate_partitions(d).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(7).is_err());
    }

    #[test]
    fn partitions_are_distinct_and_valid() {
        let parts = enumerate_partitions(4).unwrap();
        for (i, p) in parts.iter().enumerate() {
            assert_eq!(Partition::new(4, p.blocks().to_vec()).unwrap(), *p);
            for q in &parts[i + 1..] {
                assert_ne!(p, q);
            }
        }
        assert_eq!(parts[0], Partition::coarsest(4));
        assert_eq!(*parts.last().unwrap(), Partition::finest(4));
    }

    #[test]
    fn partition_display_round_trip() {
        for p in enumerate_partitions(4).unwrap() {
            assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
        }
        assert_eq!("{1,3}{2}".parse::<Partition>().unwrap().blocks(), &[vec![0, 2], vec![1]]);
        assert!("{1,1}".parse::<Partition>().is_err());
        assert!("{1}{3}".parse::<Partition>().is_err());
    }

    #[test]
    fn refinement_relation() {
        let fine = Partition::finest(3);
        let mid: Partition = "{1,2}{3}".parse().unwrap();
        let coarse = Partition::coarsest(3);
        assert!(fine.refines(&mid));
        assert!(mid.refines(&coarse));
        assert!(!coarse.refines(&mid));
        assert!(!mid.refines(&"{1,3}{2}".parse().unwrap()));
    }

    #[test]
    fn identity_operator_norm_is_one() {
        let eye = DenseTensor::from_fn(vec![3, 3], |i| if i[0] == i[1] { 1.0 } else { 0.0 });
        let est = operator_norm(&eye, &NormOptions::default()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coarsest_partition_is_hs() {
        let t = DenseTensor::from_fn(vec![2, 3, 2], |i| (i[0] as f64 - i[1] as f64) * 0.5 + i[2] as f64);
        let est = partition_norm(&t, &Partition::coarsest(3), &NormOptions::default()).unwrap();
        assert!((est.value - t.hs_norm()).abs() <= 1e-12 * t.hs_norm());
    }

    #[test]
    fn all_ones_cube() {
        let t = DenseTensor::from_fn(vec![2, 2, 2], |_| 1.0);
        assert!((t.hs_norm() - 8f64.sqrt()).abs() < 1e-15);
        // rank one: (1,1)⊗(1,1)⊗(1,1), each factor of norm √2
        let op = operator_norm(&t, &NormOptions::default()).unwrap();
        assert!((op.value - 8f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn zero_tensor_has_zero_norms() {
        let t = DenseTensor::zeros(vec![3, 2, 2]);
        for p in enumerate_partitions(3).unwrap() {
            assert_eq!(partition_norm(&t, &p, &NormOptions::default()).unwrap().value, 0.0);
        }
    }

    #[test]
    fn rejects_mismatched_partition() {
        let t = DenseTensor::zeros(vec![2, 2]);
        assert!(partition_norm(&t, &Partition::finest(3), &NormOptions::default()).is_err());
        assert!(DenseTensor::new(vec![2, 2], vec![0.0; 3]).is_err());
    }
}
