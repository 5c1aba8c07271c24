//! `G(n, M)` graphs as 0/1 configurations over the edge set, ordered
//! lexicographically by vertex pair.

use rand::seq::index;
use rand::Rng;

use super::poly::MultilinearPolynomial;
use crate::error::{Error, Result};
use crate::spec::{falling_factorial, MultisliceSpec};

/// `n (n-1) / 2`.
pub fn edge_slots(vertices: usize) -> usize {
    vertices * vertices.saturating_sub(1) / 2
}

/// Position of edge `{i, j}` (`i ≠ j`, 0-based vertices).
pub fn edge_index(vertices: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(b < vertices && a != b);
    a * (2 * vertices - a - 1) / 2 + (b - a - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeConfiguration {
    vertices: usize,
    omega: Vec<f64>,
}

impl EdgeConfiguration {
    pub fn new(vertices: usize, omega: Vec<f64>) -> Result<Self> {
        if omega.len() != edge_slots(vertices) {
            return Err(Error::ShapeMismatch(format!(
                "{} vertices need {} edge slots, got {}",
                vertices,
                edge_slots(vertices),
                omega.len()
            )));
        }
        if omega.iter().any(|&w| w != 0.0 && w != 1.0) {
            return Err(Error::InvalidArgument("edge indicators must be 0 or 1".into()));
        }
        Ok(Self { vertices, omega })
    }

    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut omega = vec![0.0; edge_slots(vertices)];
        for &(i, j) in edges {
            if i == j || i >= vertices || j >= vertices {
                return Err(Error::InvalidArgument(format!(
                    "invalid edge ({i}, {j}) for {vertices} vertices"
                )));
            }
            omega[edge_index(vertices, i, j)] = 1.0;
        }
        Ok(Self { vertices, omega })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// `M`, the number of edges present.
    pub fn edge_count(&self) -> usize {
        self.omega.iter().filter(|&&w| w == 1.0).count()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.omega[edge_index(self.vertices, i, j)] == 1.0
    }

    /// `Σ_{i<j<k} ω_ij ω_jk ω_ik`.
    pub fn triangle_count(&self) -> u64 {
        triangle_count(self.vertices, &self.omega)
    }
}

/// Triangle count of a 0/1 edge vector.
pub fn triangle_count(vertices: usize, omega: &[f64]) -> u64 {
    let n = vertices;
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if omega[edge_index(n, i, j)] != 1.0 {
                continue;
            }
            for k in j + 1..n {
                if omega[edge_index(n, j, k)] == 1.0 && omega[edge_index(n, i, k)] == 1.0 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// `G(n, M)` as the multislice `κ = (N − M, M)` on `{0, 1}`. Requires `0 < M < N`.
pub fn gnm_spec(vertices: usize, edges: usize) -> Result<MultisliceSpec> {
    let slots = edge_slots(vertices);
    if edges == 0 || edges >= slots {
        return Err(Error::InvalidArgument(format!(
            "G({vertices}, {edges}) is deterministic; a multislice needs 0 < M < {slots}"
        )));
    }
    MultisliceSpec::new(vec![slots - edges, edges], vec![0.0, 1.0])
}

/// A uniform graph with `vertices` vertices and exactly `edges` edges.
pub fn sample_gnm<R: Rng + ?Sized>(
    vertices: usize,
    edges: usize,
    rng: &mut R,
) -> Result<EdgeConfiguration> {
    let slots = edge_slots(vertices);
    if edges > slots {
        return Err(Error::InvalidArgument(format!(
            "{edges} edges requested but only {slots} slots exist"
        )));
    }
    let mut omega = vec![0.0; slots];
    for e in index::sample(rng, slots, edges) {
        omega[e] = 1.0;
    }
    EdgeConfiguration::new(vertices, omega)
}

/// Every graph with `vertices` vertices and exactly `edges` edges.
pub fn enumerate_gnm(vertices: usize, edges: usize) -> Result<Vec<EdgeConfiguration>> {
    let slots = edge_slots(vertices);
    if edges > slots {
        return Err(Error::InvalidArgument(format!(
            "{edges} edges requested but only {slots} slots exist"
        )));
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(edges);
    fn rec(
        start: usize,
        slots: usize,
        edges: usize,
        vertices: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<EdgeConfiguration>,
    ) {
        if chosen.len() == edges {
            let mut omega = vec![0.0; slots];
            for &e in chosen.iter() {
                omega[e] = 1.0;
            }
            out.push(EdgeConfiguration { vertices, omega });
            return;
        }
        for e in start..slots {
            chosen.push(e);
            rec(e + 1, slots, edges, vertices, chosen, out);
            chosen.pop();
        }
    }
    rec(0, slots, edges, vertices, &mut chosen, &mut out);
    Ok(out)
}

/// `𝔼 f = C(n,3) · M(M−1)(M−2) / (N(N−1)(N−2))` for the triangle count.
pub fn expected_triangles(vertices: usize, edges: usize) -> Result<f64> {
    let slots = edge_slots(vertices);
    if edges > slots {
        return Err(Error::InvalidArgument(format!(
            "M = {edges} exceeds N = {slots}"
        )));
    }
    if vertices < 3 {
        return Ok(0.0);
    }
    let triples = falling_factorial(vertices as f64, 3) / 6.0;
    Ok(triples * falling_factorial(edges as f64, 3) / falling_factorial(slots as f64, 3))
}

/// The triangle count as a degree-3 multilinear polynomial in the edge indicators.
pub fn triangle_polynomial(vertices: usize) -> MultilinearPolynomial {
    let n = vertices;
    let mut p = MultilinearPolynomial::new(edge_slots(n));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                p.add_term(
                    &[edge_index(n, i, j), edge_index(n, j, k), edge_index(n, i, k)],
                    1.0,
                )
                .expect("distinct edges");
            }
        }
    }
    p
}
