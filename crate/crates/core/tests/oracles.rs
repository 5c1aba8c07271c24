//! Library results checked against independent test-side computations.

use nalgebra::{DMatrix, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use multislice_core::sampling::sample_uniform;
use multislice_core::space::enumerate;
use multislice_core::statistics::{
    binary_product_moment, edge_index, edge_slots, expected_triangles, joint_probability,
    largest_abs_eigenvalue, product_moment, triangle_count, triangle_polynomial,
};
use multislice_core::tensor::{operator_norm, DenseTensor, NormOptions};
use multislice_core::{MultisliceSpec, StreamFactory};

/// Every 0/1 vector of `len` entries with `ones` ones, by bitmask.
fn bitmask_configurations(len: usize, ones: usize) -> Vec<Vec<f64>> {
    (0u32..1 << len)
        .filter(|m| m.count_ones() as usize == ones)
        .map(|m| (0..len).map(|i| (m >> i & 1) as f64).collect())
        .collect()
}

/// `tr(A³) / 6` from the adjacency matrix.
fn triangles_by_trace(vertices: usize, omega: &[f64]) -> f64 {
    let a = DMatrix::from_fn(vertices, vertices, |i, j| if i == j { 0.0 } else { omega[edge_index(vertices, i, j)] });
    (&a * &a * &a).trace() / 6.0
}

#[test]
fn cardinality_examples() {
    for (kappa, card) in [(vec![1, 1], 2u128), (vec![2, 2], 6), (vec![2, 1, 1], 12)] {
        let spec = MultisliceSpec::with_index_values(kappa).unwrap();
        assert_eq!(spec.cardinality().unwrap(), card);
        assert_eq!(enumerate(&spec, 100).unwrap().len() as u128, card);
    }
}

#[test]
fn balanced_pair_frequency() {
    let spec = MultisliceSpec::with_index_values(vec![1, 1]).unwrap();
    let streams = StreamFactory::new(99);
    let draws = 100_000;
    let hits = (0..draws)
        .filter(|&i| sample_uniform(&spec, &mut streams.stream(i)).entries()[0] == 0.0)
        .count() as f64;
    let se = (0.25 / draws as f64).sqrt();
    assert!((hits / draws as f64 - 0.5).abs() <= 3.0 * se);
}

#[test]
fn chi_square_uniformity() {
    for kappa in [vec![2, 1], vec![2, 2], vec![2, 1, 1]] {
        let spec = MultisliceSpec::with_index_values(kappa).unwrap();
        let all = enumerate(&spec, 100).unwrap();
        let mut counts = vec![0u64; all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 60_000u64;
        for _ in 0..draws {
            let c = sample_uniform(&spec, &mut rng);
            counts[all.iter().position(|a| *a == c).unwrap()] += 1;
        }
        let expected = draws as f64 / all.len() as f64;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - ChiSquared::new((all.len() - 1) as f64).unwrap().cdf(stat);
        assert!(p > 1e-3, "{}: chi² = {stat}, p = {p}", spec.label());
    }
}

#[test]
fn expected_triangles_matches_enumeration() {
    for m in 0..=6 {
        let graphs = bitmask_configurations(6, m);
        let total: f64 = graphs.iter().map(|g| triangles_by_trace(4, g)).sum();
        assert_eq!(expected_triangles(4, m).unwrap(), total / graphs.len() as f64, "M = {m}");
    }
    assert!((expected_triangles(4, 3).unwrap() - 0.2).abs() < 1e-15);
}

#[test]
fn triangle_count_and_polynomial_agree() {
    let p = triangle_polynomial(5);
    for m in [0, 3, 5, 10] {
        for g in bitmask_configurations(edge_slots(5), m) {
            let t = triangle_count(5, &g) as f64;
            assert_eq!(t, triangles_by_trace(5, &g).round());
            assert_eq!(t, p.eval(&g).unwrap());
        }
    }
}

#[test]
fn product_moments_match_hypergeometric_enumeration() {
    for total in 2..=8 {
        for ones in 1..total {
            let all = bitmask_configurations(total, ones);
            for k in 0..=3.min(total) {
                let avg = all.iter().map(|w| w[..k].iter().product::<f64>()).sum::<f64>() / all.len() as f64;
                assert!((binary_product_moment(total, ones, k) - avg).abs() < 1e-14, "N={total} M={ones} k={k}");
                let spec = MultisliceSpec::new(vec![total - ones, ones], vec![0.0, 1.0]).unwrap();
                let idx: Vec<usize> = (0..k).collect();
                assert!((product_moment(&spec, &idx).unwrap() - avg).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn joint_probability_matches_enumeration() {
    let spec = MultisliceSpec::with_index_values(vec![2, 1, 2]).unwrap();
    let all = enumerate(&spec, 1000).unwrap();
    for pattern in [vec![0usize], vec![0, 0], vec![1, 2], vec![2, 1, 0], vec![1, 1]] {
        let hits = all
            .iter()
            .filter(|c| pattern.iter().enumerate().all(|(i, &l)| c.entries()[i] == l as f64))
            .count() as f64;
        let p = joint_probability(&spec, &pattern).unwrap();
        assert!((p - hits / all.len() as f64).abs() < 1e-15, "{pattern:?}");
    }
}

/// Eigenvalues of a symmetric 3×3 matrix from the trigonometric solution of
/// its characteristic cubic.
fn cubic_eigenvalues(a: &Matrix3<f64>) -> [f64; 3] {
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = (a - Matrix3::identity() * q) / p;
    let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

#[test]
fn eigenvalue_matches_cubic_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..500 {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            for j in i..3 {
                let v = rng.random_range(-3.0..3.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        let oracle = cubic_eigenvalues(&m).iter().map(|e| e.abs()).fold(0.0, f64::max);
        let d = DMatrix::from_iterator(3, 3, m.iter().cloned());
        let got = largest_abs_eigenvalue(&d).unwrap();
        assert!((got - oracle).abs() < 1e-10 * oracle.max(1.0), "{got} vs {oracle}");
    }
}

#[test]
fn eigenvalue_is_convex_in_upper_entries() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let n = 5;
    let sym = |rng: &mut ChaCha8Rng| {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v: f64 = rng.random_range(0.0..1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    };
    for _ in 0..300 {
        let (x, y) = (sym(&mut rng), sym(&mut rng));
        let l: f64 = rng.random_range(0.0..=1.0);
        let mix = &x * l + &y * (1.0 - l);
        let lhs = largest_abs_eigenvalue(&mix).unwrap();
        let rhs = l * largest_abs_eigenvalue(&x).unwrap() + (1.0 - l) * largest_abs_eigenvalue(&y).unwrap();
        assert!(lhs <= rhs + 1e-10);
    }
}

#[test]
fn matrix_operator_norm_is_the_top_singular_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let opts = NormOptions { restarts: 5, ..NormOptions::default() };
    for _ in 0..200 {
        let (r, c) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let t = DenseTensor::from_fn(vec![r, c], |_| rng.random_range(-1.0..1.0));
        let m = DMatrix::from_fn(r, c, |i, j| t.get(&[i, j]));
        let sigma = m.singular_values().max();
        let got = operator_norm(&t, &opts).unwrap().value;
        assert!((got - sigma).abs() < 1e-8, "{got} vs {sigma}");
    }
}
