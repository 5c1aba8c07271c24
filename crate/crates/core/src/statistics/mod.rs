//! Statistics the tail bounds apply to.

mod basic;
pub mod graph;
mod linalg;
mod moments;
mod poly;

pub use basic::{kolmogorov_stat, sample_mean, sample_std, sample_std_pairwise};
pub use graph::{
    edge_index, edge_slots, enumerate_gnm, expected_triangles, gnm_spec, sample_gnm,
    triangle_count, triangle_polynomial, EdgeConfiguration,
};
pub use linalg::{largest_abs_eigenvalue, quadratic_form, symmetric_from_upper, triangle_side};
pub use moments::{
    binary_product_moment, joint_probability, product_moment, product_moment_of_order,
    MAX_MOMENT_ORDER,
};
pub use poly::{MultilinearPolynomial, TermRecord, MAX_DENSE_ENTRIES};
