use nalgebra::DMatrix;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let scale = a.amax().max(1.0);
    for i in 0..a.nrows() {
        for j in i + 1..a.ncols() {
            if (a[(i, j)] - a[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidArgument(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// `Σ_{i<j} a_ij ω_i ω_j = ωᵀAω / 2` for symmetric `A` with zero diagonal.
pub fn quadratic_form(a: &DMatrix<f64>, omega: &[f64]) -> Result<f64> {
    check_symmetric(a)?;
    if a.nrows() != omega.len() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix against a vector of length {}",
            a.nrows(),
            a.ncols(),
            omega.len()
        )));
    }
    if (0..a.nrows()).any(|i| a[(i, i)] != 0.0) {
        return Err(Error::InvalidArgument("quadratic form needs a zero diagonal".into()));
    }
    let mut s = 0.0;
    for i in 0..omega.len() {
        for j in i + 1..omega.len() {
            s += a[(i, j)] * omega[i] * omega[j];
        }
    }
    Ok(s)
}

/// `max |λ(X)|` over the eigenvalues of a symmetric matrix.
pub fn largest_abs_eigenvalue(x: &DMatrix<f64>) -> Result<f64> {
    check_symmetric(x)?;
    if x.nrows() == 0 {
        return Err(Error::ShapeMismatch("empty matrix".into()));
    }
    let eig = nalgebra::SymmetricEigen::try_new(x.clone(), 1e-14, 10_000).ok_or_else(|| {
        Error::Domain("symmetric eigensolver did not converge".into())
    })?;
    Ok(eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs())))
}

/// Symmetric `n × n` matrix whose upper triangle (diagonal included) is
/// filled row by row from `upper`, of length `n(n+1)/2`.
pub fn symmetric_from_upper(n: usize, upper: &[f64]) -> Result<DMatrix<f64>> {
    if upper.len() != n * (n + 1) / 2 {
        return Err(Error::ShapeMismatch(format!(
            "an {n}x{n} upper triangle has {} entries, got {}",
            n * (n + 1) / 2,
            upper.len()
        )));
    }
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = upper[k];
            m[(j, i)] = upper[k];
            k += 1;
        }
    }
    Ok(m)
}

/// Recovers `n` from a triangle length `n(n+1)/2`.
pub fn triangle_side(len: usize) -> Option<usize> {
    let n = ((((8 * len + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
    (n * (n + 1) / 2 == len).then_some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_form_examples() {
        let zero = DMatrix::zeros(3, 3);
        assert_eq!(quadratic_form(&zero, &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        let ones = DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        assert_eq!(quadratic_form(&ones, &[1.0, 1.0, 1.0]).unwrap(), 3.0);
        let mut a = DMatrix::zeros(3, 3);
        a[(0, 1)] = 2.0;
        a[(1, 0)] = 2.0;
        assert_eq!(quadratic_form(&a, &[3.0, -1.0, 5.0]).unwrap(), -6.0);
        assert!(quadratic_form(&a, &[1.0, 1.0]).is_err());
        assert!(quadratic_form(&DMatrix::identity(2, 2), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        assert!((largest_abs_eigenvalue(&a).unwrap() - 1.0).abs() < 1e-12);
        let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((largest_abs_eigenvalue(&b).unwrap() - 1.0).abs() < 1e-12);
        let c = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(largest_abs_eigenvalue(&c).is_err());
    }

    #[test]
    fn upper_triangle_layout() {
        let m = symmetric_from_upper(3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m[(0, 2)], 3.0);
        assert_eq!(m[(2, 1)], 5.0);
        assert_eq!(m[(2, 2)], 6.0);
        assert_eq!(triangle_side(6), Some(3));
        assert_eq!(triangle_side(7), None);
    }
}
