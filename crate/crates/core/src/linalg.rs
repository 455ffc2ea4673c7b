//! Small dense helpers shared by the generators and the bound checks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Largest absolute eigenvalue of a symmetric matrix by power iteration.
///
/// Uses `||H v||` for a unit `v`, which converges even when `λ` and `-λ` are
/// both dominant.
pub fn largest_abs_eigenvalue(h: &DMatrix<f64>) -> f64 {
    let n = h.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i as f64 + 1.0) / (n as f64 + 1.0));
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..100_000 {
        let w = h * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        // H^2 has a single dominant eigenvalue, so step twice per check.
        let w2 = h * (&w / norm);
        let norm2 = w2.norm();
        if norm2 == 0.0 {
            return norm;
        }
        let next = norm2;
        v = w2 / norm2;
        if (next - estimate).abs() <= 1e-13 * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Number of strictly positive eigenvalues of a symmetric matrix.
pub fn positive_eigenvalue_count(h: &DMatrix<f64>) -> usize {
    SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_iteration_matches_eigendecomposition() {
        let h = DMatrix::from_row_slice(3, 3, &[-4.0, -1.0, 0.0, -1.0, 2.0, -0.5, 0.0, -0.5, 1.0]);
        let exact = SymmetricEigen::new(h.clone())
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, l: &f64| m.max(l.abs()));
        assert!((largest_abs_eigenvalue(&h) - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn power_iteration_symmetric_spectrum() {
        // eigenvalues +1 and -1
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((largest_abs_eigenvalue(&h) - 1.0).abs() < 1e-12);
        assert_eq!(largest_abs_eigenvalue(&DMatrix::zeros(2, 2)), 0.0);
    }

    #[test]
    fn counts_positive_eigenvalues() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -2.0, 3.0, 0.0]));
        assert_eq!(positive_eigenvalue_count(&h), 2);
    }
}
