use super::{LinalgError, Matrix, SymmetricMatrix};

/// Lower-triangular Cholesky factor L with LLᵀ = S.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: Matrix,
}

impl CholeskyFactor {
    pub fn lower(&self) -> &Matrix {
        &self.l
    }

    /// Solve S x = b via forward/back substitution on LLᵀ.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.rows();
        assert_eq!(b.len(), n, "cholesky solve dimension mismatch");
        // L y = b
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.l[(i, k)] * y[k]).sum();
            y[i] = (b[i] - s) / self.l[(i, i)];
        }
        // Lᵀ x = y
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| self.l[(k, i)] * x[k]).sum();
            x[i] = (y[i] - s) / self.l[(i, i)];
        }
        x
    }
}

/// Cholesky factorization of a symmetric matrix. Succeeds iff the matrix is
/// numerically positive definite; any pivot ≤ 0 fails with the pivot index.
/// Callers that need slack shift the matrix themselves.
pub fn cholesky(s: &SymmetricMatrix) -> Result<CholeskyFactor, LinalgError> {
    let n = s.dim();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = s[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { pivot: j });
        }
        l[(j, j)] = d.sqrt();
        for i in j + 1..n {
            let mut v = s[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / l[(j, j)];
        }
    }
    Ok(CholeskyFactor { l })
}

/// Convenience: is the symmetric matrix numerically positive definite?
pub fn is_positive_definite(s: &SymmetricMatrix) -> bool {
    cholesky(s).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factors_to_identity() {
        let s = SymmetricMatrix::identity(2);
        let f = cholesky(&s).unwrap();
        assert_eq!(f.lower(), &Matrix::identity(2));
    }

    // Q of the square-root experiment; eigenvalues 1 and 100, both positive.
    #[test]
    fn sqrt_test_q_is_definite() {
        let q = SymmetricMatrix::from_rows(&[vec![50.5, -49.5], vec![-49.5, 50.5]]).unwrap();
        let f = cholesky(&q).unwrap();
        let l = f.lower();
        let reconstructed = l * &l.transpose();
        let diff = (&reconstructed - q.as_matrix()).norm_fro();
        assert!(diff <= 1e-12 * q.norm_fro(), "residual {diff}");
    }

    #[test]
    fn singular_matrix_fails_at_first_pivot() {
        let s = SymmetricMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let err = cholesky(&s).unwrap_err();
        assert_eq!(err, LinalgError::NotPositiveDefinite { pivot: 0 });
    }

    #[test]
    fn factor_solves_linear_system() {
        let s = SymmetricMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let f = cholesky(&s).unwrap();
        let x = f.solve(&[8.0, 7.0]);
        let back = s.as_matrix().matvec(&x);
        assert!((back[0] - 8.0).abs() < 1e-12);
        assert!((back[1] - 7.0).abs() < 1e-12);
    }
}
