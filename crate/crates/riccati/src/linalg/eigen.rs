use super::{LinalgError, Matrix, SymmetricMatrix};

const MAX_SWEEPS: usize = 50;

/// Eigendecomposition of a symmetric matrix: S = V diag(λ) Vᵀ with
/// ascending eigenvalues and orthogonal V (columns paired with eigenvalues).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Rebuild V diag(λ) Vᵀ.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut vd = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                vd[(i, j)] = v[(i, j)] * self.eigenvalues[j];
            }
        }
        &vd * &v.transpose()
    }
}

/// Symmetric eigensolver by cyclic Jacobi rotations. Deterministic for
/// identical input; eigenvalues returned ascending.
pub fn sym_eigen(s: &SymmetricMatrix) -> Result<Spectrum, LinalgError> {
    let n = s.dim();
    let mut a = s.as_matrix().clone();
    let mut v = Matrix::identity(n);

    if n == 1 {
        return Ok(Spectrum {
            eigenvalues: vec![a[(0, 0)]],
            eigenvectors: v,
        });
    }

    let tol = 1e-14 * s.norm_fro().max(1.0);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= tol / (n as f64 * n as f64) {
                    continue;
                }
                // rotation annihilating a[p][q]
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s_ = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s_ * akq;
                    a[(k, q)] = s_ * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s_ * aqk;
                    a[(q, k)] = s_ * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s_ * vkq;
                    v[(k, q)] = s_ * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off > tol {
            return Err(LinalgError::NonConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_spectrum_invariants(s: &SymmetricMatrix, sp: &Spectrum) {
        let scale = s.norm_fro().max(1.0);
        let recon = sp.reconstruct();
        assert!(
            (&recon - s.as_matrix()).norm_fro() <= 1e-10 * scale,
            "reconstruction failed"
        );
        let v = &sp.eigenvectors;
        let vtv = &v.transpose() * v;
        let n = s.dim();
        assert!(
            (&vtv - &Matrix::identity(n)).norm_fro() <= 1e-10,
            "eigenvectors not orthogonal"
        );
    }

    #[test]
    fn diagonal_case_sorted_ascending() {
        let s = SymmetricMatrix::diagonal(&[3.0, 1.0]);
        let sp = sym_eigen(&s).unwrap();
        assert_eq!(sp.eigenvalues, vec![1.0, 3.0]);
        assert_spectrum_invariants(&s, &sp);
    }

    #[test]
    fn sqrt_test_q_spectrum() {
        let q = SymmetricMatrix::from_rows(&[vec![50.5, -49.5], vec![-49.5, 50.5]]).unwrap();
        let sp = sym_eigen(&q).unwrap();
        assert!((sp.eigenvalues[0] - 1.0).abs() < 1e-10);
        assert!((sp.eigenvalues[1] - 100.0).abs() < 1e-10);
        assert_spectrum_invariants(&q, &sp);
    }

    // Matrix square root of Q: same eigenvectors, eigenvalues {1, 10}.
    #[test]
    fn sqrt_of_q_spectrum() {
        let s = SymmetricMatrix::from_rows(&[vec![5.5, -4.5], vec![-4.5, 5.5]]).unwrap();
        let sp = sym_eigen(&s).unwrap();
        assert!((sp.eigenvalues[0] - 1.0).abs() < 1e-10);
        assert!((sp.eigenvalues[1] - 10.0).abs() < 1e-10);
        assert_spectrum_invariants(&s, &sp);
    }

    #[test]
    fn trace_preserved() {
        let s =
            SymmetricMatrix::from_rows(&[
                vec![2.0, -1.0, 0.5],
                vec![-1.0, 3.0, 1.5],
                vec![0.5, 1.5, -4.0],
            ])
            .unwrap();
        let sp = sym_eigen(&s).unwrap();
        let sum: f64 = sp.eigenvalues.iter().sum();
        assert!((sum - s.trace()).abs() <= 1e-10 * s.trace().abs().max(1.0));
        assert_spectrum_invariants(&s, &sp);
    }
}
