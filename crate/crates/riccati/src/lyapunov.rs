//! Lyapunov matrix equation SᵀX + XS = Y, the inner solve of each implicit
//! Riccati step. S need not be symmetric but its symmetric part must be
//! positive definite; under that hypothesis the map X ↦ SᵀX + XS is a
//! bijection on symmetric matrices and transfers positivity from Y to X.

use thiserror::Error;

use crate::linalg::{cholesky, solve_dense, LinalgError, Matrix, SymmetricMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LyapunovError {
    #[error("S + Sᵀ is not positive definite (pivot {pivot})")]
    HypothesisViolated { pivot: usize },
    #[error("dimension mismatch: S is {s_dim}x{s_dim}, Y is {y_dim}x{y_dim}")]
    DimensionMismatch { s_dim: usize, y_dim: usize },
    #[error("inner dense solve reported a singular system; hypothesis violated upstream")]
    SingularSystem,
}

/// A well-posed Lyapunov problem: coefficient S with S + Sᵀ ≻ 0 and
/// symmetric right-hand side Y of matching dimension.
#[derive(Debug, Clone)]
pub struct LyapunovProblem {
    s: Matrix,
    y: SymmetricMatrix,
}

impl LyapunovProblem {
    pub fn new(s: Matrix, y: SymmetricMatrix) -> Result<Self, LyapunovError> {
        if !s.is_square() || s.rows() != y.dim() {
            return Err(LyapunovError::DimensionMismatch {
                s_dim: s.rows(),
                y_dim: y.dim(),
            });
        }
        let sym = (&s + &s.transpose()).symmetric_part();
        match cholesky(&sym) {
            Ok(_) => Ok(Self { s, y }),
            Err(LinalgError::NotPositiveDefinite { pivot }) => {
                Err(LyapunovError::HypothesisViolated { pivot })
            }
            Err(_) => Err(LyapunovError::SingularSystem),
        }
    }

    pub fn coefficient(&self) -> &Matrix {
        &self.s
    }

    pub fn rhs(&self) -> &SymmetricMatrix {
        &self.y
    }
}

/// Solve SᵀX + XS = Y by Kronecker vectorization: the n²×n² system
/// (I⊗Sᵀ + Sᵀ⊗I) vec(X) = vec(Y) in column-major vec convention, handed to
/// the pivoted dense solve. The result is symmetrized before return.
pub fn solve_lyapunov(p: &LyapunovProblem) -> Result<SymmetricMatrix, LyapunovError> {
    solve_lyapunov_raw(&p.s, &p.y)
}

/// Same solve without the S + Sᵀ ≻ 0 construction check: succeeds whenever
/// the vectorized system is nonsingular (no eigenvalues of S summing to
/// zero). Positivity transfer is only guaranteed under the definiteness
/// hypothesis; the Riccati stepping loop uses this path because its large
/// time-step regime can make S + Sᵀ indefinite while the solve stays
/// perfectly well posed.
pub fn solve_lyapunov_raw(
    s: &Matrix,
    y: &SymmetricMatrix,
) -> Result<SymmetricMatrix, LyapunovError> {
    let n = s.rows();
    if !s.is_square() || n != y.dim() {
        return Err(LyapunovError::DimensionMismatch {
            s_dim: s.rows(),
            y_dim: y.dim(),
        });
    }
    let st = s.transpose();
    let n2 = n * n;
    let mut big = Matrix::zeros(n2, n2);
    // vec index (col-major): column j, row i -> j*n + i
    // SᵀX term: (I⊗Sᵀ); XS term: (Sᵀ⊗I)
    for j in 0..n {
        for i in 0..n {
            let row = j * n + i;
            for k in 0..n {
                // (SᵀX)_{ij} = Σ_k Sᵀ[i,k] X[k,j]
                big[(row, j * n + k)] += st[(i, k)];
                // (XS)_{ij} = Σ_k X[i,k] S[k,j] = Σ_k Sᵀ[j,k] X[i,k]
                big[(row, k * n + i)] += st[(j, k)];
            }
        }
    }
    let mut rhs = vec![0.0; n2];
    for j in 0..n {
        for i in 0..n {
            rhs[j * n + i] = y[(i, j)];
        }
    }
    let x = solve_dense(&big, &rhs).map_err(|_| LyapunovError::SingularSystem)?;
    let mut out = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            out[(i, j)] = x[j * n + i];
        }
    }
    Ok(out.symmetric_part())
}

/// Residual ‖SᵀX + XS − Y‖_F for a candidate solution.
pub fn lyapunov_residual(p: &LyapunovProblem, x: &SymmetricMatrix) -> f64 {
    let st = p.s.transpose();
    let lhs = &(&st * x.as_matrix()) + &(x.as_matrix() * &p.s);
    (&lhs - p.y.as_matrix()).norm_fro()
}
