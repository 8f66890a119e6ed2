//! Dense real matrix kernel for the desk-scale problems this crate targets
//! (n up to a few tens): symmetric storage, Cholesky factorization,
//! a cyclic-Jacobi symmetric eigensolver and a pivoted dense solve.

mod cholesky;
mod eigen;
mod matrix;
mod solve;

pub use cholesky::{cholesky, is_positive_definite, CholeskyFactor};
pub use eigen::{sym_eigen, Spectrum};
pub use matrix::{Matrix, SymmetricMatrix};
pub use solve::solve_dense;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not positive definite: pivot {pivot} is non-positive")]
    NotPositiveDefinite { pivot: usize },
    #[error("singular matrix: pivot {pivot} below tolerance")]
    SingularMatrix { pivot: usize },
    #[error("eigenvalue iteration failed to converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
}
