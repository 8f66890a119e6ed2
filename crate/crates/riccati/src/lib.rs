//! Unconditionally stable, positivity-preserving implicit scheme for scalar
//! and matrix Riccati differential equations, with an LQR front end,
//! baseline integrators, steady-state verification against the algebraic
//! Riccati equation, and an experiment harness.
//!
//! The update is homographic in the scalar case and reduces each matrix
//! step to one Lyapunov solve; iterates stay in the cone of positive
//! semi-definite matrices for every time step.

pub mod cli;
pub mod control;
pub mod experiments;
pub mod linalg;
pub mod lyapunov;
pub mod riccati;
pub mod scalar;

pub use control::{
    assemble_riccati, closed_loop_eigenvalues, feedback_gain, simulate_closed_loop,
    ControlProblem,
};
pub use linalg::{cholesky, solve_dense, sym_eigen, Matrix, Spectrum, SymmetricMatrix};
pub use lyapunov::{solve_lyapunov, LyapunovProblem};
pub use riccati::{
    are_residual, check_monotonicity_condition, euler_step, integrate, riccati_step, select_mu,
    RiccatiProblem, SchemeConfig, Trajectory,
};
pub use scalar::{
    check_degeneracy, euler_scalar_step, measure_order, scalar_exact, scalar_fixed_point,
    scalar_integrate, scalar_step, ScalarProblem,
};
