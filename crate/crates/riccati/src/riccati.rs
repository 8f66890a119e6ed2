//! Implicit scheme for the matrix Riccati equation
//! dX/dt − (XA + AᵀX) + XKX − Q = 0.
//!
//! The splitting A = (μ/2)I − M with M = (μ/2)I − A puts the dissipative
//! part implicit; each step solves the Lyapunov equation SⱼᵀX + XSⱼ = Yⱼ
//! with Sⱼ = (1/2)I + (Δt/2)KXⱼ + ΔtM and Yⱼ = (1 + μΔt)Xⱼ + ΔtQ. The
//! iterates stay in the positive cone for every Δt > 0.

use thiserror::Error;

use crate::linalg::{cholesky, sym_eigen, LinalgError, Matrix, SymmetricMatrix};
use crate::lyapunov::solve_lyapunov_raw;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiccatiError {
    #[error("invalid Riccati problem: {0}")]
    InvalidProblem(String),
    #[error("invalid scheme config: {0}")]
    InvalidConfig(String),
    #[error("Lyapunov hypothesis violated at step {step}: S + Sᵀ lost definiteness")]
    LyapunovHypothesisViolated { step: usize },
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
}

/// Riccati problem data: drift A, control weight K = BR⁻¹Bᵀ, state cost Q
/// and initial matrix X0 (zero for the control application).
#[derive(Debug, Clone)]
pub struct RiccatiProblem {
    pub a: Matrix,
    pub k: SymmetricMatrix,
    pub q: SymmetricMatrix,
    pub x0: SymmetricMatrix,
    /// True when K passed the strict Cholesky test; false means K is only
    /// positive semi-definite (e.g. rank-deficient control input).
    pub k_definite: bool,
}

fn check_psd(name: &str, s: &SymmetricMatrix) -> Result<(), RiccatiError> {
    let spec = sym_eigen(s)?;
    let scale = s.norm_fro().max(1.0);
    if spec.min() < -1e-10 * scale {
        return Err(RiccatiError::InvalidProblem(format!(
            "{name} has negative eigenvalue {}",
            spec.min()
        )));
    }
    Ok(())
}

impl RiccatiProblem {
    pub fn new(
        a: Matrix,
        k: SymmetricMatrix,
        q: SymmetricMatrix,
        x0: SymmetricMatrix,
    ) -> Result<Self, RiccatiError> {
        let n = a.rows();
        if !a.is_square() {
            return Err(RiccatiError::InvalidProblem("A must be square".into()));
        }
        if k.dim() != n || q.dim() != n || x0.dim() != n {
            return Err(RiccatiError::InvalidProblem(format!(
                "dimension mismatch: A is {n}x{n}, K {0}x{0}, Q {1}x{1}, X0 {2}x{2}",
                k.dim(),
                q.dim(),
                x0.dim()
            )));
        }
        let k_definite = cholesky(&k).is_ok();
        if !k_definite {
            check_psd("K", &k)?;
        }
        check_psd("Q", &q)?;
        check_psd("X0", &x0)?;
        Ok(Self {
            a,
            k,
            q,
            x0,
            k_definite,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Problem with X(0) = 0, the control-theoretic initial condition.
    pub fn from_zero_initial(
        a: Matrix,
        k: SymmetricMatrix,
        q: SymmetricMatrix,
    ) -> Result<Self, RiccatiError> {
        let n = a.rows();
        Self::new(a, k, q, SymmetricMatrix::zeros(n))
    }
}

/// Time step, splitting parameter μ and the derived implicit matrix
/// M = (μ/2)I − A, plus the stopping controls of the integration loop.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub dt: f64,
    pub mu: f64,
    pub m: Matrix,
    pub max_steps: usize,
    pub steady_tol: f64,
}

impl SchemeConfig {
    /// μ must make μI − (A + Aᵀ) positive definite, so that M + Mᵀ is
    /// definite and every inner Lyapunov problem is well posed. μ = 0 is
    /// accepted when A alone is dissipative enough; this is what makes the
    /// scalar scheme an exact special case at n = 1.
    pub fn new(
        a: &Matrix,
        dt: f64,
        mu: f64,
        max_steps: usize,
        steady_tol: f64,
    ) -> Result<Self, RiccatiError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(RiccatiError::InvalidConfig(format!("dt = {dt} must be > 0")));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(RiccatiError::InvalidConfig(format!("mu = {mu} must be >= 0")));
        }
        let n = a.rows();
        let shifted = {
            let mut s = (a + &a.transpose()).scale(-1.0);
            for i in 0..n {
                s[(i, i)] += mu;
            }
            s.symmetric_part()
        };
        if cholesky(&shifted).is_err() {
            return Err(RiccatiError::InvalidConfig(format!(
                "mu = {mu} does not make muI - (A + Aᵀ) positive definite"
            )));
        }
        let mut m = a.scale(-1.0);
        for i in 0..n {
            m[(i, i)] += 0.5 * mu;
        }
        Ok(Self {
            dt,
            mu,
            m,
            max_steps,
            steady_tol,
        })
    }
}

/// One recorded integration sample.
#[derive(Debug, Clone)]
pub struct Sample {
    pub step: usize,
    pub time: f64,
    pub x: SymmetricMatrix,
    pub eigenvalues: Vec<f64>,
    pub are_residual_fro: f64,
}

/// Full history of an integration: one sample per accepted step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least X0")
    }

    /// Keep every `stride`-th sample plus the final one.
    pub fn thinned(&self, stride: usize) -> Trajectory {
        let stride = stride.max(1);
        let last = self.samples.len() - 1;
        Trajectory {
            samples: self
                .samples
                .iter()
                .enumerate()
                .filter(|(i, _)| i % stride == 0 || *i == last)
                .map(|(_, s)| s.clone())
                .collect(),
        }
    }
}

/// Smallest admissible splitting parameter plus a safety margin:
/// μ = max(0, λ_max(A + Aᵀ)) + margin.
pub fn select_mu(a: &Matrix, margin: f64) -> f64 {
    assert!(margin > 0.0, "margin must be > 0");
    let sym = (a + &a.transpose()).symmetric_part();
    let spec = sym_eigen(&sym).expect("finite symmetric matrix");
    spec.max().max(0.0) + margin
}

/// Algebraic Riccati residual −(XA + AᵀX) + XKX − Q; its Frobenius norm is
/// the steady-state diagnostic.
pub fn are_residual(p: &RiccatiProblem, x: &SymmetricMatrix) -> SymmetricMatrix {
    let xm = x.as_matrix();
    let xa = xm * &p.a;
    let atx = xa.transpose();
    let xkx = &(xm * p.k.as_matrix()) * xm;
    (&(&xkx - &(&xa + &atx)) - p.q.as_matrix()).symmetric_part()
}

/// One implicit step: assemble Sⱼ and Yⱼ and solve the Lyapunov equation.
/// The solve is attempted whenever the vectorized system is nonsingular:
/// very large time steps can push S + Sᵀ out of the definite cone while
/// the step itself remains well posed (and, observed throughout the test
/// matrix, still produces positive iterates).
pub fn riccati_step(
    p: &RiccatiProblem,
    c: &SchemeConfig,
    x_j: &SymmetricMatrix,
) -> Result<SymmetricMatrix, RiccatiError> {
    let n = p.dim();
    let kx = p.k.as_matrix() * x_j.as_matrix();
    let mut s = &kx.scale(0.5 * c.dt) + &c.m.scale(c.dt);
    for i in 0..n {
        s[(i, i)] += 0.5;
    }
    let y = x_j.scale(1.0 + c.mu * c.dt).add(&p.q.scale(c.dt));
    solve_lyapunov_raw(&s, &y).map_err(|_| RiccatiError::LyapunovHypothesisViolated { step: 0 })
}

/// Forward Euler baseline: X_{j+1} = X_j + Δt(Q + AᵀX_j + X_jA − X_jKX_j),
/// symmetrized. No positivity guarantee; kept for the failure comparison.
pub fn euler_step(p: &RiccatiProblem, x_j: &SymmetricMatrix, dt: f64) -> SymmetricMatrix {
    let xm = x_j.as_matrix();
    let xa = xm * &p.a;
    let atx = xa.transpose();
    let xkx = &(xm * p.k.as_matrix()) * xm;
    let rhs = &(&(p.q.as_matrix() + &atx) + &xa) - &xkx;
    (xm + &rhs.scale(dt)).symmetric_part()
}

fn sample_of(p: &RiccatiProblem, step: usize, time: f64, x: SymmetricMatrix) -> Result<Sample, RiccatiError> {
    let spec = sym_eigen(&x)?;
    let residual = are_residual(p, &x).norm_fro();
    Ok(Sample {
        step,
        time,
        x,
        eigenvalues: spec.eigenvalues,
        are_residual_fro: residual,
    })
}

/// Run the scheme from X0 until the ARE residual drops below steady_tol or
/// max_steps is reached; records matrix, eigenvalues and residual per step.
pub fn integrate(p: &RiccatiProblem, c: &SchemeConfig) -> Result<Trajectory, RiccatiError> {
    let mut samples = Vec::with_capacity(c.max_steps + 1);
    let mut x = p.x0.clone();
    samples.push(sample_of(p, 0, 0.0, x.clone())?);
    for j in 1..=c.max_steps {
        x = riccati_step(p, c, &x).map_err(|e| match e {
            RiccatiError::LyapunovHypothesisViolated { .. } => {
                RiccatiError::LyapunovHypothesisViolated { step: j }
            }
            other => other,
        })?;
        let sample = sample_of(p, j, j as f64 * c.dt, x.clone())?;
        let done = sample.are_residual_fro <= c.steady_tol;
        samples.push(sample);
        if done {
            break;
        }
    }
    Ok(Trajectory { samples })
}

/// Spectral condition of the monotonicity property:
/// λ_max((KX∞ + X∞K)/2) < μ + 1/Δt, borderline decided toward false.
pub fn check_monotonicity_condition(
    p: &RiccatiProblem,
    c: &SchemeConfig,
    x_inf: &SymmetricMatrix,
) -> bool {
    let kx = p.k.as_matrix() * x_inf.as_matrix();
    let sym = (&kx + &kx.transpose()).scale(0.5).symmetric_part();
    let spec = sym_eigen(&sym).expect("finite symmetric matrix");
    let bound = c.mu + 1.0 / c.dt;
    spec.max() < bound * (1.0 - 1e-12)
}
