//! Scripted experiment harness: the square-root test (dX/dt + X² = Q from
//! zero), the controlled harmonic oscillator, a fine-step RK4 reference
//! oracle for transient accuracy, and the Euler positivity-failure demo.

use thiserror::Error;

use crate::control::{assemble_riccati, oscillator_plant, ControlError};
use crate::linalg::{sym_eigen, LinalgError, Matrix, SymmetricMatrix};
use crate::riccati::{integrate, RiccatiError, RiccatiProblem, SchemeConfig, Trajectory};
use crate::scalar::{euler_scalar_step, scalar_step, ScalarProblem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("reference oracle lost positivity at t = {time}; retry with smaller dt_ref")]
    OraclePositivityLost { time: f64 },
    #[error("reference step dt_ref = {dt_ref} too coarse for t_final = {t_final}")]
    ReferenceStepTooCoarse { dt_ref: f64, t_final: f64 },
    #[error(transparent)]
    Riccati(#[from] RiccatiError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A named experiment run destined for CSV output.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: String,
    pub output: Option<std::path::PathBuf>,
}

/// The Q of the square-root test: ½·[[1,-1],[1,1]]·diag(1,100)·[[1,1],[-1,1]].
pub fn sqrt_test_q() -> SymmetricMatrix {
    SymmetricMatrix::from_rows(&[vec![50.5, -49.5], vec![-49.5, 50.5]]).unwrap()
}

/// Its matrix square root, the ARE limit: eigenvalues {1, 10}.
pub fn sqrt_test_limit() -> SymmetricMatrix {
    SymmetricMatrix::from_rows(&[vec![5.5, -4.5], vec![-4.5, 5.5]]).unwrap()
}

pub fn sqrt_test_problem() -> RiccatiProblem {
    RiccatiProblem::from_zero_initial(
        Matrix::zeros(2, 2),
        SymmetricMatrix::identity(2),
        sqrt_test_q(),
    )
    .expect("square-root test data is valid")
}

/// Square-root test: dX/dt + X² − Q = 0, X(0) = 0, n = 2, A = 0, K = I.
/// For moderate μ the eigenvalues converge to {1, 10}.
pub fn sqrt_test(mu: f64, dt: f64, steps: usize) -> Result<Trajectory, ExperimentError> {
    let p = sqrt_test_problem();
    let c = SchemeConfig::new(&p.a, dt, mu, steps, 0.0)?;
    Ok(integrate(&p, &c)?)
}

/// Harmonic oscillator test: plant of the second-order equation
/// y'' + 2δy' + ω²y = bv written in first-order form, scalar control
/// weight α, state cost Q = I.
pub fn oscillator_test(
    alpha: f64,
    dt: f64,
    mu: f64,
    omega: f64,
    delta: f64,
    b: f64,
    steps: usize,
) -> Result<Trajectory, ExperimentError> {
    let cp = oscillator_plant(omega, delta, b, alpha);
    let p = assemble_riccati(&cp)?;
    let c = SchemeConfig::new(&p.a, dt, mu, steps, 0.0)?;
    Ok(integrate(&p, &c)?)
}

/// Fine-step classical RK4 reference for the Riccati equation, used as the
/// transient-accuracy oracle. Each stage result is symmetrized; the oracle
/// aborts if its own iterates leave the positive cone, since it is then no
/// reference at all.
pub fn reference_solution(
    p: &RiccatiProblem,
    t_final: f64,
    dt_ref: f64,
) -> Result<SymmetricMatrix, ExperimentError> {
    if t_final == 0.0 {
        return Ok(p.x0.clone());
    }
    if dt_ref > 1e-4 * t_final {
        return Err(ExperimentError::ReferenceStepTooCoarse { dt_ref, t_final });
    }
    let rhs = |x: &SymmetricMatrix| -> SymmetricMatrix {
        let xm = x.as_matrix();
        let xa = xm * &p.a;
        let atx = xa.transpose();
        let xkx = &(xm * p.k.as_matrix()) * xm;
        (&(&(p.q.as_matrix() + &atx) + &xa) - &xkx).symmetric_part()
    };
    let n_steps = (t_final / dt_ref).round() as usize;
    let h = t_final / n_steps as f64;
    let mut x = p.x0.clone();
    let check_every = (n_steps / 100).max(1);
    for step in 0..n_steps {
        let k1 = rhs(&x);
        let k2 = rhs(&x.add(&k1.scale(0.5 * h)));
        let k3 = rhs(&x.add(&k2.scale(0.5 * h)));
        let k4 = rhs(&x.add(&k3.scale(h)));
        let incr = k1
            .add(&k2.scale(2.0))
            .add(&k3.scale(2.0))
            .add(&k4)
            .scale(h / 6.0);
        x = x.add(&incr);
        if step % check_every == 0 || step == n_steps - 1 {
            let spec = sym_eigen(&x)?;
            if spec.min() < -1e-10 * x.norm_fro().max(1.0) {
                return Err(ExperimentError::OraclePositivityLost {
                    time: (step + 1) as f64 * h,
                });
            }
        }
    }
    Ok(x)
}

/// Side-by-side iterates of the Euler and homographic schemes on the same
/// scalar problem.
#[derive(Debug, Clone)]
pub struct EulerFailureReport {
    pub dt: f64,
    pub euler: Vec<f64>,
    pub homographic: Vec<f64>,
}

impl EulerFailureReport {
    pub fn euler_went_negative(&self) -> bool {
        self.euler.iter().any(|&x| x < 0.0)
    }

    pub fn homographic_stayed_nonnegative(&self) -> bool {
        self.homographic.iter().all(|&x| x >= 0.0)
    }
}

pub fn euler_failure_comparison(
    p: &ScalarProblem,
    dt: f64,
    n_steps: usize,
) -> EulerFailureReport {
    let mut euler = vec![p.d];
    let mut homographic = vec![p.d];
    for _ in 0..n_steps {
        let e = *euler.last().unwrap();
        euler.push(euler_scalar_step(p, e, dt));
        let h = *homographic.last().unwrap();
        homographic.push(scalar_step(p, h, dt));
    }
    EulerFailureReport {
        dt,
        euler,
        homographic,
    }
}

/// The canonical failure demonstration: the unit problem (k=1, a=0, q=1,
/// d=0) at dt = 3 drives Euler to −21 at step 2 while the homographic
/// iterate is 0.6.
pub fn euler_failure_demo() -> EulerFailureReport {
    let p = ScalarProblem::new(1.0, 0.0, 1.0, 0.0).unwrap();
    euler_failure_comparison(&p, 3.0, 2)
}
