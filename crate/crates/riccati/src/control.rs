//! LQR front end: problem assembly (A, B, Q, R), reduction to a Riccati
//! problem through K = BR⁻¹Bᵀ, limit feedback gain G = R⁻¹BᵀX∞ and a
//! closed-loop RK4 simulator with trapezoidal cost quadrature.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{cholesky, sym_eigen, CholeskyFactor, LinalgError, Matrix, SymmetricMatrix};
use crate::riccati::RiccatiProblem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("invalid control problem: {0}")]
    InvalidProblem(String),
    #[error("R is not positive definite (pivot {pivot})")]
    SingularR { pivot: usize },
    #[error("eigenvalue iteration failed to converge")]
    NonConvergence,
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
}

/// LQR instance (A, B, Q, R) with an optional finite horizon; without a
/// horizon the steady-state feedback law is the intended use.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    pub a: Matrix,
    pub b: Matrix,
    pub q: SymmetricMatrix,
    pub r: SymmetricMatrix,
    pub horizon: Option<f64>,
}

impl ControlProblem {
    pub fn new(
        a: Matrix,
        b: Matrix,
        q: SymmetricMatrix,
        r: SymmetricMatrix,
        horizon: Option<f64>,
    ) -> Result<Self, ControlError> {
        let n = a.rows();
        if !a.is_square() {
            return Err(ControlError::InvalidProblem("A must be square".into()));
        }
        if b.rows() != n {
            return Err(ControlError::InvalidProblem(format!(
                "B has {} rows, expected {n}",
                b.rows()
            )));
        }
        if q.dim() != n {
            return Err(ControlError::InvalidProblem(format!(
                "Q is {0}x{0}, expected {n}x{n}",
                q.dim()
            )));
        }
        if r.dim() != b.cols() {
            return Err(ControlError::InvalidProblem(format!(
                "R is {0}x{0}, expected {1}x{1}",
                r.dim(),
                b.cols()
            )));
        }
        if let Some(t) = horizon {
            if !(t > 0.0) {
                return Err(ControlError::InvalidProblem(format!(
                    "horizon T = {t} must be > 0"
                )));
            }
        }
        if let Err(LinalgError::NotPositiveDefinite { pivot }) = cholesky(&r) {
            return Err(ControlError::SingularR { pivot });
        }
        let spec = sym_eigen(&q)?;
        if spec.min() < -1e-12 * q.norm_fro().max(1.0) {
            return Err(ControlError::InvalidProblem(format!(
                "Q has negative eigenvalue {}",
                spec.min()
            )));
        }
        Ok(Self { a, b, q, r, horizon })
    }

    fn r_factor(&self) -> Result<CholeskyFactor, ControlError> {
        cholesky(&self.r).map_err(|e| match e {
            LinalgError::NotPositiveDefinite { pivot } => ControlError::SingularR { pivot },
            other => ControlError::Linalg(other),
        })
    }
}

/// Build the Riccati problem K = BR⁻¹Bᵀ, X0 = 0 from the LQR data. K comes
/// out merely positive semi-definite when the control input is
/// rank-deficient (m < n); RiccatiProblem records that in its
/// `k_definite` flag.
pub fn assemble_riccati(cp: &ControlProblem) -> Result<RiccatiProblem, ControlError> {
    let factor = cp.r_factor()?;
    let bt = cp.b.transpose();
    let n = cp.a.rows();
    let m = cp.b.cols();
    // R⁻¹Bᵀ column by column
    let mut rinv_bt = Matrix::zeros(m, n);
    for j in 0..n {
        let col: Vec<f64> = (0..m).map(|i| bt[(i, j)]).collect();
        let solved = factor.solve(&col);
        for i in 0..m {
            rinv_bt[(i, j)] = solved[i];
        }
    }
    let k = (&cp.b * &rinv_bt).symmetric_part();
    RiccatiProblem::from_zero_initial(cp.a.clone(), k, cp.q.clone())
        .map_err(|e| ControlError::InvalidProblem(e.to_string()))
}

/// Limit feedback gain G = R⁻¹BᵀX∞; the limit command is v = −Gy.
pub fn feedback_gain(cp: &ControlProblem, x_inf: &SymmetricMatrix) -> Result<Matrix, ControlError> {
    let factor = cp.r_factor()?;
    let btx = &cp.b.transpose() * x_inf.as_matrix();
    let m = btx.rows();
    let n = btx.cols();
    let mut g = Matrix::zeros(m, n);
    for j in 0..n {
        let col: Vec<f64> = (0..m).map(|i| btx[(i, j)]).collect();
        let solved = factor.solve(&col);
        for i in 0..m {
            g[(i, j)] = solved[i];
        }
    }
    Ok(g)
}

/// Characteristic polynomial coefficients [1, c1, ..., cn] of a square
/// matrix by the Faddeev–LeVerrier recurrence. Fine at desk scale.
fn char_poly(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let mut coeffs = vec![1.0];
    let mut m = a.clone();
    for k in 1..=n {
        let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
        let c = -trace / k as f64;
        coeffs.push(c);
        if k < n {
            let mut shifted = m.clone();
            for i in 0..n {
                shifted[(i, i)] += c;
            }
            m = a * &shifted;
        }
    }
    coeffs
}

/// All roots of a real monic polynomial by Durand–Kerner iteration.
fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>, ControlError> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let eval = |z: Complex64| -> Complex64 {
        coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };
    let radius = 1.0
        + coeffs[1..]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * radius / seed.norm())
        .collect();
    for _ in 0..1000 {
        let mut delta_max = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        // repeated roots converge only linearly; accept once updates stall
        // near machine precision and check the polynomial residual below
        if delta_max <= 1e-10 * radius {
            break;
        }
    }
    let residual_scale = radius.powi(n as i32).max(1.0);
    if roots.iter().any(|&z| eval(z).norm() > 1e-8 * residual_scale) {
        return Err(ControlError::NonConvergence);
    }
    // pair conjugates exactly by zeroing tiny imaginary parts
    for r in &mut roots {
        if r.im.abs() <= 1e-8 * radius {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(roots)
}

/// Eigenvalues of the closed-loop matrix A − BG (general real matrix).
pub fn closed_loop_eigenvalues(cp: &ControlProblem, g: &Matrix) -> Result<Vec<Complex64>, ControlError> {
    if g.rows() != cp.b.cols() || g.cols() != cp.a.rows() {
        return Err(ControlError::InvalidProblem(format!(
            "gain is {}x{}, expected {}x{}",
            g.rows(),
            g.cols(),
            cp.b.cols(),
            cp.a.rows()
        )));
    }
    let closed = &cp.a - &(&cp.b * g);
    poly_roots(&char_poly(&closed))
}

/// A simulated closed-loop run: states, controls v = −Gy and the
/// trapezoidal estimate of the quadratic cost.
#[derive(Debug, Clone)]
pub struct ClosedLoopRun {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub controls: Vec<Vec<f64>>,
    pub cost: f64,
}

impl ClosedLoopRun {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }
}

/// Integrate dy/dt = (A − BG)y with classical RK4 from y0, recording the
/// control and accumulating the cost ½∫(Qy,y) + ½∫(Rv,v) by trapezoids.
pub fn simulate_closed_loop(
    cp: &ControlProblem,
    g: &Matrix,
    y0: &[f64],
    dt_sim: f64,
    n_steps: usize,
) -> Result<ClosedLoopRun, ControlError> {
    if !(dt_sim > 0.0) {
        return Err(ControlError::InvalidProblem(format!(
            "dt_sim = {dt_sim} must be > 0"
        )));
    }
    if y0.len() != cp.a.rows() {
        return Err(ControlError::InvalidProblem(format!(
            "y0 has length {}, expected {}",
            y0.len(),
            cp.a.rows()
        )));
    }
    let closed = &cp.a - &(&cp.b * g);
    let f = |y: &[f64]| closed.matvec(y);
    let axpy = |y: &[f64], h: f64, k: &[f64]| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };
    let integrand = |y: &[f64]| -> f64 {
        let v: Vec<f64> = g.matvec(y).iter().map(|u| -u).collect();
        0.5 * cp.q.quad_form(y) + 0.5 * cp.r.quad_form(&v)
    };

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut controls = Vec::with_capacity(n_steps + 1);
    let mut y = y0.to_vec();
    let mut cost = 0.0;
    let mut prev_integrand = integrand(&y);
    times.push(0.0);
    controls.push(g.matvec(&y).iter().map(|u| -u).collect());
    states.push(y.clone());
    for step in 1..=n_steps {
        let k1 = f(&y);
        let k2 = f(&axpy(&y, 0.5 * dt_sim, &k1));
        let k3 = f(&axpy(&y, 0.5 * dt_sim, &k2));
        let k4 = f(&axpy(&y, dt_sim, &k3));
        y = y
            .iter()
            .enumerate()
            .map(|(i, &yi)| yi + dt_sim / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        let cur = integrand(&y);
        cost += 0.5 * dt_sim * (prev_integrand + cur);
        prev_integrand = cur;
        times.push(step as f64 * dt_sim);
        controls.push(g.matvec(&y).iter().map(|u| -u).collect());
        states.push(y.clone());
    }
    Ok(ClosedLoopRun {
        times,
        states,
        controls,
        cost,
    })
}

/// The harmonic-oscillator plant in first-order form, with scalar command
/// entering the velocity component.
pub fn oscillator_plant(omega: f64, delta: f64, b: f64, alpha: f64) -> ControlProblem {
    let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![-omega * omega, -2.0 * delta]]).unwrap();
    let b_mat = Matrix::new(2, 1, vec![0.0, b]).unwrap();
    let q = SymmetricMatrix::identity(2);
    let r = SymmetricMatrix::diagonal(&[alpha]);
    ControlProblem::new(a, b_mat, q, r, None).expect("oscillator plant data is valid")
}
