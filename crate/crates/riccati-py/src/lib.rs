//! Python bindings: scalar and matrix Riccati scheme, Lyapunov solve and
//! the bundled experiments. Matrices cross the boundary as lists of rows.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use riccati::linalg::{Matrix, SymmetricMatrix};
use riccati::lyapunov::LyapunovProblem;
use riccati::riccati::{RiccatiProblem, SchemeConfig, Trajectory};
use riccati::scalar::ScalarProblem as CoreScalarProblem;

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_symmetric(rows: Vec<Vec<f64>>) -> PyResult<SymmetricMatrix> {
    SymmetricMatrix::from_rows(&rows).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn from_symmetric(s: &SymmetricMatrix) -> Vec<Vec<f64>> {
    let n = s.dim();
    (0..n).map(|i| (0..n).map(|j| s[(i, j)]).collect()).collect()
}

fn trajectory_samples(traj: &Trajectory) -> Vec<(usize, f64, Vec<Vec<f64>>, Vec<f64>, f64)> {
    traj.samples
        .iter()
        .map(|s| {
            (
                s.step,
                s.time,
                from_symmetric(&s.x),
                s.eigenvalues.clone(),
                s.are_residual_fro,
            )
        })
        .collect()
}

/// Scalar Riccati problem dx/dt + kx² − 2ax − q = 0, x(0) = d.
#[pyclass(name = "ScalarProblem")]
struct PyScalarProblem {
    inner: CoreScalarProblem,
}

#[pymethods]
impl PyScalarProblem {
    #[new]
    fn new(k: f64, a: f64, q: f64, d: f64) -> PyResult<Self> {
        CoreScalarProblem::new(k, a, q, d)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn x_star(&self) -> f64 {
        self.inner.x_star
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }

    fn step(&self, x: f64, dt: f64) -> f64 {
        riccati::scalar::scalar_step(&self.inner, x, dt)
    }

    fn euler_step(&self, x: f64, dt: f64) -> f64 {
        riccati::scalar::euler_scalar_step(&self.inner, x, dt)
    }

    fn exact(&self, t: f64) -> f64 {
        riccati::scalar::scalar_exact(&self.inner, t)
    }

    fn is_degenerate(&self, dt: f64) -> bool {
        riccati::scalar::check_degeneracy(&self.inner, dt).is_err()
    }

    fn integrate(&self, dt: f64, n_steps: usize) -> PyResult<Vec<(f64, f64)>> {
        riccati::scalar::scalar_integrate(&self.inner, dt, n_steps)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

/// Matrix Riccati problem dX/dt − (XA + AᵀX) + XKX − Q = 0.
#[pyclass(name = "RiccatiProblem")]
struct PyRiccatiProblem {
    inner: RiccatiProblem,
}

#[pymethods]
impl PyRiccatiProblem {
    #[new]
    #[pyo3(signature = (a, k, q, x0=None))]
    fn new(
        a: Vec<Vec<f64>>,
        k: Vec<Vec<f64>>,
        q: Vec<Vec<f64>>,
        x0: Option<Vec<Vec<f64>>>,
    ) -> PyResult<Self> {
        let a = to_matrix(a)?;
        let k = to_symmetric(k)?;
        let q = to_symmetric(q)?;
        let x0 = match x0 {
            Some(rows) => to_symmetric(rows)?,
            None => SymmetricMatrix::zeros(a.rows()),
        };
        RiccatiProblem::new(a, k, q, x0)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn k_definite(&self) -> bool {
        self.inner.k_definite
    }

    fn are_residual_fro(&self, x: Vec<Vec<f64>>) -> PyResult<f64> {
        let x = to_symmetric(x)?;
        Ok(riccati::riccati::are_residual(&self.inner, &x).norm_fro())
    }

    fn step(&self, x: Vec<Vec<f64>>, dt: f64, mu: f64) -> PyResult<Vec<Vec<f64>>> {
        let x = to_symmetric(x)?;
        let c = SchemeConfig::new(&self.inner.a, dt, mu, 1, 0.0)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        riccati::riccati::riccati_step(&self.inner, &c, &x)
            .map(|next| from_symmetric(&next))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[pyo3(signature = (dt, mu, max_steps, steady_tol=1e-10))]
    fn integrate(
        &self,
        dt: f64,
        mu: f64,
        max_steps: usize,
        steady_tol: f64,
    ) -> PyResult<Vec<(usize, f64, Vec<Vec<f64>>, Vec<f64>, f64)>> {
        let c = SchemeConfig::new(&self.inner.a, dt, mu, max_steps, steady_tol)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        riccati::riccati::integrate(&self.inner, &c)
            .map(|traj| trajectory_samples(&traj))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }
}

#[pyfunction]
#[pyo3(signature = (a, margin=0.1))]
fn select_mu(a: Vec<Vec<f64>>, margin: f64) -> PyResult<f64> {
    Ok(riccati::riccati::select_mu(&to_matrix(a)?, margin))
}

#[pyfunction]
fn solve_lyapunov(s: Vec<Vec<f64>>, y: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let p = LyapunovProblem::new(to_matrix(s)?, to_symmetric(y)?)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    riccati::lyapunov::solve_lyapunov(&p)
        .map(|x| from_symmetric(&x))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
fn sym_eigenvalues(s: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    riccati::linalg::sym_eigen(&to_symmetric(s)?)
        .map(|sp| sp.eigenvalues)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (mu=0.1, dt=0.01, steps=2000))]
fn sqrt_test(
    mu: f64,
    dt: f64,
    steps: usize,
) -> PyResult<Vec<(usize, f64, Vec<Vec<f64>>, Vec<f64>, f64)>> {
    riccati::experiments::sqrt_test(mu, dt, steps)
        .map(|traj| trajectory_samples(&traj))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (alpha=0.01, dt=0.01, mu=0.1, omega=1.0, delta=0.1, b=1.0, steps=2000))]
#[allow(clippy::too_many_arguments)]
fn oscillator_test(
    alpha: f64,
    dt: f64,
    mu: f64,
    omega: f64,
    delta: f64,
    b: f64,
    steps: usize,
) -> PyResult<Vec<(usize, f64, Vec<Vec<f64>>, Vec<f64>, f64)>> {
    riccati::experiments::oscillator_test(alpha, dt, mu, omega, delta, b, steps)
        .map(|traj| trajectory_samples(&traj))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
fn euler_failure_demo() -> (Vec<f64>, Vec<f64>) {
    let r = riccati::experiments::euler_failure_demo();
    (r.euler, r.homographic)
}

#[pymodule]
fn riccati_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalarProblem>()?;
    m.add_class::<PyRiccatiProblem>()?;
    m.add_function(wrap_pyfunction!(select_mu, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lyapunov, m)?)?;
    m.add_function(wrap_pyfunction!(sym_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_test, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_test, m)?)?;
    m.add_function(wrap_pyfunction!(euler_failure_demo, m)?)?;
    Ok(())
}
