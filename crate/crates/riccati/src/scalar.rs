//! Scalar Riccati equation dx/dt + kx² − 2ax − q = 0 and its homographic
//! implicit scheme: x_{j+1} = ((1 + 2a⁺Δt)x_j + qΔt) / (kΔt·x_j + 1 + 2a⁻Δt).
//! The iterate stays nonnegative for every Δt > 0; away from the degenerate
//! time step it converges to the positive root x* of kx² − 2ax − q = 0.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("invalid scalar problem: {0}")]
    InvalidProblem(String),
    #[error("degenerate time step dt = {dt}: 1 + 2|a|dt - kq dt² vanishes")]
    DegenerateTimeStep { dt: f64 },
}

/// Scalar problem data (k, a, q) with initial value d, plus the derived
/// positive fixed point x* and time constant τ = 1/(2√(a² + kq)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarProblem {
    pub k: f64,
    pub a: f64,
    pub q: f64,
    pub d: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub x_star: f64,
    pub tau: f64,
}

impl ScalarProblem {
    pub fn new(k: f64, a: f64, q: f64, d: f64) -> Result<Self, ScalarError> {
        if !(k.is_finite() && a.is_finite() && q.is_finite() && d.is_finite()) {
            return Err(ScalarError::InvalidProblem("non-finite data".into()));
        }
        if k <= 0.0 {
            return Err(ScalarError::InvalidProblem(format!("k = {k} must be > 0")));
        }
        if q < 0.0 {
            return Err(ScalarError::InvalidProblem(format!("q = {q} must be >= 0")));
        }
        if d < 0.0 {
            return Err(ScalarError::InvalidProblem(format!("d = {d} must be >= 0")));
        }
        let root = (a * a + k * q).sqrt();
        Ok(Self {
            k,
            a,
            q,
            d,
            a_plus: a.max(0.0),
            a_minus: (-a).max(0.0),
            x_star: (a + root) / k,
            tau: if root > 0.0 { 1.0 / (2.0 * root) } else { f64::INFINITY },
        })
    }
}

/// One homographic step. The denominator is ≥ 1 for x_j ≥ 0, so the result
/// is always defined and nonnegative.
pub fn scalar_step(p: &ScalarProblem, x_j: f64, dt: f64) -> f64 {
    ((1.0 + 2.0 * p.a_plus * dt) * x_j + p.q * dt) / (p.k * dt * x_j + 1.0 + 2.0 * p.a_minus * dt)
}

/// Positive root x* = (a + √(a² + kq))/k of the steady-state equation.
pub fn scalar_fixed_point(p: &ScalarProblem) -> f64 {
    p.x_star
}

/// One forward Euler step; kept as the baseline that loses positivity for
/// large dt.
pub fn euler_scalar_step(p: &ScalarProblem, x_j: f64, dt: f64) -> f64 {
    x_j + dt * (p.q + 2.0 * p.a * x_j - p.k * x_j * x_j)
}

/// A time step is degenerate when 1 + 2|a|Δt − kqΔt² vanishes; there the
/// homographic map collapses to a constant sequence and cannot track the
/// equation. Tested with a relative tolerance since exact inequality is
/// meaningless in floating point.
pub fn check_degeneracy(p: &ScalarProblem, dt: f64) -> Result<(), ScalarError> {
    let expr = 1.0 + 2.0 * p.a.abs() * dt - p.k * p.q * dt * dt;
    let scale = 1.0 + 2.0 * p.a.abs() * dt + p.k * p.q * dt * dt;
    if expr.abs() <= 1e-12 * scale {
        Err(ScalarError::DegenerateTimeStep { dt })
    } else {
        Ok(())
    }
}

/// Constant value taken by the sequence from j = 1 on when the time step is
/// degenerate: (1 + 2a⁺Δt)/(kΔt).
pub fn degenerate_constant(p: &ScalarProblem, dt: f64) -> f64 {
    (1.0 + 2.0 * p.a_plus * dt) / (p.k * dt)
}

/// Exact solution x(t; d). Closed form from the substitution x = x* + 1/w,
/// which turns the Riccati equation into the linear ODE w' = 2sw + k with
/// s = √(a² + kq). Written with e^{−2st} to stay finite for large t.
pub fn scalar_exact(p: &ScalarProblem, t: f64) -> f64 {
    if t == 0.0 {
        return p.d;
    }
    let s = (p.a * p.a + p.k * p.q).sqrt();
    if p.d == p.x_star {
        return p.x_star;
    }
    if s == 0.0 {
        // a = 0, q = 0: pure decay x' = -kx², x = d/(1 + kdt)
        return p.d / (1.0 + p.k * p.d * t);
    }
    if p.q == 0.0 && p.d == 0.0 {
        // d sits on the repelling root; solution is identically zero
        return 0.0;
    }
    let half = p.k / (2.0 * s);
    let w0 = 1.0 / (p.d - p.x_star);
    let decay = (-2.0 * s * t).exp();
    // 1/w(t) with w(t) = (w0 + half) e^{2st} - half
    p.x_star + decay / (w0 + half - half * decay)
}

/// Integrate the homographic scheme: returns samples (t_j, x_j) with
/// x_0 = d, j = 0..=n_steps. Rejects degenerate time steps up front.
pub fn scalar_integrate(
    p: &ScalarProblem,
    dt: f64,
    n_steps: usize,
) -> Result<Vec<(f64, f64)>, ScalarError> {
    check_degeneracy(p, dt)?;
    let mut out = Vec::with_capacity(n_steps + 1);
    let mut x = p.d;
    out.push((0.0, x));
    for j in 1..=n_steps {
        x = scalar_step(p, x, dt);
        out.push((j as f64 * dt, x));
    }
    Ok(out)
}

/// Result of a convergence-order measurement against the exact solution.
#[derive(Debug, Clone)]
pub struct OrderStudy {
    /// (dt, |x_exact(t_final) - x_numeric(t_final)|) per time step.
    pub samples: Vec<(f64, f64)>,
    /// log₂(e(2dt)/e(dt)) for consecutive pairs.
    pub pairwise_orders: Vec<f64>,
    /// Mean of pairwise orders; None when every error vanishes (scheme exact).
    pub observed_order: Option<f64>,
}

/// Measure the empirical convergence order at t_final over a decreasing
/// dt list (ratio 2, at least 3 entries).
pub fn measure_order(
    p: &ScalarProblem,
    t_final: f64,
    dt_list: &[f64],
) -> Result<OrderStudy, ScalarError> {
    assert!(dt_list.len() >= 3, "need at least 3 time steps");
    let exact = scalar_exact(p, t_final);
    let mut samples = Vec::new();
    for &dt in dt_list {
        let n = (t_final / dt).round() as usize;
        let traj = scalar_integrate(p, dt, n)?;
        let (_, x_final) = *traj.last().unwrap();
        samples.push((dt, (exact - x_final).abs()));
    }
    if samples.iter().all(|&(_, e)| e == 0.0) {
        return Ok(OrderStudy {
            samples,
            pairwise_orders: Vec::new(),
            observed_order: None,
        });
    }
    let pairwise_orders: Vec<f64> = samples
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).log2())
        .collect();
    let observed = pairwise_orders.iter().sum::<f64>() / pairwise_orders.len() as f64;
    Ok(OrderStudy {
        samples,
        pairwise_orders,
        observed_order: Some(observed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basic() -> ScalarProblem {
        ScalarProblem::new(1.0, 0.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(ScalarProblem::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(ScalarProblem::new(1.0, 0.0, -1.0, 0.0).is_err());
        assert!(ScalarProblem::new(1.0, 0.0, 1.0, -0.5).is_err());
        let p = ScalarProblem::new(2.0, -1.5, 3.0, 0.0).unwrap();
        assert_eq!(p.a_plus, 0.0);
        assert_eq!(p.a_minus, 1.5);
        assert!(p.a_plus * p.a_minus == 0.0);
        // k x*² - 2a x* - q = 0
        let res = p.k * p.x_star * p.x_star - 2.0 * p.a * p.x_star - p.q;
        assert!(res.abs() <= 1e-12 * p.x_star.max(1.0));
    }

    #[test]
    fn step_direct_evaluation() {
        let p = basic();
        assert!((scalar_step(&p, 0.0, 0.1) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn step_stays_positive_where_euler_fails() {
        let p = basic();
        let x1 = scalar_step(&p, 0.0, 3.0);
        assert_eq!(x1, 3.0);
        let x2 = scalar_step(&p, x1, 3.0);
        assert!((x2 - 0.6).abs() < 1e-15);
        // Euler from the same state goes negative
        let e1 = euler_scalar_step(&p, 0.0, 3.0);
        assert_eq!(e1, 3.0);
        let e2 = euler_scalar_step(&p, e1, 3.0);
        assert_eq!(e2, -21.0);
    }

    #[test]
    fn fixed_point_values() {
        assert_eq!(
            scalar_fixed_point(&ScalarProblem::new(1.0, 0.0, 1.0, 0.0).unwrap()),
            1.0
        );
        assert_eq!(
            scalar_fixed_point(&ScalarProblem::new(1.0, 0.0, 4.0, 0.0).unwrap()),
            2.0
        );
        assert_eq!(
            scalar_fixed_point(&ScalarProblem::new(2.0, 1.0, 0.0, 0.0).unwrap()),
            1.0
        );
    }

    #[test]
    fn fixed_point_invariant_under_step() {
        let p = basic();
        for dt in [0.01, 0.5, 3.0, 100.0] {
            let x = scalar_step(&p, p.x_star, dt);
            assert!((x - p.x_star).abs() <= 1e-12 * p.x_star);
        }
    }

    #[test]
    fn degeneracy_detection() {
        let p = basic();
        assert!(check_degeneracy(&p, 1.0).is_err());
        assert!(check_degeneracy(&p, 0.5).is_ok());
        let q0 = ScalarProblem::new(3.0, -2.0, 0.0, 1.0).unwrap();
        for dt in [0.1, 1.0, 10.0, 1e4] {
            assert!(check_degeneracy(&q0, dt).is_ok());
        }
    }

    #[test]
    fn degenerate_sequence_is_constant() {
        let p = basic();
        let dt = 1.0;
        let c = degenerate_constant(&p, dt);
        assert_eq!(c, 1.0);
        let x1 = scalar_step(&p, p.d, dt);
        let x2 = scalar_step(&p, x1, dt);
        assert!((x1 - c).abs() <= 1e-12);
        assert!((x2 - x1).abs() <= 1e-12);
    }

    #[test]
    fn exact_solution_is_tanh_for_unit_data() {
        let p = basic();
        let x = scalar_exact(&p, 1.0);
        assert!((x - 1.0f64.tanh()).abs() < 1e-12);
        assert_eq!(scalar_exact(&p, 0.0), 0.0);
    }

    #[test]
    fn exact_solution_long_time_limit() {
        for (k, a, q, d) in [(1.0, 0.0, 1.0, 0.0), (2.0, 1.0, 3.0, 0.5), (1.0, -1.0, 2.0, 4.0)] {
            let p = ScalarProblem::new(k, a, q, d).unwrap();
            let s = (a * a + k * q).sqrt();
            let x = scalar_exact(&p, 50.0 / s);
            assert!(
                (x - p.x_star).abs() <= 1e-10,
                "limit mismatch for ({k},{a},{q},{d})"
            );
        }
    }

    // Independent oracle: classical RK4 at tiny step must agree with the
    // closed form.
    #[test]
    fn exact_solution_matches_rk4() {
        let cases = [
            (1.0, 0.0, 1.0, 0.0),
            (2.0, 1.0, 3.0, 0.5),
            (1.0, -1.0, 2.0, 4.0),
            (0.5, 0.3, 0.0, 2.0),
        ];
        for (k, a, q, d) in cases {
            let p = ScalarProblem::new(k, a, q, d).unwrap();
            let f = |x: f64| q + 2.0 * a * x - k * x * x;
            let mut x = d;
            let h: f64 = 1e-5;
            let n = (1.0 / h).round() as usize;
            for _ in 0..n {
                let k1 = f(x);
                let k2 = f(x + 0.5 * h * k1);
                let k3 = f(x + 0.5 * h * k2);
                let k4 = f(x + h * k3);
                x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            let closed = scalar_exact(&p, 1.0);
            assert!(
                (closed - x).abs() <= 1e-8,
                "closed form {closed} vs RK4 {x} for ({k},{a},{q},{d})"
            );
        }
    }

    #[test]
    fn integrate_chained_steps() {
        let p = basic();
        let traj = scalar_integrate(&p, 0.1, 2).unwrap();
        assert_eq!(traj[0], (0.0, 0.0));
        assert!((traj[1].1 - 0.1).abs() < 1e-15);
        assert!((traj[2].1 - 0.2 / 1.01).abs() < 1e-15);
    }

    #[test]
    fn integrate_rejects_degenerate_dt() {
        let p = basic();
        assert!(matches!(
            scalar_integrate(&p, 1.0, 10),
            Err(ScalarError::DegenerateTimeStep { .. })
        ));
    }

    #[test]
    fn integrate_converges_to_fixed_point() {
        let p = basic();
        let dt = 0.1;
        let n = (50.0 * p.tau / dt).ceil() as usize;
        let traj = scalar_integrate(&p, dt, n).unwrap();
        let (_, x_last) = *traj.last().unwrap();
        assert!((x_last - p.x_star).abs() <= 1e-8);
        assert!(traj.iter().all(|&(_, x)| x >= 0.0));
    }

    #[test]
    fn order_two_when_a_is_zero() {
        let p = basic();
        let study = measure_order(&p, 1.0, &[0.1, 0.05, 0.025]).unwrap();
        let order = study.observed_order.unwrap();
        assert!((1.8..=2.2).contains(&order), "order {order}");
    }

    #[test]
    fn order_one_when_a_is_nonzero() {
        let p = ScalarProblem::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let study = measure_order(&p, 1.0, &[0.1, 0.05, 0.025]).unwrap();
        let order = study.observed_order.unwrap();
        assert!((0.9..=1.3).contains(&order), "order {order}");
    }

    #[test]
    fn order_study_exact_at_fixed_point() {
        let p = ScalarProblem::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let study = measure_order(&p, 1.0, &[0.1, 0.05, 0.025]).unwrap();
        assert!(study.observed_order.is_none());
    }
}
