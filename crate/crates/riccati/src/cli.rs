//! Command-line front end: JSON problem files in, CSV trajectories out.
//!
//! Exit codes: 0 success, 2 validation error, 3 degenerate time step,
//! 4 internal solver error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::control::{assemble_riccati, closed_loop_eigenvalues, feedback_gain};
use crate::experiments::{
    euler_failure_demo, oscillator_test, sqrt_test, ExperimentError,
};
use crate::linalg::{Matrix, SymmetricMatrix};
use crate::riccati::{integrate, select_mu, RiccatiError, RiccatiProblem, SchemeConfig, Trajectory};
use crate::scalar::{
    measure_order, scalar_integrate, ScalarError, ScalarProblem,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

/// On-disk problem description. Either a direct "K" or the pair ("B", "R")
/// must be present, not both; matrices are arrays of rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<f64>>>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<f64>>>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Vec<f64>>>,
    #[serde(rename = "X0", skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<Vec<f64>>>,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Degenerate(String),
    Solver(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Degenerate(m) | CliError::Solver(m) => m,
        }
    }
}

impl From<RiccatiError> for CliError {
    fn from(e: RiccatiError) -> Self {
        match e {
            RiccatiError::InvalidProblem(_) | RiccatiError::InvalidConfig(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::InvalidProblem(_) => CliError::Validation(e.to_string()),
            ScalarError::DegenerateTimeStep { .. } => CliError::Degenerate(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Riccati(inner) => inner.into(),
            other => CliError::Solver(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "riccati",
    about = "Positivity-preserving implicit integrator for matrix Riccati equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a Riccati problem read from a JSON problem file
    Solve(SolveArgs),
    /// Scalar homographic scheme with degeneracy guard
    Scalar(ScalarArgs),
    /// Square-root test: dX/dt + X² = Q from X(0) = 0
    SqrtTest(SqrtTestArgs),
    /// Controlled harmonic oscillator test
    Oscillator(OscillatorArgs),
    /// Empirical convergence-order table for the scalar scheme
    OrderStudy(OrderStudyArgs),
    /// Print the Euler positivity-failure comparison
    EulerDemo,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Splitting parameter: "auto" or a number
    #[arg(long, default_value = "auto")]
    mu: String,
    #[arg(long, default_value_t = 10000)]
    steps: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
    /// Echo the parsed problem file to this path
    #[arg(long)]
    dump_problem: Option<PathBuf>,
    /// Also report the feedback gain and closed-loop eigenvalues on stderr
    /// (needs B and R in the problem file)
    #[arg(long, default_value_t = false)]
    feedback: bool,
}

#[derive(Args)]
struct ScalarArgs {
    #[arg(long)]
    k: f64,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    d: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SqrtTestArgs {
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OscillatorArgs {
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OrderStudyArgs {
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    d: f64,
    #[arg(long, default_value_t = 1.0)]
    t_final: f64,
    #[arg(long)]
    out: PathBuf,
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Fixed trajectory schema: step,time,lambda_1..lambda_n,are_residual_fro,
/// 17 significant digits, LF line endings.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.samples[0].eigenvalues.len();
    let mut out = String::from("step,time");
    for i in 1..=n {
        write!(out, ",lambda_{i}").unwrap();
    }
    out.push_str(",are_residual_fro\n");
    for s in &traj.samples {
        write!(out, "{},{}", s.step, fmt_num(s.time)).unwrap();
        for ev in &s.eigenvalues {
            write!(out, ",{}", fmt_num(*ev)).unwrap();
        }
        writeln!(out, ",{}", fmt_num(s.are_residual_fro)).unwrap();
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

fn matrix_from_key(key: &str, rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    Matrix::from_rows(rows)
        .map_err(|e| CliError::Validation(format!("key \"{key}\": {e}")))
}

fn symmetric_from_key(key: &str, rows: &[Vec<f64>], n: usize) -> Result<SymmetricMatrix, CliError> {
    let m = matrix_from_key(key, rows)?;
    if m.rows() != n || m.cols() != n {
        return Err(CliError::Validation(format!(
            "key \"{key}\": expected {n}x{n}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(SymmetricMatrix::symmetrize(&m))
}

pub fn load_problem_file(path: &Path) -> Result<ProblemFile, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

/// Problem file → Riccati problem, plus the control data when (B, R) was
/// given (needed for the feedback report).
fn build_problem(
    pf: &ProblemFile,
) -> Result<(RiccatiProblem, Option<(Matrix, SymmetricMatrix)>), CliError> {
    let a = matrix_from_key("A", &pf.a)?;
    if !a.is_square() {
        return Err(CliError::Validation(format!(
            "key \"A\": expected square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let q = match &pf.q {
        Some(rows) => symmetric_from_key("Q", rows, n)?,
        None => SymmetricMatrix::zeros(n),
    };
    let x0 = match &pf.x0 {
        Some(rows) => symmetric_from_key("X0", rows, n)?,
        None => SymmetricMatrix::zeros(n),
    };
    match (&pf.k, &pf.b, &pf.r) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => Err(CliError::Validation(
            "provide either \"K\" or the pair \"B\",\"R\", not both".into(),
        )),
        (Some(k_rows), None, None) => {
            let k = symmetric_from_key("K", k_rows, n)?;
            let p = RiccatiProblem::new(a, k, q, x0)?;
            Ok((p, None))
        }
        (None, Some(b_rows), Some(r_rows)) => {
            let b = matrix_from_key("B", b_rows)?;
            if b.rows() != n {
                return Err(CliError::Validation(format!(
                    "key \"B\": expected {n} rows, got {}",
                    b.rows()
                )));
            }
            let m = b.cols();
            let r = symmetric_from_key("R", r_rows, m)?;
            let cp = crate::control::ControlProblem::new(a, b.clone(), q.clone(), r.clone(), None)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let mut p = assemble_riccati(&cp).map_err(|e| CliError::Validation(e.to_string()))?;
            p.x0 = x0;
            Ok((p, Some((b, r))))
        }
        (None, _, _) => Err(CliError::Validation(
            "provide either \"K\" or both \"B\" and \"R\"".into(),
        )),
    }
}

fn parse_mu(arg: &str, a: &Matrix) -> Result<f64, CliError> {
    if arg == "auto" {
        let mu = select_mu(a, 0.1);
        eprintln!("selected mu = {mu}");
        Ok(mu)
    } else {
        arg.parse::<f64>()
            .map_err(|_| CliError::Validation(format!("--mu must be \"auto\" or a number, got {arg}")))
    }
}

fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    let pf = load_problem_file(&args.problem).map_err(CliError::Validation)?;
    if let Some(dump) = &args.dump_problem {
        let text = serde_json::to_string_pretty(&pf)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        write_file(dump, &format!("{text}\n"))?;
    }
    let (p, control_data) = build_problem(&pf)?;
    let mu = parse_mu(&args.mu, &p.a)?;
    let c = SchemeConfig::new(&p.a, args.dt, mu, args.steps, args.tol)?;
    let traj = integrate(&p, &c)?;
    write_file(&args.out, &trajectory_csv(&traj))?;
    if args.feedback {
        let (b, r) = control_data.ok_or_else(|| {
            CliError::Validation("--feedback needs \"B\" and \"R\" in the problem file".into())
        })?;
        let cp = crate::control::ControlProblem::new(p.a.clone(), b, p.q.clone(), r, None)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let x_inf = &traj.last().x;
        let g = feedback_gain(&cp, x_inf).map_err(|e| CliError::Solver(e.to_string()))?;
        let eigs =
            closed_loop_eigenvalues(&cp, &g).map_err(|e| CliError::Solver(e.to_string()))?;
        eprintln!("feedback gain rows:");
        for i in 0..g.rows() {
            eprintln!("  {:?}", g.row(i));
        }
        eprintln!(
            "closed-loop eigenvalues: {}",
            eigs.iter()
                .map(|e| format!("{:.6}{:+.6}i", e.re, e.im))
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    Ok(())
}

fn run_scalar(args: &ScalarArgs) -> Result<(), CliError> {
    let p = ScalarProblem::new(args.k, args.a, args.q, args.d)?;
    let traj = scalar_integrate(&p, args.dt, args.steps)?;
    let mut out = String::from("step,time,lambda_1,are_residual_fro\n");
    for (j, &(t, x)) in traj.iter().enumerate() {
        let residual = (args.k * x * x - 2.0 * args.a * x - args.q).abs();
        writeln!(out, "{j},{},{},{}", fmt_num(t), fmt_num(x), fmt_num(residual)).unwrap();
    }
    write_file(&args.out, &out)
}

fn run_sqrt_test(args: &SqrtTestArgs) -> Result<(), CliError> {
    let traj = sqrt_test(args.mu, args.dt, args.steps)?;
    write_file(&args.out, &trajectory_csv(&traj))
}

fn run_oscillator(args: &OscillatorArgs) -> Result<(), CliError> {
    // default step count: t_end = 20 at dt = 0.01, short runs for huge dt
    let steps = args.steps.unwrap_or(if args.dt >= 1.0 { 50 } else { 2000 });
    let traj = oscillator_test(
        args.alpha, args.dt, args.mu, args.omega, args.delta, args.b, steps,
    )?;
    write_file(&args.out, &trajectory_csv(&traj))
}

fn run_order_study(args: &OrderStudyArgs) -> Result<(), CliError> {
    let p = ScalarProblem::new(args.k, args.a, args.q, args.d)?;
    let dt_list = [0.1, 0.05, 0.025, 0.0125];
    let study = measure_order(&p, args.t_final, &dt_list)?;
    let mut out = String::from("dt,error,pairwise_order\n");
    for (i, &(dt, err)) in study.samples.iter().enumerate() {
        let order = if i == 0 {
            String::new()
        } else {
            fmt_num(study.pairwise_orders[i - 1])
        };
        writeln!(out, "{},{},{order}", fmt_num(dt), fmt_num(err)).unwrap();
    }
    match study.observed_order {
        Some(o) => eprintln!("observed order: {o:.3}"),
        None => eprintln!("scheme exact on this problem (zero error at every dt)"),
    }
    write_file(&args.out, &out)
}

fn run_euler_demo() {
    let r = euler_failure_demo();
    println!("scalar problem k=1 a=0 q=1 d=0, dt = {}", r.dt);
    println!("step  euler                 homographic");
    for (j, (&e, &h)) in r.euler.iter().zip(&r.homographic).enumerate() {
        println!("{j:<5} {e:<21} {h}");
    }
    println!(
        "euler went negative: {}; homographic stayed nonnegative: {}",
        r.euler_went_negative(),
        r.homographic_stayed_nonnegative()
    );
}

/// Entry point used by both the binary and the CLI tests.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exit
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Scalar(args) => run_scalar(args),
        Command::SqrtTest(args) => run_sqrt_test(args),
        Command::Oscillator(args) => run_oscillator(args),
        Command::OrderStudy(args) => run_order_study(args),
        Command::EulerDemo => {
            run_euler_demo();
            Ok(())
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
