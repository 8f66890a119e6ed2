#!/usr/bin/env python3
"""Smoke test for the riccati_py extension module.

Build the module first, then run this script from the repository root:

    cargo build -p riccati-py --release
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_module():
    """Copy the cdylib under the importable name and load it."""
    for profile in ("release", "debug"):
        built = REPO / "target" / profile / "libriccati_py.so"
        if built.exists():
            stage = Path(tempfile.mkdtemp(prefix="riccati_py_"))
            shutil.copy(built, stage / "riccati_py.so")
            sys.path.insert(0, str(stage))
            import riccati_py

            return riccati_py
    raise SystemExit("build the extension first: cargo build -p riccati-py --release")


def check(label, ok, detail=""):
    print(f"{label:<40} {'ok' if ok else 'FAIL'} {detail}")
    if not ok:
        raise SystemExit(1)


def main():
    r = import_module()

    # scalar scheme: dx/dt + x^2 = 1 from x(0) = 0 tends to tanh(t)
    p = r.ScalarProblem(1.0, 0.0, 1.0, 0.0)
    check("scalar fixed point", abs(p.x_star - 1.0) < 1e-15)
    traj = p.integrate(0.001, 1000)
    t, x = traj[-1]
    check(
        "scalar x(1) vs tanh(1)",
        abs(x - math.tanh(1.0)) < 1e-3,
        f"x(1) = {x:.6f}",
    )
    check("exact solution agrees", abs(p.exact(1.0) - math.tanh(1.0)) < 1e-14)
    check("dt = 1 flagged degenerate", p.is_degenerate(1.0))

    # explicit Euler loses positivity where the implicit scheme does not
    euler, homographic = r.euler_failure_demo()
    check(
        "euler goes negative, scheme does not",
        euler[2] == -21.0 and abs(homographic[2] - 0.6) < 1e-15,
        f"euler {euler}, scheme {[round(v, 3) for v in homographic]}",
    )

    # matrix square-root experiment: X(t) -> sqrt(Q), spectrum {1, 10}
    samples = r.sqrt_test(mu=0.1, dt=0.01, steps=2000)
    step, time, x_rows, eigs, resid = samples[-1]
    check(
        "sqrt test spectrum {1, 10}",
        abs(eigs[0] - 1.0) < 1e-3 and abs(eigs[1] - 10.0) < 1e-3,
        f"eigs = {[round(e, 5) for e in eigs]}",
    )
    check("sqrt test residual", resid < 1e-6, f"residual = {resid:.2e}")
    check(
        "sqrt test limit entries",
        abs(x_rows[0][0] - 5.5) < 1e-3 and abs(x_rows[0][1] + 4.5) < 1e-3,
    )

    # Lyapunov solve: S = I, so S^T X + X S = Y gives X = Y / 2
    y = [[4.0, 2.0], [2.0, 6.0]]
    x = r.solve_lyapunov([[1.0, 0.0], [0.0, 1.0]], y)
    check(
        "lyapunov identity case",
        all(abs(x[i][j] - y[i][j] / 2.0) < 1e-12 for i in range(2) for j in range(2)),
    )

    # one implicit step from X0 = 0 with mu = 1: X1 = dt Q / (1 + mu dt)
    mp = r.RiccatiProblem([[0.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]],
                          [[2.0, 1.0], [1.0, 2.0]])
    x1 = mp.step([[0.0, 0.0], [0.0, 0.0]], 0.01, 1.0)
    expected = 0.01 / 1.01
    check(
        "first implicit step from zero",
        abs(x1[0][0] - 2.0 * expected) < 1e-12 and abs(x1[0][1] - expected) < 1e-12,
    )

    check("mu selection", abs(r.select_mu([[0.0, 1.0], [-1.0, -0.2]]) - 0.1) < 1e-12)
    ev = r.sym_eigenvalues([[50.5, -49.5], [-49.5, 50.5]])
    check("eigensolver on test matrix", abs(ev[0] - 1.0) < 1e-10 and abs(ev[1] - 100.0) < 1e-10)

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
