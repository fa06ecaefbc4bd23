"""Walk the inequality chain behind the instability criterion.

The proof reduces four-body instability to a one-dimensional condition
3 mu C(mu) <= 1 on the canonical inter-pair mass mu, through a chain of
elementary steps: an exact envelope over a Lagrange parameter, a tight
two-variable quadratic inequality, hydrogen-level inputs from an
independent grid solver, an inverse-square (Hardy) positivity step, and a
ground-state projector identity.  run_chain_suite evaluates every step
numerically at a given mass and reports the residuals.
"""

import sys

from coulomb4 import chain_coefficient, critical_mu_r_canonical, run_chain_suite


def main():
    mu = float(sys.argv[1]) if len(sys.argv) > 1 else 0.1
    print(f"canonical inter-pair mass: {mu}")
    print(f"coefficient C(mu) = {chain_coefficient(mu):.12f}")
    print(f"scalar condition 3 mu C(mu) = {3 * mu * chain_coefficient(mu):.12f}"
          f"  (instability proven when <= 1)")
    print(f"critical mass where equality holds: {critical_mu_r_canonical():.15f}\n")

    evaluation = run_chain_suite(mu)
    width = max(len(r.name) for r in evaluation.records)
    for record in evaluation.records:
        status = "ok" if record.passed else "FAILED"
        print(f"  {record.name:{width}s}  residual {record.residual: .3e}"
              f"  (tol {record.tolerance:.1e})  {status}")
    print(f"\nall steps passed: {evaluation.all_passed}")
    print(f"internal state: alpha={evaluation.alpha:.6f} beta={evaluation.beta:.6f} "
          f"lam={evaluation.lam:.6f} coupling={evaluation.coupling:.6f}")


if __name__ == "__main__":
    main()
