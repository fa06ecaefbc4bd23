"""End-to-end acceptance gate.

Eight criteria, each a single test printing one PASS/FAIL line with the
measured numbers at the stated tolerances (run with -s to see the lines).
"""

import math

import mpmath
import numpy as np

from coulomb4 import (
    Classification,
    FourBodySystem,
    classify,
    critical_mu_r_canonical,
    critical_ratio,
)
from coulomb4.chain_verify import (
    chain_coefficient,
    grid_spectral_check,
    hardy_check,
    lambda_envelope,
    verify_quadratic_inequality,
)
from coulomb4.ecg_solver import (
    CoulombSystem,
    _Layout,
    certification_margin,
    stability_probe,
    svm_grow,
)
from coulomb4.effpot import InteractionDecomposition, pair_distance_oracle, veff_bound_check
from coulomb4.twocenter import two_center_ground

M_P = 1836.152672


def _report(number: int, name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number} ({name}): {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {number} ({name}): {detail}"


def test_criterion_1_exact_constant():
    mpmath.mp.dps = 60
    exact = float((13 - 2 * mpmath.sqrt(22)) / 54)
    dev_const = abs(critical_ratio() - exact)

    def g(mu):
        return 3.0 * mu * chain_coefficient(mu) - 1.0

    lo, hi = 1e-9, 0.375 - 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    dev_root = abs(0.5 * (lo + hi) - 2.0 * critical_ratio())
    ok = dev_const <= 1e-12 and dev_root < 1e-10
    _report(
        1, "exact constant", ok,
        f"|constant - high-precision| = {dev_const:.3e} (tol 1e-12), "
        f"|bisection root - 2x constant| = {dev_root:.3e} (tol 1e-10)",
    )


def test_criterion_2_verdicts():
    hhbar = classify(FourBodySystem(M_P, 1.0, 1.0, M_P))
    ratio_dev = abs(hhbar.ratio - 4.0 / (M_P + 1.0))
    muonic = classify(FourBodySystem(M_P, 206.768283, 1.0, 1.0))
    equal = classify(FourBodySystem(1.0, 1.0, 1.0, 1.0))
    ok = (
        hhbar.classification is Classification.PROVEN_UNSTABLE
        and ratio_dev <= 1e-9
        and muonic.classification is Classification.PROVEN_UNSTABLE
        and equal.classification is Classification.INDETERMINATE
    )
    _report(
        2, "verdicts", ok,
        f"hydrogen-antihydrogen {hhbar.classification.value} ratio dev {ratio_dev:.3e} "
        f"(tol 1e-9), muonic mixture {muonic.classification.value}, "
        f"equal masses {equal.classification.value}",
    )


def test_criterion_3_chain_suite():
    rng = np.random.default_rng(31)
    worst_rel = 0.0
    for _ in range(100_000):
        beta = rng.uniform(0.0, 12.0)
        mu_r = rng.uniform(1e-4, 0.374)
        lam_star = beta * beta / (4.0 * mu_r) - 1.0
        oracle = -2.0 * (lam_star + 1.0) ** 2 * mu_r + lam_star * beta * beta
        dev = abs(lambda_envelope(beta, mu_r) - oracle) / max(1.0, abs(oracle))
        worst_rel = max(worst_rel, dev)
    grid_min = math.inf
    analytic_worst = 0.0
    for mu_r in rng.uniform(1e-6, 0.375 - 1e-9, size=100):
        rep = verify_quadratic_inequality(float(mu_r))
        grid_min = min(grid_min, rep.grid_min)
        analytic_worst = max(analytic_worst, abs(rep.analytic_min))
    ok = worst_rel <= 1e-9 and grid_min >= -1e-9 and analytic_worst <= 1e-8
    _report(
        3, "chain suite", ok,
        f"envelope identity worst rel dev {worst_rel:.3e} at 1e5 points (tol 1e-9), "
        f"quadratic grid min {grid_min:.3e} (floor -1e-9), "
        f"analytic min worst {analytic_worst:.3e} (tol 1e-8) over 100 masses",
    )


def test_criterion_4_spectral_inputs():
    e1, e2 = grid_spectral_check(2.0)
    dev1, dev2 = abs(e1 + 1.0), abs(e2 + 0.25)
    quarter = hardy_check(0.25)
    above = hardy_check(0.26)
    ratio_dev = abs(above.scaling_ratio - 4.0)
    ok = (
        dev1 <= 1e-6
        and dev2 <= 1e-6
        and quarter.min_quotient >= -1e-8
        and above.violation_found
        and ratio_dev <= 0.05 * 4.0
    )
    _report(
        4, "spectral inputs", ok,
        f"grid levels dev ({dev1:.3e}, {dev2:.3e}) (tol 1e-6), "
        f"inverse-square quotient at 1/4 min {quarter.min_quotient:.3e} (floor -1e-8), "
        f"violation at 0.26 scaling ratio {above.scaling_ratio:.6f} (4 +- 5%)",
    )


def test_criterion_5_effective_potentials():
    rng = np.random.default_rng(51)
    worst = 0.0
    for _ in range(10_000):
        m = 10.0 ** rng.uniform(-1.5, 3.0, size=4)
        decomp = InteractionDecomposition(m[1] / (m[0] + m[1]), m[3] / (m[2] + m[3]))
        x, y, R = rng.normal(0.0, 2.0, size=(3, 3))
        got = decomp.distances(x, y, R)
        want = pair_distance_oracle(m, x, y, R)
        for pair, value in want.items():
            dev = abs(float(got[pair]) - float(value)) / max(1e-30, float(value))
            worst = max(worst, dev)
    # stratified envelope audit
    min_residual = math.inf
    checked = 0
    for i in range(1000):
        stratum = i % 5
        if stratum == 0:
            a, b = rng.uniform(0.1, 0.9, size=2)
            y, R = rng.normal(0.0, 1.0, size=(2, 3))
        elif stratum == 1:
            a, b = rng.uniform(0.1, 0.9, size=2)
            z = np.array([0.0, 0.0, 1.0])
            y = z * rng.uniform(0.2, 3.0)
            R = z * rng.uniform(0.2, 3.0) * rng.choice([-1.0, 1.0])
        elif stratum == 2:
            a, b = 0.999, 0.001
            y, R = rng.normal(0.0, 1.0, size=(2, 3))
        elif stratum == 3:
            a, b = rng.uniform(0.3, 0.7, size=2)
            y, R = rng.normal(0.0, 0.1, size=(2, 3))
        else:
            a, b = rng.uniform(0.1, 0.9, size=2)
            y = rng.normal(0.0, 0.5, size=3)
            R = rng.normal(0.0, 8.0, size=3)
        decomp = InteractionDecomposition(a, b)
        if min(
            np.linalg.norm(decomp.centre_first(y, R)),
            np.linalg.norm(decomp.centre_second(y, R)),
        ) < 1e-6:
            continue
        check = veff_bound_check(decomp, y, R)
        min_residual = min(min_residual, check.residual_w1, check.residual_w2)
        checked += 1
    ok = worst <= 1e-12 and min_residual >= -1e-6 and checked >= 950
    _report(
        5, "effective potentials", ok,
        f"separation formulas worst rel dev {worst:.3e} at 1e4 points (tol 1e-12), "
        f"envelope residual min {min_residual:.3e} over {checked} stratified samples "
        f"(floor -1e-6)",
    )


def test_criterion_6_two_center():
    united = two_center_ground(1.0, 0.375, 0.0)
    dev0 = abs(united.energy + 0.75) / 0.75
    energies = [united.energy]
    for d in (0.5, 1.0, 2.0, 4.0, 8.0):
        energies.append(two_center_ground(1.0, 0.375, d).energy)
    slack = 1e-4 * 0.375
    monotone = all(b >= a - slack for a, b in zip(energies, energies[1:]))
    far = two_center_ground(1.0, 0.375, 1.0e5)
    dev_far = abs(far.energy + 0.1875) / 0.1875
    ok = dev0 <= 1e-4 and united.energy >= -0.75 and monotone and dev_far <= 1e-3
    _report(
        6, "two-center", ok,
        f"united-limit rel dev {dev0:.3e} (tol 1e-4, from above), "
        f"monotone over 6-point separation grid: {monotone} (slack 1e-4), "
        f"separated-limit rel dev {dev_far:.3e} (tol 1e-3)",
    )


def test_criterion_7_solver():
    parts = []
    ok = True

    worst_pair = 0.0
    for mu in (0.5, 1.0, 2.0, 918.076336):
        _, res = svm_grow(CoulombSystem((2.0 * mu, 2.0 * mu), (1, -1)), target=20, seed=0)
        worst_pair = max(worst_pair, abs(res.e0 + mu / 2.0) / (mu / 2.0))
    ok &= worst_pair <= 1e-6
    parts.append(f"two-body worst rel dev {worst_pair:.3e} (tol 1e-6)")

    _, ps_minus = svm_grow(CoulombSystem((1.0, 1.0, 1.0), (-1, 1, -1)), target=150, seed=0)
    ok &= ps_minus.e0 <= -0.2615
    parts.append(f"three-body E0 {ps_minus.e0:.8f} (need <= -0.2615)")

    ps2 = stability_probe(CoulombSystem((1.0,) * 4, (1, -1, 1, -1)), target=200, seed=42)
    ok &= ps2.e0 <= -0.51 and ps2.certified_bound
    parts.append(
        f"equal-mass four-body E0 {ps2.e0:.8f} (need <= -0.51), "
        f"certified {ps2.certified_bound} margin {ps2.margin:.4f}"
    )

    # the growth trace is monotone and each prefix is the same run at a
    # smaller budget, so checking every trace entry covers all budgets <= 200
    for name, masses in (
        ("hydrogen-antihydrogen", (M_P, 1.0, 1.0, M_P)),
        ("muonic mixture", (M_P, 206.768283, 1.0, 1.0)),
    ):
        system = CoulombSystem(masses, (1, -1, 1, -1))
        threshold = _Layout(system).threshold
        eps = certification_margin(threshold)
        _, res = svm_grow(system, target=200, seed=3)
        closest = min(res.trace) - (threshold - eps)
        ok &= closest >= 0.0
        parts.append(f"{name} stayed above certification line by {closest:.6f} at every size")

    _report(7, "solver", bool(ok), "; ".join(parts))


def test_criterion_8_global_consistency():
    rng = np.random.default_rng(2026)
    contradictions = 0
    certified = 0
    unstable = 0
    for i in range(50):
        masses = tuple(float(v) for v in 10.0 ** rng.uniform(-1.0, 3.0, size=4))
        probe = stability_probe(
            CoulombSystem(masses, (1, -1, 1, -1)), target=60, seed=i
        )
        assert probe.verdict is not None
        if probe.verdict.proven_unstable:
            unstable += 1
            if probe.certified_bound:
                contradictions += 1
        elif probe.certified_bound:
            certified += 1
    worst_ratio_dev = 0.0
    stable_labels = True
    for _ in range(50):
        m = 10.0 ** rng.uniform(-1.0, 3.0, size=4)
        c = 10.0 ** rng.uniform(-3.0, 3.0)
        v0 = classify(FourBodySystem(*m))
        v1 = classify(FourBodySystem(*(c * m)))
        stable_labels &= v0.classification is v1.classification
        worst_ratio_dev = max(worst_ratio_dev, abs(v0.ratio - v1.ratio) / v0.ratio)
    ok = contradictions == 0 and stable_labels and worst_ratio_dev <= 1e-12
    _report(
        8, "global consistency", ok,
        f"50 random systems: {unstable} proven unstable, {certified} certified bound, "
        f"{contradictions} contradictions (need 0); verdicts stable under rescaling, "
        f"worst ratio rel dev {worst_ratio_dev:.3e} (tol 1e-12)",
    )
