"""Screened cross-pair potential: distances, splits, averages, envelopes."""

import math

import numpy as np
import pytest

from coulomb4.cubature import QuadratureError
from coulomb4.effpot import (
    GroundPairDensity,
    InteractionDecomposition,
    StabilityTrial,
    negative_part,
    pair_distance_oracle,
    stability_functional_check,
    veff,
    veff_bound_check,
)
from coulomb4.chain_verify import chain_coefficient

PAIRS = [(1, 2), (3, 4), (1, 3), (1, 4), (2, 3), (2, 4)]


def _random_decomp(rng):
    return InteractionDecomposition(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))


# -- geometry ---------------------------------------------------------------


def test_distances_match_position_reconstruction():
    rng = np.random.default_rng(123)
    for _ in range(10_000):
        m = 10.0 ** rng.uniform(-1.5, 3.0, size=4)
        decomp = InteractionDecomposition(m[1] / (m[0] + m[1]), m[3] / (m[2] + m[3]))
        x, y, R = rng.normal(0.0, 2.0, size=(3, 3))
        got = decomp.distances(x, y, R)
        want = pair_distance_oracle(m, x, y, R)
        for pair in PAIRS:
            assert got[pair] == pytest.approx(want[pair], rel=1e-12, abs=1e-15)


def test_collapsed_pairs_geometry():
    decomp = InteractionDecomposition(0.5, 0.5)
    d = decomp.distances(np.zeros(3), np.zeros(3), np.array([0.0, 0.0, 1.0]))
    for pair in ((1, 3), (1, 4), (2, 3), (2, 4)):
        assert d[pair] == pytest.approx(1.0, rel=1e-15)
    assert d[(1, 2)] == 0.0 and d[(3, 4)] == 0.0
    # both pairs sitting on top of each other: the cross terms cancel exactly
    w = decomp.w(np.zeros(3), np.zeros(3), np.array([0.0, 0.0, 1.0]))
    assert abs(float(w)) <= 1e-15


def test_symmetric_configuration_pairs_up():
    decomp = InteractionDecomposition(0.5, 0.5)
    x = np.array([0.3, -0.2, 0.7])
    d = decomp.distances(x, x, np.zeros(3))
    assert d[(1, 4)] == pytest.approx(d[(2, 3)], rel=1e-15)
    assert d[(1, 3)] == pytest.approx(d[(2, 4)], rel=1e-15)


def test_decomposition_rejects_boundary_weights():
    for a, b in ((0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0), (-0.1, 0.5)):
        with pytest.raises(ValueError):
            InteractionDecomposition(a, b)


# -- split bookkeeping --------------------------------------------------------


def test_negative_part_examples():
    out = negative_part(np.array([1.0, -2.0, 0.0, -1e-9]))
    assert out.tolist() == [0.0, 2.0, 0.0, 1e-9]


def test_split_groups_sum_to_full_interaction():
    rng = np.random.default_rng(8)
    for _ in range(500):
        decomp = _random_decomp(rng)
        x, y, R = rng.normal(0.0, 1.5, size=(3, 3))
        w = float(decomp.w(x, y, R))
        w1 = float(decomp.w1(x, y, R))
        w2 = float(decomp.w2(x, y, R))
        assert w == pytest.approx(w1 + w2, rel=1e-12, abs=1e-13)


def test_positive_negative_split_identities():
    rng = np.random.default_rng(9)
    decomp = InteractionDecomposition(0.4, 0.7)
    pts = rng.normal(0.0, 2.0, size=(4000, 3))
    y = np.array([0.1, 0.0, 0.9])
    R = np.array([0.0, 0.4, 1.1])
    w = decomp.w(pts, y, R)
    wm = negative_part(w)
    wp = w + wm
    assert np.all(wp >= 0.0) and np.all(wm >= 0.0)
    assert np.max(np.abs(wp - wm - w)) <= 1e-14
    assert np.max(np.abs(wp * wm)) == 0.0


def test_pointwise_subadditivity_of_negative_parts():
    rng = np.random.default_rng(10)
    for _ in range(200):
        decomp = _random_decomp(rng)
        pts = rng.normal(0.0, 2.0, size=(200, 3))
        y, R = rng.normal(0.0, 1.5, size=(2, 3))
        total = negative_part(decomp.w(pts, y, R))
        split = negative_part(decomp.w1(pts, y, R)) + negative_part(decomp.w2(pts, y, R))
        assert np.all(total <= split + 1e-13)


# -- ground-pair density -------------------------------------------------------


def test_density_is_normalized():
    assert abs(GroundPairDensity().norm_residual()) <= 1e-8


def test_density_sampler_matches_radial_law():
    rng = np.random.default_rng(77)
    r = GroundPairDensity().sample_radii(rng, 200_000)
    # Gamma(3, 1/4): mean 3/4, variance 3/16
    assert np.mean(r) == pytest.approx(0.75, abs=3.0 * math.sqrt(3.0 / 16.0 / 200_000))
    pts = GroundPairDensity().sample_points(rng, 50_000)
    assert np.linalg.norm(np.mean(pts, axis=0)) <= 0.02


# -- averaged potentials --------------------------------------------------------


def test_split_average_matches_monte_carlo():
    decomp = InteractionDecomposition(0.5, 0.5)
    y = np.array([0.0, 0.0, 1.0])
    R = np.array([0.0, 0.0, 2.0])
    quadrature = veff(decomp, y, R, which="w1", rel_tol=1e-8)
    rng = np.random.default_rng(11)
    n = 20_000_000
    pts = GroundPairDensity().sample_points(rng, n)
    vals = negative_part(decomp.w1(pts, y, R))
    mc = float(np.mean(vals))
    se = float(np.std(vals) / math.sqrt(n))
    assert abs(quadrature.value - mc) <= 3.0 * se
    assert se < 1e-4  # the comparison has actual resolving power


def test_split_average_reflection_symmetry():
    # the two groups mirror into each other: the first group of (a, b) at
    # offset R + (1-b) y equals the second group of (1-a, b) at R' = R + y,
    # which shares that offset
    rng = np.random.default_rng(14)
    for _ in range(20):
        a, b = rng.uniform(0.1, 0.9, size=2)
        y, R = rng.normal(0.0, 1.2, size=(2, 3))
        v1 = veff(InteractionDecomposition(a, b), y, R, which="w1", rel_tol=1e-9)
        v2 = veff(InteractionDecomposition(1.0 - a, b), y, R + y, which="w2", rel_tol=1e-9)
        assert v1.value == pytest.approx(v2.value, rel=1e-8, abs=1e-12)


def test_total_average_within_split_sum():
    rng = np.random.default_rng(12)
    checked = 0
    for _ in range(1000):
        decomp = _random_decomp(rng)
        y = rng.normal(0.0, 1.0, size=3)
        R = rng.normal(0.0, 1.0, size=3)
        y *= 10.0 ** rng.uniform(-0.3, 0.7) / max(np.linalg.norm(y), 1e-12)
        R *= 10.0 ** rng.uniform(-0.3, 0.7) / max(np.linalg.norm(R), 1e-12)
        total = veff(decomp, y, R, which="total", rel_tol=0.05)
        v1 = veff(decomp, y, R, which="w1", rel_tol=1e-8)
        v2 = veff(decomp, y, R, which="w2", rel_tol=1e-8)
        assert total.value <= v1.value + v2.value + 3.0 * total.error
        assert total.value >= -1e-12
        checked += 1
    assert checked == 1000


def test_unknown_selector_rejected():
    with pytest.raises(ValueError):
        veff(InteractionDecomposition(0.5, 0.5), np.zeros(3), np.ones(3), which="w3")


def test_total_average_budget_exhaustion():
    decomp = InteractionDecomposition(0.5, 0.5)
    with pytest.raises(QuadratureError) as exc:
        veff(decomp, np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, 2.0]),
             which="total", rel_tol=1e-12, max_evals=2000)
    assert exc.value.n_evals >= 2000
    assert math.isfinite(exc.value.value)


# -- envelopes -------------------------------------------------------------------


def _stratified_geometries(rng, n):
    out = []
    for i in range(n):
        stratum = i % 5
        if stratum == 0:  # generic
            a, b = rng.uniform(0.1, 0.9, size=2)
            y, R = rng.normal(0.0, 1.0, size=(2, 3))
        elif stratum == 1:  # collinear y and R
            a, b = rng.uniform(0.1, 0.9, size=2)
            z = np.array([0.0, 0.0, 1.0])
            y = z * rng.uniform(0.2, 3.0)
            R = z * rng.uniform(0.2, 3.0) * rng.choice([-1.0, 1.0])
        elif stratum == 2:  # lopsided internal weights
            a, b = 0.999, 0.001
            y, R = rng.normal(0.0, 1.0, size=(2, 3))
        elif stratum == 3:  # small offsets
            a, b = rng.uniform(0.3, 0.7, size=2)
            y = rng.normal(0.0, 0.1, size=3)
            R = rng.normal(0.0, 0.1, size=3)
        else:  # far separations
            a, b = rng.uniform(0.1, 0.9, size=2)
            y = rng.normal(0.0, 0.5, size=3)
            R = rng.normal(0.0, 8.0, size=3)
        decomp = InteractionDecomposition(a, b)
        if np.linalg.norm(decomp.centre_first(y, R)) < 1e-6:
            continue
        if np.linalg.norm(decomp.centre_second(y, R)) < 1e-6:
            continue
        out.append((decomp, y, R))
    return out


def test_envelope_bounds_split_averages():
    rng = np.random.default_rng(13)
    geoms = _stratified_geometries(rng, 1000)
    assert len(geoms) > 950
    worst = math.inf
    for decomp, y, R in geoms:
        check = veff_bound_check(decomp, y, R)
        worst = min(worst, check.residual_w1, check.residual_w2)
        assert check.passed, (decomp, y, R)
    assert worst >= -1e-6


def test_envelope_bound_is_approached():
    # sup of value / bound over offsets should come close to 1
    decomp = InteractionDecomposition(0.5, 0.5)
    best = 0.0
    for c in np.geomspace(0.05, 20.0, 40):
        y = np.array([0.0, 0.0, 1e-9])
        R = np.array([0.0, 0.0, float(c)])
        check = veff_bound_check(decomp, y, R)
        best = max(best, check.value_w1 / check.bound_w1)
    assert 0.99 < best <= 1.0 + 1e-9


def test_split_average_decays_with_separation():
    decomp = InteractionDecomposition(0.5, 0.5)
    y = np.array([0.0, 0.0, 0.6])
    values = []
    for dist in (2.0, 5.0, 10.0, 20.0):
        R = np.array([0.0, 0.0, dist])
        check = veff_bound_check(decomp, y, R)
        values.append(check.value_w1)
        assert check.value_w1 <= check.bound_w1
    assert all(b < a for a, b in zip(values, values[1:]))


def test_envelope_rejects_zero_offset():
    decomp = InteractionDecomposition(0.5, 0.5)
    y = np.array([0.0, 0.0, 2.0])
    R = -0.5 * y  # centre_first exactly zero
    with pytest.raises(ValueError):
        veff_bound_check(decomp, y, R)


# -- screened relative-motion quotients -------------------------------------------


def _trial_family():
    trials = []
    for kind in ("gaussian", "exponential"):
        for offset in (0.0, 0.3, 1.0, 3.0, 10.0):
            for scale in (0.2, 0.5, 1.0, 2.5, 6.0, 15.0, 40.0, 100.0, 250.0, 600.0):
                trials.append(StabilityTrial(kind, offset, scale))
    return trials


def test_quotients_nonnegative_below_critical_mass():
    decomp = InteractionDecomposition(0.5, 0.5)
    quotients = stability_functional_check(
        decomp, 0.05, np.array([0.0, 0.0, 1.0]), _trial_family()
    )
    assert len(quotients) == 100
    worst = min(q.quotient for q in quotients)
    assert worst >= -1e-6, worst


def test_quotients_recorded_above_critical_mass():
    # above the critical mass the bound gives no sign; record, don't assert
    decomp = InteractionDecomposition(0.5, 0.5)
    trials = [StabilityTrial("gaussian", 0.0, s) for s in (0.5, 1.0, 2.0, 5.0)]
    quotients = stability_functional_check(decomp, 0.3, np.array([0.0, 0.0, 1.0]), trials)
    values = [q.quotient for q in quotients]
    assert all(math.isfinite(v) for v in values)
    print(f"relative-motion quotients at mass 0.3: min {min(values):.6f}")


def test_quotient_assembly():
    decomp = InteractionDecomposition(0.5, 0.5)
    trial = StabilityTrial("gaussian", 0.0, 2.0)
    (q,) = stability_functional_check(decomp, 0.05, np.array([0.0, 0.0, 1.0]), [trial])
    assert q.kinetic == pytest.approx(3.0 / (4.0 * 0.05 * 4.0), rel=1e-15)
    assert q.quotient == pytest.approx(
        q.kinetic - chain_coefficient(0.05) * q.potential, rel=1e-12
    )
    assert q.potential > 0.0


def test_trial_validation():
    with pytest.raises(ValueError):
        StabilityTrial("lorentzian", 0.0, 1.0)
    with pytest.raises(ValueError):
        StabilityTrial("gaussian", 0.0, 0.0)
    with pytest.raises(ValueError):
        stability_functional_check(
            InteractionDecomposition(0.5, 0.5), 0.05, np.zeros(3),
            [StabilityTrial("gaussian", 0.0, 1.0)], potential="bogus",
        )
