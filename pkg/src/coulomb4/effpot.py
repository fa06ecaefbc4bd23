"""Effective potentials from averaging the cross-pair Coulomb terms.

With the tight pair frozen in its ground state (density rho(x) = (8/pi)
exp(-4|x|) after canonical rescaling), the four cross interactions between
the pairs reduce to a screened potential in the remaining coordinates
(y, R).  Only the attractive part of that average matters for lower
bounds, so the module exposes

  * the signed cross-interaction W(x, y, R) and its split W1 + W2 into the
    two three-distance groups,
  * veff: the density average of the negative part, either of the full W
    (adaptive cubature) or of one split group (closed-form angular
    reduction plus a 1-d radial quadrature),
  * envelope checks against the 3/16 / distance^2 bounds,
  * a Rayleigh-quotient probe of the screened two-body operator on
    explicit trial states.

Distances are validated against direct particle-position reconstruction in
pair_distance_oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .chain_verify import chain_coefficient, pair_ground_state
from .core import FourBodySystem, JacobiFrame, build_jacobi
from .cubature import QuadratureError, negative_part_average, orthonormal_basis

__all__ = [
    "GroundPairDensity",
    "InteractionDecomposition",
    "VeffResult",
    "EnvelopeCheck",
    "QuadratureError",
    "negative_part",
    "pair_distance_oracle",
    "veff",
    "veff_bound_check",
    "stability_functional_check",
    "StabilityTrial",
    "TrialQuotient",
]


def negative_part(values: np.ndarray) -> np.ndarray:
    """max(0, -v), elementwise; the attractive content of a signed potential."""
    return np.maximum(0.0, -np.asarray(values, dtype=float))


@dataclass(frozen=True)
class GroundPairDensity:
    """Probability density of the rescaled tight-pair ground state.

    |phi(x)|^2 = (8/pi) exp(-4|x|); radial law r^2 exp(-4r) up to
    normalisation, i.e. a Gamma(3, 1/4) radius.
    """

    def __call__(self, r):
        return pair_ground_state(r) ** 2

    def sample_radii(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.gamma(shape=3.0, scale=0.25, size=n)

    def sample_points(self, rng: np.random.Generator, n: int) -> np.ndarray:
        r = self.sample_radii(rng, n)
        u = rng.uniform(-1.0, 1.0, n)
        phi = rng.uniform(0.0, 2.0 * math.pi, n)
        s = np.sqrt(1.0 - u * u)
        return np.column_stack([r * s * np.cos(phi), r * s * np.sin(phi), r * u])

    def norm_residual(self) -> float:
        val, _ = quad(lambda r: 4.0 * math.pi * r * r * self(r), 0.0, 40.0)
        return val - 1.0


def _norms(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(v, dtype=float) ** 2, axis=-1))


@dataclass(frozen=True)
class InteractionDecomposition:
    """Cross-pair Coulomb terms for internal weights a (tight pair) and b.

    Particle positions relative to the pair centres are -a x, (1-a) x for
    the first pair and -b y, (1-b) y for the second; R joins the centres.
    The four cross distances then are

        d13 = |R + a x - b y|        (+ charge product)
        d14 = |R + a x + (1-b) y|    (-)
        d23 = |R - (1-a) x - b y|    (-)
        d24 = |R - (1-a) x + (1-b) y|(+)

    W = sum of signed terms; W1 groups the pair {13, 14} sharing the
    centre c = R + (1-b) y... see w1/w2 for the exact grouping used by the
    split bounds: W1 collects the two terms singular on the c-sphere
    family and W2 the remaining two.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (0.0 < self.a < 1.0) or not (0.0 < self.b < 1.0):
            raise ValueError("internal mass weights must lie strictly inside (0, 1)")

    @classmethod
    def from_frame(cls, frame: JacobiFrame) -> "InteractionDecomposition":
        return cls(a=frame.a, b=frame.b)

    # -- pair separations ------------------------------------------------
    def distances(self, x, y, R) -> dict:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        R = np.asarray(R, dtype=float)
        a, b = self.a, self.b
        return {
            (1, 2): _norms(x),
            (3, 4): _norms(y),
            (1, 3): _norms(R + a * x - b * y),
            (1, 4): _norms(R + a * x + (1.0 - b) * y),
            (2, 3): _norms(R - (1.0 - a) * x - b * y),
            (2, 4): _norms(R - (1.0 - a) * x + (1.0 - b) * y),
        }

    def w(self, x, y, R) -> np.ndarray:
        d = self.distances(x, y, R)
        return 1.0 / d[(1, 3)] + 1.0 / d[(2, 4)] - 1.0 / d[(1, 4)] - 1.0 / d[(2, 3)]

    def w1(self, x, y, R) -> np.ndarray:
        """Terms with y-offset (1-b): repulsive 24 against attractive 14."""
        d = self.distances(x, y, R)
        return 1.0 / d[(2, 4)] - 1.0 / d[(1, 4)]

    def w2(self, x, y, R) -> np.ndarray:
        """Terms with y-offset -b: repulsive 13 against attractive 23."""
        d = self.distances(x, y, R)
        return 1.0 / d[(1, 3)] - 1.0 / d[(2, 3)]

    # -- geometric anchors ----------------------------------------------
    def centre_first(self, y, R) -> np.ndarray:
        """c = R + (1-b) y, the common offset of the W1 group."""
        return np.asarray(R, dtype=float) + (1.0 - self.b) * np.asarray(y, dtype=float)

    def centre_second(self, y, R) -> np.ndarray:
        """d = R - b y, the common offset of the W2 group."""
        return np.asarray(R, dtype=float) - self.b * np.asarray(y, dtype=float)


def pair_distance_oracle(masses: Sequence[float], x, y, R) -> dict:
    """Six separations via explicit particle positions (centre of mass at 0).

    Independent of the formula route in InteractionDecomposition.distances:
    reconstructs r_i from the Jacobi vectors and takes norms.
    """
    m1, m2, m3, m4 = (float(m) for m in masses)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    R = np.asarray(R, dtype=float)
    m12 = m1 + m2
    m34 = m3 + m4
    total = m12 + m34
    a = m2 / m12
    b = m4 / m34
    c12 = -(m34 / total) * R
    c34 = (m12 / total) * R
    r1 = c12 - a * x
    r2 = c12 + (1.0 - a) * x
    r3 = c34 - b * y
    r4 = c34 + (1.0 - b) * y
    pos = {1: r1, 2: r2, 3: r3, 4: r4}
    out = {}
    for i in (1, 2, 3):
        for j in range(i + 1, 5):
            out[(i, j)] = _norms(pos[i] - pos[j])
    return out


# ---------------------------------------------------------------------------
# Screened potential of one split group: closed angular reduction.
#
# For the W1 group both distances share the offset c = R + (1-b) y:
#   |c + a x| (attractive 14 after sign bookkeeping) and |c - (1-a) x|.
# Wait: group members are d24 = |c - (1-a) x| (repulsive) and
# d14 = |c + a x| (attractive).  Averaging -(W1) over the isotropic density
# and keeping the positive part gives, with c = |c|,
#
#   V1(c, a) = 16 Int_0^inf r^2 e^{-4 r} I(r, c, a) dr,
#
# where the angular integral I has the closed form coded below: the
# integrand max(0, 1/|c + a r n| - 1/|c - (1-a) r n|) is supported on the
# polar cap mu <= mu*(r) = clip(r (1 - 2a) / (2c), -1, 1) and integrates to
# antiderivatives of the two inverse distances.  V2(d, b-group) equals
# V1(d, 1-a) by the x -> -x reflection.
# ---------------------------------------------------------------------------


def _split_angular(r: np.ndarray, c: float, a: float) -> np.ndarray:
    """Integral over directions of max(0, 1/|c + a r n| - 1/|c - (1-a) r n|).

    Normalised so that multiplying by r^2 e^{-4 r} * 16 and integrating in r
    yields the screened attraction; returns 0 where the cap is empty.
    """
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    pos = r > 0.0
    rp = r[pos]
    mu_bar = rp * (1.0 - 2.0 * a) / (2.0 * c)
    mu_star = np.clip(mu_bar, -1.0, 1.0)
    active = mu_bar > -1.0
    rp = rp[active]
    ms = mu_star[active]
    s1_hi = np.sqrt(c * c + (a * rp) ** 2 + 2.0 * a * c * rp * ms)
    s1_lo = np.abs(c - a * rp)
    s2_hi = c + (1.0 - a) * rp
    s2_lo = np.sqrt(c * c + ((1.0 - a) * rp) ** 2 - 2.0 * (1.0 - a) * c * rp * ms)
    vals = (s1_hi - s1_lo) / (a * c * rp) - (s2_hi - s2_lo) / ((1.0 - a) * c * rp)
    tmp = np.zeros(pos.sum())
    tmp[active] = vals
    out[pos] = tmp
    return out


def _split_value(c: float, a: float, rel_tol: float) -> tuple[float, float, int]:
    """V1(c, a) by 1-d quadrature of the reduced radial integrand."""
    if c < 1e-12:
        gap = 1.0 / a - 1.0 / (1.0 - a)
        return (2.0 * gap if gap > 0.0 else 0.0), 0.0, 0
    scale = 3.0 / (16.0 * c * c)

    def f(r):
        return 16.0 * r * r * math.exp(-4.0 * r) * float(_split_angular(np.array([r]), c, a)[0])

    r_max = max(14.0, c / a + 4.0, c / (1.0 - a) + 4.0)
    r_max = min(r_max, 60.0)
    breaks = sorted(
        {
            p
            for p in (c / a, c / (1.0 - a), 2.0 * c / abs(1.0 - 2.0 * a) if abs(1.0 - 2.0 * a) > 1e-12 else None)
            if p is not None and 0.0 < p < r_max
        }
    )
    val, err = quad(
        f,
        0.0,
        r_max,
        points=breaks or None,
        limit=300,
        epsabs=max(0.05 * rel_tol * scale, 1e-15),
        epsrel=0.2 * rel_tol,
    )
    return val, err, 0


@dataclass(frozen=True)
class VeffResult:
    value: float
    error: float
    n_evals: int
    which: str


def veff(
    decomp: InteractionDecomposition,
    y,
    R,
    which: str = "total",
    rel_tol: float = 1e-6,
    max_evals: int = 40_000_000,
) -> VeffResult:
    """Average of the attractive part of W (or one split group) over the
    tight-pair ground density, as a function of (y, R).

    which: "total" uses adaptive 3-d cubature of max(0, -W); "w1" / "w2"
    use the exact angular reduction of the corresponding group.  Raises
    QuadratureError (carrying the running estimate) if the evaluation
    budget is exhausted before the tolerance is met.
    """
    y = np.asarray(y, dtype=float)
    R = np.asarray(R, dtype=float)
    key = which.lower()
    if key in ("w1", "1"):
        c = float(_norms(decomp.centre_first(y, R)))
        val, err, _ = _split_value(c, decomp.a, rel_tol)
        return VeffResult(val, err, 0, "w1")
    if key in ("w2", "2"):
        d = float(_norms(decomp.centre_second(y, R)))
        val, err, _ = _split_value(d, 1.0 - decomp.a, rel_tol)
        return VeffResult(val, err, 0, "w2")
    if key != "total":
        raise ValueError(f"unknown veff selector: {which!r}")

    a = decomp.a
    c_vec = decomp.centre_first(y, R)
    d_vec = decomp.centre_second(y, R)
    # attractive singular x-points: 1/|c + a x| at -c/a, 1/|d - (1-a) x| at d/(1-a)
    sing = [-c_vec / a, d_vec / (1.0 - a)]
    # repulsive kink radii (W crosses 0 nearby): centres of the + terms
    extras = [float(_norms(d_vec)) / a, float(_norms(c_vec)) / (1.0 - a)]
    radii = [float(_norms(p)) for p in sing]
    r_max = min(40.0, max(14.0, 1.2 * max(radii) + 2.0))
    extras = [e for e in extras if e < r_max]

    def signed_and_weight(pts: np.ndarray, rr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        w = decomp.w(pts, y, R)
        rho = (8.0 / math.pi) * np.exp(-4.0 * rr)
        return w, rr * rr * rho

    res = negative_part_average(
        signed_and_weight,
        r_max,
        singular_points=sing,
        extra_radii=extras,
        rel_tol=rel_tol,
        abs_floor=1e-14,
        max_evals=max_evals,
    )
    return VeffResult(res.value, res.error, res.n_evals, "total")


@dataclass(frozen=True)
class EnvelopeCheck:
    value_w1: float
    bound_w1: float
    value_w2: float
    bound_w2: float

    @property
    def residual_w1(self) -> float:
        return self.bound_w1 - self.value_w1

    @property
    def residual_w2(self) -> float:
        return self.bound_w2 - self.value_w2

    @property
    def passed(self) -> bool:
        return self.residual_w1 >= -1e-9 and self.residual_w2 >= -1e-9


def veff_bound_check(decomp: InteractionDecomposition, y, R, rel_tol: float = 1e-8) -> EnvelopeCheck:
    """Compare each split average against its envelope (3/16) / offset^2."""
    c = float(_norms(decomp.centre_first(y, R)))
    d = float(_norms(decomp.centre_second(y, R)))
    if c < 1e-12 or d < 1e-12:
        raise ValueError("envelope bound is singular at zero pair-centre offset")
    v1, _, _ = _split_value(c, decomp.a, rel_tol)
    v2, _, _ = _split_value(d, 1.0 - decomp.a, rel_tol)
    return EnvelopeCheck(v1, 3.0 / (16.0 * c * c), v2, 3.0 / (16.0 * d * d))


# ---------------------------------------------------------------------------
# Rayleigh-quotient probe of  p^2 / (2 mu_R) - C(mu_R) Veff(y, .)
# on explicit, documented trial states.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityTrial:
    """Trial wavefunction for the screened relative-motion operator.

    kind "gaussian": chi(R) = exp(-|R - off yhat|^2 / (2 scale^2)),
    kinetic quotient 3 / (4 mu scale^2).
    kind "exponential": chi(R) = exp(-|R - off yhat| / scale),
    kinetic quotient 1 / (2 mu scale^2).
    """

    kind: str
    offset: float
    scale: float

    def __post_init__(self):
        if self.kind not in ("gaussian", "exponential"):
            raise ValueError(f"unknown trial kind: {self.kind!r}")
        if self.scale <= 0.0:
            raise ValueError("trial scale must be positive")

    def kinetic_quotient(self, mu_r: float) -> float:
        if self.kind == "gaussian":
            return 3.0 / (4.0 * mu_r * self.scale * self.scale)
        return 1.0 / (2.0 * mu_r * self.scale * self.scale)

    def weight(self, dist: np.ndarray) -> np.ndarray:
        if self.kind == "gaussian":
            return np.exp(-(dist * dist) / (self.scale * self.scale))
        return np.exp(-2.0 * dist / self.scale)


@dataclass(frozen=True)
class TrialQuotient:
    trial: StabilityTrial
    kinetic: float
    potential: float
    quotient: float


def stability_functional_check(
    decomp: InteractionDecomposition,
    mu_r: float,
    y,
    trials: Sequence[StabilityTrial],
    potential: str = "split",
    rel_tol: float = 1e-6,
    n_axial: int = 16,
    n_radial: int = 10,
) -> list[TrialQuotient]:
    """Rayleigh quotients of p^2/(2 mu_R) - C(mu_R) Veff on the given trials.

    Veff is axisymmetric about the y direction, so the expectation reduces
    to a 2-d cylindrical quadrature.  potential="split" replaces Veff by
    the group sum V1 + V2, which can only overstate the attraction
    (negative parts are subadditive): a nonnegative quotient then still
    certifies that the trial fails to bind.  potential="total" uses the
    full adaptive Veff at rel_tol (much slower per node).
    """
    y = np.asarray(y, dtype=float)
    coeff = chain_coefficient(mu_r)
    if potential not in ("split", "total"):
        raise ValueError(f"unknown potential selector: {potential!r}")
    if _norms(y) < 1e-14:
        axis = np.array([0.0, 0.0, 1.0])
    else:
        axis = y / _norms(y)
    e1, _, e3 = orthonormal_basis(axis)

    gl_z, gw_z = np.polynomial.legendre.leggauss(n_axial)
    gl_r, gw_r = np.polynomial.legendre.leggauss(n_radial)

    out = []
    for trial in trials:
        span = 7.0 * trial.scale if trial.kind == "gaussian" else 9.0 * trial.scale
        z_nodes = trial.offset + span * gl_z
        z_w = span * gw_z
        rho_nodes = 0.5 * span * (gl_r + 1.0)
        rho_w = 0.5 * span * gw_r

        num = 0.0
        den = 0.0
        for z, wz in zip(z_nodes, z_w):
            for rho, wr in zip(rho_nodes, rho_w):
                R_node = z * e3 + rho * e1
                dist = math.hypot(z - trial.offset, rho)
                wgt = float(trial.weight(np.array([dist]))[0]) * rho * wz * wr
                if wgt < 1e-18:
                    continue
                if potential == "split":
                    v = (
                        veff(decomp, y, R_node, which="w1", rel_tol=rel_tol).value
                        + veff(decomp, y, R_node, which="w2", rel_tol=rel_tol).value
                    )
                else:
                    v = veff(decomp, y, R_node, which="total", rel_tol=max(rel_tol, 1e-4)).value
                num += wgt * v
                den += wgt
        mean_v = num / den
        kin = trial.kinetic_quotient(mu_r)
        out.append(TrialQuotient(trial, kin, mean_v, kin - coeff * mean_v))
    return out
