"""Jacobi mass frames for four-body unit-charge Coulomb systems.

A system holds four point particles with charges (+1, -1, +1, -1) in atomic
units (hbar = 1, |q| = 1).  The frame built here groups them into two neutral
pairs, orders the pairs by reduced mass, and exposes the three Jacobi reduced
masses:

    mu_x  -- heavy pair's internal reduced mass
    mu_y  -- light pair's internal reduced mass
    mu_R  -- reduced mass of the pair--pair relative coordinate

together with the intra-pair center-of-mass weights a, b.  All stability
classification downstream keys off mu_R / mu_x, which is invariant under an
overall mass rescaling.

The pairing is chosen to minimize the two-atom dissociation threshold
-(mu_x + mu_y)/2, i.e. to maximize mu_x + mu_y; this is the decomposition
against which binding must be certified.

A sharp lower bound ties the Jacobi masses together:

    mu_R >= 4 * mu_x * mu_y / (mu_x + mu_y)

with equality iff each pair consists of two equal masses.  (It follows from
mu_pair <= M_pair / 4 and the monotonicity of u*v/(u+v) in both arguments.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence


class Pairing(Enum):
    """Neutral pair assignment: A = (1,2)+(3,4), B = (1,4)+(3,2)."""

    A = "A"
    B = "B"


def reduced_mass(m: float, mp: float) -> float:
    """Two-body reduced mass m*mp/(m+mp).

    Raises ValueError for nonpositive or non-finite input.
    """
    for v in (m, mp):
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"masses must be positive and finite, got {v!r}")
    return m * mp / (m + mp)


@dataclass(frozen=True)
class FourBodySystem:
    """Four unit charges (+1, -1, +1, -1) with positive masses.

    Masses are in whatever unit the caller chooses (typically electron
    masses); every energy produced downstream scales linearly with that
    unit, and classification is unit-free.
    """

    m1: float
    m2: float
    m3: float
    m4: float
    labels: tuple[str, str, str, str] | None = None

    CHARGES = (1, -1, 1, -1)

    def __post_init__(self) -> None:
        for v in self.masses:
            if not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                raise ValueError(f"masses must be positive and finite, got {v!r}")

    @property
    def masses(self) -> tuple[float, float, float, float]:
        return (self.m1, self.m2, self.m3, self.m4)

    @classmethod
    def from_strings(cls, masses: Sequence[str], labels: Sequence[str] | None = None) -> "FourBodySystem":
        """Build from decimal strings (binary64 keeps ~15.9 significant digits)."""
        if len(masses) != 4:
            raise ValueError(f"expected 4 masses, got {len(masses)}")
        vals = []
        for s in masses:
            try:
                vals.append(float(s))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"unparseable mass {s!r}") from exc
        lab = tuple(labels) if labels is not None else None
        if lab is not None and len(lab) != 4:
            raise ValueError("labels, when given, must have length 4")
        return cls(*vals, labels=lab)  # type: ignore[arg-type]

    def rescaled(self, factor: float) -> "FourBodySystem":
        if not math.isfinite(factor) or factor <= 0:
            raise ValueError(f"scale factor must be positive and finite, got {factor!r}")
        return FourBodySystem(
            self.m1 * factor, self.m2 * factor, self.m3 * factor, self.m4 * factor, self.labels
        )


@dataclass(frozen=True)
class JacobiFrame:
    """Ordered two-pair Jacobi frame of a four-body system.

    masses  -- pair-ordered masses (m1', m2', m3', m4'): slots 1,2 are the
               heavy (mu_x) pair with the positive charge first, slots 3,4
               the light (mu_y) pair likewise.
    order   -- original 1-based particle index occupying each ordered slot.
    a, b    -- intra-pair weights m2'/(m1'+m2') and m4'/(m3'+m4').
    scale   -- cumulative mass rescaling applied relative to the input system.
    """

    mu_x: float
    mu_y: float
    mu_R: float
    a: float
    b: float
    pairing: Pairing
    masses: tuple[float, float, float, float]
    order: tuple[int, int, int, int]
    scale: float = 1.0

    @property
    def mass_ratio(self) -> float:
        """mu_R / mu_x, the scale-invariant classification input."""
        return self.mu_R / self.mu_x

    @property
    def canonical_mu_r(self) -> float:
        """mu_R in the canonical unit system where mu_x = 2."""
        return 2.0 * self.mu_R / self.mu_x


def build_jacobi(system: FourBodySystem) -> JacobiFrame:
    """Group the four charges into two neutral pairs and order them.

    Of the two charge-neutral pairings, the one with the larger mu_1 + mu_2
    is selected (it has the lower dissociation threshold -(mu_1 + mu_2)/2);
    ties resolve to pairing A.  Pairs are then ordered so mu_x >= mu_y.
    """
    m = system.masses
    # (positive index, negative index) per pair, 1-based
    candidates = {
        Pairing.A: ((1, 2), (3, 4)),
        Pairing.B: ((1, 4), (3, 2)),
    }

    def pair_sum(pairs):
        (p1, n1), (p2, n2) = pairs
        return reduced_mass(m[p1 - 1], m[n1 - 1]) + reduced_mass(m[p2 - 1], m[n2 - 1])

    pairing = Pairing.A
    if pair_sum(candidates[Pairing.B]) > pair_sum(candidates[Pairing.A]):
        pairing = Pairing.B

    (p1, n1), (p2, n2) = candidates[pairing]
    mu1 = reduced_mass(m[p1 - 1], m[n1 - 1])
    mu2 = reduced_mass(m[p2 - 1], m[n2 - 1])
    if mu2 > mu1:
        (p1, n1), (p2, n2) = (p2, n2), (p1, n1)
        mu1, mu2 = mu2, mu1

    order = (p1, n1, p2, n2)
    om = tuple(m[i - 1] for i in order)
    m12 = om[0] + om[1]
    m34 = om[2] + om[3]
    return JacobiFrame(
        mu_x=mu1,
        mu_y=mu2,
        mu_R=m12 * m34 / (m12 + m34),
        a=om[1] / m12,
        b=om[3] / m34,
        pairing=pairing,
        masses=om,  # type: ignore[arg-type]
        order=order,
        scale=1.0,
    )


def rescale_to_canonical(frame: JacobiFrame) -> JacobiFrame:
    """Rescale all masses so the heavy pair's reduced mass becomes 2.

    Energies scale by the same factor; the mass ratio mu_R/mu_x and the
    weights a, b are untouched.
    """
    c = 2.0 / frame.mu_x
    return JacobiFrame(
        mu_x=2.0,
        mu_y=frame.mu_y * c,
        mu_R=frame.mu_R * c,
        a=frame.a,
        b=frame.b,
        pairing=frame.pairing,
        masses=tuple(v * c for v in frame.masses),  # type: ignore[arg-type]
        order=frame.order,
        scale=frame.scale * c,
    )


def threshold_energy(frame: JacobiFrame, canonical: bool = False) -> float:
    """Lowest two-atom dissociation threshold of the frame's pairing.

    Each neutral pair with reduced mass mu binds at -mu/2 (ground state of a
    unit-charge two-body problem), so the threshold is -(mu_x + mu_y)/2.  In
    canonical units (mu_x = 2) this reads -1 - mu_y_canonical/2.
    """
    if canonical:
        return -1.0 - frame.mu_y / frame.mu_x
    return -(frame.mu_x + frame.mu_y) / 2.0


def jacobi_mass_bound(mu_x: float, mu_y: float) -> float:
    """Sharp lower bound on mu_R given the two pair reduced masses."""
    return 4.0 * mu_x * mu_y / (mu_x + mu_y)
