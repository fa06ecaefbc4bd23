"""Closed-form instability classification for four-body unit-charge systems.

A system whose ordered Jacobi masses satisfy

    mu_R <= (13 - 2*sqrt(22))/54 * mu_x

supports no bound state below or at its lowest two-atom dissociation
threshold: the verdict is PROVEN_UNSTABLE (the boundary is included).  The
constant is the exact root of the scalar condition

    3 * mu_R * (1 + 1/(sqrt(3/(8*mu_R)) - 1)) <= 1

in canonical units (mu_x = 2): solving for equality gives
mu_R = (13 - 2*sqrt(22))/27, i.e. the mass ratio mu_R/mu_x above.  Systems on
the other side of the constant are INDETERMINATE -- nothing is claimed about
them (many, like the bipositronium mass point, are in fact bound).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .chain_verify import COEFFICIENT_DOMAIN_SUP, chain_coefficient
from .core import FourBodySystem, JacobiFrame, build_jacobi


def critical_ratio() -> float:
    """Exact critical mass ratio mu_R/mu_x = (13 - 2*sqrt(22))/54."""
    return (13.0 - 2.0 * math.sqrt(22.0)) / 54.0


def critical_mu_r_canonical() -> float:
    """Critical mu_R in canonical units (mu_x = 2): twice the ratio."""
    return (13.0 - 2.0 * math.sqrt(22.0)) / 27.0


@dataclass(frozen=True)
class CriticalConstant:
    """The criterion constant in both normalizations."""

    ratio: float
    canonical_mu_r: float

    @classmethod
    def exact(cls) -> "CriticalConstant":
        return cls(ratio=critical_ratio(), canonical_mu_r=critical_mu_r_canonical())


class Classification(Enum):
    PROVEN_UNSTABLE = "ProvenUnstable"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Verdict:
    """Classification of one system plus the numbers that produced it."""

    classification: Classification
    ratio: float
    critical: float
    margin: float  # critical - ratio; nonnegative iff proven unstable
    frame: JacobiFrame

    @property
    def proven_unstable(self) -> bool:
        return self.classification is Classification.PROVEN_UNSTABLE


def solve_scalar_condition(mu_r_canonical: float) -> bool:
    """Evaluate 3*mu_R*C(mu_R) <= 1 for canonical mu_R in (0, 3/8).

    This is the raw scalar form of the criterion; it must agree with the
    closed-form constant used by classify().  Outside (0, 3/8) the growth
    coefficient is undefined and a ValueError propagates.
    """
    return 3.0 * mu_r_canonical * chain_coefficient(mu_r_canonical) <= 1.0


def classify(system: FourBodySystem) -> Verdict:
    """Classify a four-body system by its Jacobi mass ratio.

    The comparison is inclusive: a system exactly on the critical ratio is
    proven unstable.
    """
    frame = build_jacobi(system)
    ratio = frame.mass_ratio
    crit = critical_ratio()
    cls = Classification.PROVEN_UNSTABLE if ratio <= crit else Classification.INDETERMINATE
    return Verdict(classification=cls, ratio=ratio, critical=crit, margin=crit - ratio, frame=frame)
