"""Instability analysis for four-body Coulomb systems of unit charges.

Given masses (m1, m2, m3, m4) with charges (+, -, +, -), the package
classifies the system through a closed-form criterion on Jacobi reduced
masses, verifies every inequality the criterion rests on numerically, and
cross-checks the conclusion with variational machinery (two-centre model,
screened effective potentials, and a stochastic Gaussian-basis solver).
"""

from .core import (
    FourBodySystem,
    JacobiFrame,
    Pairing,
    build_jacobi,
    jacobi_mass_bound,
    reduced_mass,
    rescale_to_canonical,
    threshold_energy,
)
from .criterion import (
    Classification,
    CriticalConstant,
    Verdict,
    classify,
    critical_mu_r_canonical,
    critical_ratio,
    solve_scalar_condition,
)
from .chain_verify import chain_coefficient, run_chain_suite
from .effpot import InteractionDecomposition, veff, veff_bound_check
from .twocenter import floor_check, two_center_ground
from .ecg_solver import (
    CoulombSystem,
    GaussianBasisElement,
    StabilityContradictionError,
    generalized_lowest,
    mass_ratio_scan,
    stability_probe,
    svm_grow,
)

__version__ = "0.1.0"

__all__ = [
    "FourBodySystem",
    "JacobiFrame",
    "Pairing",
    "build_jacobi",
    "jacobi_mass_bound",
    "reduced_mass",
    "rescale_to_canonical",
    "threshold_energy",
    "Classification",
    "CriticalConstant",
    "Verdict",
    "classify",
    "critical_mu_r_canonical",
    "critical_ratio",
    "solve_scalar_condition",
    "chain_coefficient",
    "run_chain_suite",
    "InteractionDecomposition",
    "veff",
    "veff_bound_check",
    "floor_check",
    "two_center_ground",
    "CoulombSystem",
    "GaussianBasisElement",
    "StabilityContradictionError",
    "generalized_lowest",
    "mass_ratio_scan",
    "stability_probe",
    "svm_grow",
    "__version__",
]
