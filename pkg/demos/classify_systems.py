"""Classify a handful of four-body Coulomb systems.

Each system is four unit charges (+, -, +, -) described by its masses.
The classifier builds the Jacobi frame of the most strongly bound pairing,
forms the scale-invariant ratio mu_R / mu_x, and compares it against the
exact critical value (13 - 2*sqrt(22)) / 54.  At or below the critical
value the system provably has no bound state below its dissociation
threshold; above it the test is silent.
"""

from coulomb4 import FourBodySystem, classify, critical_ratio

M_P = 1836.152672   # proton, in electron masses
M_MU = 206.768283   # muon
M_D = 3670.482967   # deuteron

SYSTEMS = [
    ("hydrogen + antihydrogen", FourBodySystem(M_P, 1.0, 1.0, M_P)),
    ("deuterium + antideuterium", FourBodySystem(M_D, 1.0, 1.0, M_D)),
    ("proton, muon, positron, electron", FourBodySystem(M_P, M_MU, 1.0, 1.0)),
    ("positronium molecule", FourBodySystem(1.0, 1.0, 1.0, 1.0)),
    ("hydrogen + positronium", FourBodySystem(M_P, 1.0, 1.0, 1.0)),
    ("muonic pair", FourBodySystem(M_MU, M_MU, 1.0, 1.0)),
]


def main():
    print(f"critical ratio: {critical_ratio():.15f}\n")
    header = f"{'system':38s} {'ratio':>18s} {'margin':>12s}  verdict"
    print(header)
    print("-" * len(header))
    for name, system in SYSTEMS:
        v = classify(system)
        print(f"{name:38s} {v.ratio:18.12f} {v.margin:12.6f}  {v.classification.value}")
    print()
    print("A positive margin means the ratio sits below the critical value,")
    print("so the absence of binding is proven.  Negative margins prove")
    print("nothing either way; see the variational solver demo for the")
    print("empirical side of those cases.")


if __name__ == "__main__":
    main()
