"""Stochastic variational growth on the positronium molecule.

Correlated-Gaussian bases give strict upper bounds on ground energies, so
a value below the dissociation threshold certifies binding.  The converse
never holds: no variational number can certify non-binding, which is why
the analytic criterion matters.  This demo grows a basis for the
equal-mass four-body system, prints the energy trace on the way down
through the threshold, and ends with the certified verdict.
"""

from coulomb4 import CoulombSystem, stability_probe, svm_grow

PS2 = CoulombSystem((1.0, 1.0, 1.0, 1.0), (1, -1, 1, -1))


def main():
    target = 150
    print(f"system: masses {PS2.masses}, charges {PS2.charges}")
    elements, result = svm_grow(PS2, target=target, seed=42)
    print(f"threshold (two separated atoms): {result.threshold}")
    print(f"\n{'size':>6s} {'E0':>14s}")
    milestones = {1, 2, 5, 10, 20, 40, 80, target}
    for size, energy in enumerate(result.trace, start=1):
        if size in milestones:
            marker = "  <- below threshold" if energy < result.threshold else ""
            print(f"{size:6d} {energy:14.9f}{marker}")

    probe = stability_probe(PS2, target=target, seed=42)
    print(f"\nfinal upper bound: {probe.e0:.9f}")
    print(f"binding margin:    {probe.margin:.9f} (certification needs > {probe.epsilon:.1e})")
    print(f"certified bound state: {probe.certified_bound}")
    print(f"criterion verdict:     {probe.verdict.classification.value}")
    print("\nA certified bound state plus a ProvenUnstable verdict would be a")
    print("hard contradiction; the probe raises an error if that ever happens.")


if __name__ == "__main__":
    main()
