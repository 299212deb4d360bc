#!/usr/bin/env python3
"""How long an undulator do the two resonances need?

The closed forms give the interaction length of the first photon-number
maximum for each resonance.  Their ratio has a handy logarithmic shorthand —
accurate only to a factor of order one, but it nails where the two lengths
cross as the coupling grows.

Run:  python3 demos/interaction_length_study.py
"""

import numpy as np

from qfel import FelParams, lmax_exact, lmax_ratio

N = 10_000


def main():
    print("Interaction lengths of the first photon-number maximum (L/Lg units)")
    print("=" * 71)

    print(f"\nseed ratio n0/N = 0.1, N = {N}:")
    print(f"  {'alpha':>6} {'L1 (nu=1)':>10} {'L2 (nu=2)':>10} {'L2/L1':>8} {'shorthand':>10} {'factor':>7}")
    for alpha in (0.1, 0.2, 0.3, 0.4, 0.5):
        p = FelParams(alpha=alpha, nu=1, n0=0.1 * N, N=N, context="high")
        l1 = lmax_exact(p, 1)
        l2 = lmax_exact(p, 2)
        shorthand = lmax_ratio(alpha, 0.1)
        exact = l2 / l1
        factor = max(shorthand / exact, exact / shorthand)
        print(
            f"  {alpha:6.2f} {l1:10.3f} {l2:10.3f} {exact:8.2f} {shorthand:10.2f} {factor:7.2f}"
        )

    print("\nThe shorthand keeps only the logarithm of the seed ratio, so it")
    print("misses O(1) additive terms — expect factor-of-a-few accuracy, not")
    print("percent accuracy.  What it does get right is the crossover:")

    # The shorthand ratio scales as 1/alpha, so it crosses one at a finite
    # coupling even though every quantum-regime value sits well above one.
    crossover = lmax_ratio(1.0, 0.1)
    print(f"\n  {'alpha':>6} {'shorthand L2/L1':>16}")
    for alpha in (1.0, 2.0, crossover, 3.5):
        print(f"  {alpha:6.3f} {lmax_ratio(alpha, 0.1):16.3f}")
    print(f"\n  shorthand crossover: alpha* = {crossover:.3f} at n0/N = 0.1")

    # The exact first-resonance formula cannot follow it that far: its phase
    # factor hits zero at alpha^2 (1 + 2 n0/N) = 8, and the library refuses
    # the extrapolation rather than report a negative length.
    breakdown = np.sqrt(8.0 / 1.2)
    print(f"  first-resonance formula domain edge: alpha = {breakdown:.3f}")
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = FelParams(alpha=3.0, nu=1, n0=0.1 * N, N=N, context="high")
        try:
            lmax_exact(p, 1)
        except ValueError as err:
            print(f"  lmax_exact(alpha=3.0, nu=1) -> ValueError: {err}")

    print("\nBelow alpha*, the second resonance needs the longer undulator;")
    print("above it, the first resonance would.  In the quantum regime")
    print("(alpha < 1) the second resonance is always the long-haul option.")


if __name__ == "__main__":
    main()
