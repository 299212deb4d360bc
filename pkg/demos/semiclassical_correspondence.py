#!/usr/bin/env python3
"""Mean-field three-wave equations against the quantum cascade.

The second resonance admits a mean-field description: one field amplitude
coupled to the edge momentum populations.  Integrating those three complex
equations reproduces the closed-form photon curve to solver precision — and
the full quantum model approaches both as the system grows.

Run:  python3 demos/semiclassical_correspondence.py
"""

import numpy as np

from qfel import (
    FelParams,
    HighGainModel,
    analytic_n_second,
    integrate_semiclassical,
    lmax_exact,
    propagate_dicke,
    short_time_n_second,
)


def main():
    p = FelParams(alpha=0.25, nu=2, n0=100.0, N=1000, context="high")
    period = 2.0 * lmax_exact(p, 2)

    print("Mean-field three-wave model vs closed form (alpha = 0.25, n0/N = 0.1)")
    print("=" * 70)

    trace = integrate_semiclassical(p, period, 801)
    closed = np.asarray(analytic_n_second(trace.x, p))
    rel = np.max(np.abs(trace.column("n") - closed) / closed)
    print(f"\n  worst relative deviation over a full cycle : {rel:.2e}")
    print(f"  photon number returns to the seed at L/Lg = {period:.2f}: "
          f"n = {trace.column('n')[-1]:.4f}")

    drift_a = np.max(np.abs(trace.column("A") - p.N))
    drift_b = np.max(np.abs(trace.column("B") - (2 * p.N + p.n0)))
    print(f"  conserved electron number drift            : {drift_a:.2e}")
    print(f"  conserved excitation-count drift           : {drift_b:.2e}")

    print("\nStart-up is algebraic, not exponential — the seed sets the clock:")
    for ell in (0.5, 1.0, 2.0):
        full = analytic_n_second(ell, p)
        quad = short_time_n_second(ell, p)
        print(f"  L/Lg = {ell:4.1f}: closed form {full:9.3f}, quadratic law {quad:9.3f}")

    print("\nQuantum-to-mean-field convergence at the first maximum (n0/N = 0.1):")
    print(f"  {'N':>6} {'quantum peak / mean-field peak':>32}")
    for N in (250, 1000, 4000):
        scaled = FelParams(alpha=0.25, nu=2, n0=0.1 * N, N=N, context="high")
        model = HighGainModel(params=scaled, variant="dicke_only")
        trace = propagate_dicke(model, 1.1 * lmax_exact(scaled, 2), 301)
        ceiling = float(np.max(np.asarray(analytic_n_second(trace.x, scaled))))
        print(f"  {N:6d} {np.max(trace.column('n')) / ceiling:32.4f}")

    print("\nThe pair-coupling quantum model closes on the mean-field ceiling as")
    print("1/N corrections fade; the residual gap at finite N is the quantum")
    print("fluctuation the three-wave equations cannot see.")


if __name__ == "__main__":
    main()
