"""High-gain regime: N electrons collectively coupled to one quantized seeded mode.

The many-electron dynamics stays inside an (N+1)-dimensional collective
subspace: basis state mu has mu electrons transferred across the resonance
and ``n0 + s*mu`` photons in the mode (s = 1 photon per step on the first
resonance, s = 2 on the second).  The equation of motion is a real symmetric
tridiagonal system in the scaled undulator length ell = L/L_g,

    i dc_mu/dell = a(mu) c_{mu-1} + a(mu+1) c_{mu+1} + d(mu) c_mu,

whose coefficient formulas per resonance and model variant live in
``dicke_coefficients``.  Cross-checking routes:

* ``propagate_dicke`` — exact-in-time evolution of the tridiagonal system
  (eigendecomposition, or a Chebyshev polynomial propagator for very large N);
* ``analytic_n_first`` / ``analytic_n_second`` — closed-form photon numbers
  (Jacobi-elliptic for the first resonance, trigonometric-semiclassical for
  the second);
* ``integrate_semiclassical`` — the mean-field amplitude equations of the
  second resonance, integrated numerically with their two conserved
  quantities monitored;
* ``lmax_exact`` / ``lmax_ratio`` — first-maximum positions, exact versus the
  logarithmic shorthand whose accuracy is measured rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal
from scipy.special import jv

from .core import BandedHermitianOperator, FelParams, Trace
from .specfun import elliptic_K, jacobi_cn, modulus_from_seed

__all__ = [
    "HighGainModel",
    "VARIANTS",
    "dicke_coefficients",
    "build_dicke_tridiagonal",
    "propagate_dicke",
    "analytic_n_first",
    "analytic_n_second",
    "short_time_n_second",
    "integrate_semiclassical",
    "lmax_ratio",
    "lmax_exact",
]

#: Model variants per resonance.  The *_order variants of the first resonance
#: keep or drop the alpha^2 coupling correction and the diagonal; the second
#: resonance either keeps only the pair-emission coupling (dicke_only) or adds
#: the full diagonal level shifts (full_second_order).
VARIANTS: Dict[int, tuple[str, ...]] = {
    1: ("first_order", "third_order"),
    2: ("dicke_only", "full_second_order"),
}

#: Largest electron count for which the eigendecomposition route is the
#: default; beyond this the Chebyshev propagator takes over.
EIGH_LIMIT = 20_000


@dataclass(frozen=True)
class HighGainModel:
    """A high-gain scenario: parameters plus resonance variant."""

    params: FelParams
    variant: str

    def __post_init__(self) -> None:
        if self.params.context != "high":
            raise ValueError("HighGainModel requires params in the high-gain context")
        nu = self.params.nu
        if nu not in VARIANTS:
            raise ValueError(f"collective models cover nu in {{1, 2}}, got {nu}")
        if self.variant not in VARIANTS[nu]:
            raise ValueError(
                f"resonance nu = {nu} supports variants {VARIANTS[nu]}, got {self.variant!r}"
            )

    @property
    def photon_step(self) -> int:
        return 2 if self.params.nu == 2 else 1


def _coefficient_arrays(model: HighGainModel) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (a(1..N), d(0..N)) for the tridiagonal build."""
    p = model.params
    alpha, n0, N = p.alpha, p.n0, p.N
    mu_a = np.arange(1, N + 1, dtype=float)
    mu_d = np.arange(0, N + 1, dtype=float)
    if p.nu == 2:
        a = (
            0.5
            * alpha
            * np.sqrt((n0 + 2 * mu_a - 1) * (n0 + 2 * mu_a))
            * np.sqrt(mu_a / N)
            * np.sqrt(1.0 - (mu_a - 1) / N)
        )
        if model.variant == "dicke_only":
            d = np.zeros(N + 1)
        else:
            d = alpha * ((2.0 / 3.0) * mu_d * (1.0 - 1.0 / N) + n0 / 3.0 + 0.5)
    else:
        bracket = 1.0
        if model.variant == "third_order":
            bracket = 1.0 - (alpha**2 / 8.0) * (1.0 + 2.0 * (n0 + 1.0) / N)
        a = 0.5 * bracket * np.sqrt(mu_a * (n0 + mu_a)) * np.sqrt(1.0 - (mu_a - 1) / N)
        if model.variant == "first_order":
            d = np.zeros(N + 1)
        else:
            d = -(alpha / 4.0) * (n0 + mu_d * (1.0 + 1.0 / N))
    return a, d


def dicke_coefficients(model: HighGainModel, mu: int) -> tuple[float, float]:
    """Coupling a(mu) and level shift d(mu) of the collective tridiagonal.

    ``a`` is defined for 0 <= mu <= N+1 and vanishes at both boundaries
    (a(0) = a(N+1) = 0 close the three-term recursion); ``d`` is meaningful
    for 0 <= mu <= N — there is no level N+1, so its shift is reported as 0.
    """
    N = model.params.N
    if not 0 <= mu <= N + 1:
        raise ValueError(f"mu = {mu} outside [0, N+1]")
    a_arr, d_arr = _coefficient_arrays(model)
    a = 0.0 if mu == 0 or mu == N + 1 else float(a_arr[mu - 1])
    d = float(d_arr[mu]) if mu <= N else 0.0
    return a, d


def build_dicke_tridiagonal(model: HighGainModel) -> BandedHermitianOperator:
    """(N+1) x (N+1) real symmetric tridiagonal operator in banded storage."""
    a, d = _coefficient_arrays(model)
    return BandedHermitianOperator(size=model.params.N + 1, bands={0: d, 1: a})


def _gershgorin_bounds(diag: np.ndarray, off: np.ndarray) -> tuple[float, float]:
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    return float(np.min(diag - radius)), float(np.max(diag + radius))


def _chebyshev_step(
    diag: np.ndarray, off: np.ndarray, psi: np.ndarray, dt: float, lo: float, hi: float
) -> np.ndarray:
    """One exact-in-dt evolution step via a Chebyshev expansion of exp(-i H dt).

    The spectrum is mapped to [-1, 1] with the Gershgorin bounds; the
    expansion degree grows linearly with the spectral half-width times dt,
    with enough margin that the Bessel coefficients have decayed below
    double-precision roundoff.
    """
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    z = half * dt
    degree = int(z + 25 + 12 * z ** (1.0 / 3.0)) if z > 0 else 25
    coeff = jv(np.arange(degree + 1), z)

    shifted = diag - mid

    def matvec(v: np.ndarray) -> np.ndarray:
        out = shifted * v
        out[:-1] += off * v[1:]
        out[1:] += off * v[:-1]
        return out / half

    phi_prev = psi
    phi = matvec(psi)
    acc = coeff[0] * phi_prev + 2.0 * (-1j) * coeff[1] * phi
    for k in range(2, degree + 1):
        phi_prev, phi = phi, 2.0 * matvec(phi) - phi_prev
        acc = acc + 2.0 * ((-1j) ** k) * coeff[k] * phi
    return np.exp(-1j * mid * dt) * acc


def propagate_dicke(
    model: HighGainModel,
    ell_end: float,
    sample_count: int = 801,
    method: str = "auto",
    keep_probabilities: bool = False,
) -> Trace:
    """Photon number n(ell) from the seeded Fock state, with conservation audit.

    Methods: ``"eigh"`` diagonalizes the tridiagonal once and is exact in
    ell (default up to N = 20000); ``"chebyshev"`` is a polynomial propagator
    with O(N) memory for larger systems.  Both must conserve norm and energy
    to 1e-8 over figure-length runs — that is the gate, not the method.

    Returns a Trace over ell = L/L_g with columns ``n``, ``norm``, ``energy``.
    With ``keep_probabilities`` every level probability is stored as a
    ``P[mu]`` column as well; that grows as (N+1) x sample_count, so it is
    meant for small systems (oracle cross-checks), not figure-scale runs.
    """
    if ell_end <= 0:
        raise ValueError("ell_end must be positive")
    p = model.params
    steps = np.linspace(0.0, ell_end, sample_count)
    a, d = _coefficient_arrays(model)
    s = model.photon_step
    mus = np.arange(p.N + 1, dtype=float)

    if method == "auto":
        method = "eigh" if p.N <= EIGH_LIMIT else "chebyshev"

    prob_out = np.empty((p.N + 1, sample_count)) if keep_probabilities else None

    if method == "eigh":
        try:
            w, v = eigh_tridiagonal(d, a, lapack_driver="stemr")
        except np.linalg.LinAlgError as err:  # pragma: no cover - driver fallback
            raise RuntimeError(f"tridiagonal eigensolver failed: {err}") from err
        u = v[0, :]  # initial state c_mu = delta_{mu,0} in the eigenbasis
        n_out = np.empty(sample_count)
        norm_out = np.empty(sample_count)
        energy_out = np.empty(sample_count)
        chunk = max(1, min(64, sample_count))
        for start in range(0, sample_count, chunk):
            ells = steps[start : start + chunk]
            phase = np.exp(-1j * np.outer(w, ells)) * u[:, None]
            # Two real GEMMs instead of one complex one: halves peak memory
            # next to the (N+1)^2 eigenvector matrix.
            cr = v @ np.ascontiguousarray(phase.real)
            ci = v @ np.ascontiguousarray(phase.imag)
            probs = cr**2 + ci**2
            sl = slice(start, start + ells.size)
            norm_out[sl] = probs.sum(axis=0)
            n_out[sl] = p.n0 * norm_out[sl] + s * (mus[:, None] * probs).sum(axis=0)
            cross = (cr[:-1] * cr[1:] + ci[:-1] * ci[1:]).T @ a
            energy_out[sl] = probs.T @ d + 2.0 * cross
            if prob_out is not None:
                prob_out[:, sl] = probs
        # The ell = 0 propagator is the identity; pin the seed row exactly
        # instead of keeping the eigenbasis round-trip noise.
        norm_out[0] = 1.0
        n_out[0] = float(p.n0)
        energy_out[0] = float(d[0])
        if prob_out is not None:
            prob_out[:, 0] = 0.0
            prob_out[0, 0] = 1.0
    elif method == "chebyshev":
        lo, hi = _gershgorin_bounds(d, a)
        psi = np.zeros(p.N + 1, dtype=complex)
        psi[0] = 1.0
        n_out = np.empty(sample_count)
        norm_out = np.empty(sample_count)
        energy_out = np.empty(sample_count)
        dt = steps[1] - steps[0]
        for i in range(sample_count):
            if i > 0:
                psi = _chebyshev_step(d, a, psi, dt, lo, hi)
            probs = np.abs(psi) ** 2
            norm_out[i] = probs.sum()
            n_out[i] = p.n0 * norm_out[i] + s * float(mus @ probs)
            cross = float(a @ (np.conj(psi[:-1]) * psi[1:]).real)
            energy_out[i] = float(d @ probs) + 2.0 * cross
            if prob_out is not None:
                prob_out[:, i] = probs
    else:
        raise ValueError(f"unknown method {method!r}")

    columns = {"n": n_out, "norm": norm_out, "energy": energy_out}
    if prob_out is not None:
        for mu in range(p.N + 1):
            columns[f"P[{mu}]"] = prob_out[mu]
    return Trace(axis_label="L_over_Lg", x=steps, columns=columns)


def analytic_n_first(
    ell: np.ndarray | float, params: FelParams, order: int = 3
) -> np.ndarray | float:
    """Closed-form photon number of the first resonance (Jacobi-elliptic).

    n(ell) = n0 + N cn^2( sqrt(1+n0/N) (ell/2) C - K(k), k ) with modulus
    k = (1+n0/N)^{-1/2}; the order-3 phase factor is
    C = 1 - (alpha^2/8)(1 + 2 n0/N), dropped at order 1.  The curve rises
    from n0 to n0 + N and is periodic; a seedless field (n0 = 0) is rejected
    because the modulus degenerates.
    """
    if order not in (1, 3):
        raise ValueError("order must be 1 or 3")
    if params.n0 <= 0:
        raise ValueError("the closed form needs a seeded field (n0 > 0)")
    r = params.seed_ratio
    k = modulus_from_seed(params.n0, params.N)
    bigk = elliptic_K(k)
    corr = 1.0 - (params.alpha**2 / 8.0) * (1.0 + 2.0 * r) if order == 3 else 1.0
    arg = np.sqrt(1.0 + r) * (np.asarray(ell, dtype=float) / 2.0) * corr - bigk
    cn = jacobi_cn(arg, k)
    return params.n0 + params.N * np.square(cn)


def analytic_n_second(ell: np.ndarray | float, params: FelParams) -> np.ndarray | float:
    """Closed-form photon number of the second resonance (mean-field).

    n(ell) = n0 (1 + n0/2N) / (cos^2 theta + n0/2N) with
    theta = sqrt((n0/N)(n0/N + 2)) * alpha * ell / 2; periodic between n0 and
    n0 + 2N.  Needs a seeded field (n0 > 0).
    """
    if params.n0 <= 0:
        raise ValueError("the closed form needs a seeded field (n0 > 0)")
    r = params.seed_ratio
    x = params.n0 / (2.0 * params.N)
    theta = np.sqrt(r * (r + 2.0)) * params.alpha * np.asarray(ell, dtype=float) / 2.0
    return params.n0 * (1.0 + x) / (np.cos(theta) ** 2 + x)


def short_time_n_second(ell: np.ndarray | float, params: FelParams) -> np.ndarray | float:
    """Quadratic start-up law of the seeded second resonance.

    n(ell) ~= n0 [1 + n0 (alpha*ell)^2 / (2N)]: the growth is algebraic, not
    exponential — a linear instability analysis cannot produce it.  Valid for
    ell well below the first-maximum length.
    """
    ell = np.asarray(ell, dtype=float)
    return params.n0 * (1.0 + params.n0 * (params.alpha * ell) ** 2 / (2.0 * params.N))


def integrate_semiclassical(
    params: FelParams, ell_end: float, sample_count: int = 801
) -> Trace:
    """Mean-field amplitude dynamics of the second resonance.

    Integrates the three coupled mode amplitudes (field a, unexcited
    electrons b0, recoiled electrons b2) from a = sqrt(n0), b0 = sqrt(N),
    b2 = 0.  Two combinations are conserved exactly by the dynamics and are
    recorded so integrator drift can be audited: A = |b0|^2 + |b2|^2 (= N)
    and B = 2|b0|^2 + n (= 2N + n0).  Aborts if either electron population
    leaves [0, N] beyond integrator tolerance.

    Returns a Trace over ell with columns ``n``, ``ndot``, ``A``, ``B``.
    """
    if params.n0 <= 0:
        raise ValueError("the mean-field route needs a seeded field (n0 > 0)")
    if params.nu != 2:
        raise ValueError("the mean-field route models the second resonance (nu = 2)")
    if ell_end <= 0:
        raise ValueError("ell_end must be positive")
    alpha, N = params.alpha, params.N

    def rhs(_ell: float, y: np.ndarray) -> np.ndarray:
        a = y[0] + 1j * y[1]
        b0 = y[2] + 1j * y[3]
        b2 = y[4] + 1j * y[5]
        da = -1j * (alpha / N) * np.conj(a) * b0 * np.conj(b2)
        db0 = -1j * (alpha / (2.0 * N)) * a * a * b2
        db2 = -1j * (alpha / (2.0 * N)) * np.conj(a) * np.conj(a) * b0
        return np.array([da.real, da.imag, db0.real, db0.imag, db2.real, db2.imag])

    y0 = np.array([np.sqrt(params.n0), 0.0, np.sqrt(N), 0.0, 0.0, 0.0])
    ells = np.linspace(0.0, ell_end, sample_count)
    sol = solve_ivp(
        rhs,
        (0.0, ell_end),
        y0,
        t_eval=ells,
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    if not sol.success:
        raise RuntimeError(f"mean-field integration failed: {sol.message}")
    a = sol.y[0] + 1j * sol.y[1]
    b0 = sol.y[2] + 1j * sol.y[3]
    b2 = sol.y[4] + 1j * sol.y[5]
    n = np.abs(a) ** 2
    n_elec0 = np.abs(b0) ** 2
    n_elec2 = np.abs(b2) ** 2
    tol = 1e-8 * N
    if np.min(n_elec0) < -tol or np.min(n_elec2) < -tol or np.max(n_elec0 + n_elec2) > N + tol:
        raise RuntimeError(
            "electron-population constraint violated: "
            f"min N0 = {np.min(n_elec0):.3e}, min N2 = {np.min(n_elec2):.3e}, "
            f"max N0+N2 = {np.max(n_elec0 + n_elec2):.6e} vs N = {N}"
        )
    ndot = 2.0 * np.real(np.conj(a) * (-1j * (alpha / N) * np.conj(a) * b0 * np.conj(b2)))
    return Trace(
        axis_label="L_over_Lg",
        x=ells,
        columns={
            "n": n,
            "ndot": ndot,
            "A": n_elec0 + n_elec2,
            "B": 2.0 * n_elec0 + n,
        },
    )


def lmax_ratio(alpha: float, n0_over_N: float) -> float:
    """Logarithmic shorthand for L_max(second) / L_max(first).

    ratio = (1/alpha) * pi / (2 ln(sqrt(N/n0)) * sqrt((n0/N)(n0/N + 2))).
    This replaces the elliptic integral of the exact first-resonance length
    by a leading logarithm, so it is only an order-of-magnitude guide; its
    accuracy against ``lmax_exact`` is measured, not assumed.  Scales as
    1/alpha.  Rejected for n0 >= N, where the logarithm vanishes or turns
    negative.
    """
    if not 0.0 < n0_over_N < 1.0:
        raise ValueError("the logarithmic form needs 0 < n0/N < 1")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    log = np.log(np.sqrt(1.0 / n0_over_N))
    return float(np.pi / (2.0 * alpha * log * np.sqrt(n0_over_N * (n0_over_N + 2.0))))


def lmax_exact(params: FelParams, resonance: int) -> float:
    """Exact first-maximum position (in gain lengths) of the analytic curves.

    resonance 1: 2 K(k) / (sqrt(1+n0/N) [1 - (alpha^2/8)(1 + 2 n0/N)]);
    resonance 2: pi / (alpha sqrt((n0/N)(n0/N + 2))).

    The first-resonance phase factor is perturbative in alpha; once
    alpha^2 (1 + 2 n0/N) >= 8 it stops being positive and the formula has
    left its domain of validity, which is rejected rather than returned as
    a negative length.
    """
    r = params.seed_ratio
    if resonance == 1:
        k = modulus_from_seed(params.n0, params.N)
        corr = 1.0 - (params.alpha**2 / 8.0) * (1.0 + 2.0 * r)
        if corr <= 0.0:
            raise ValueError(
                "first-resonance phase factor breaks down: alpha^2 (1 + 2 n0/N) >= 8"
            )
        return float(2.0 * elliptic_K(k) / (np.sqrt(1.0 + r) * corr))
    if resonance == 2:
        if r <= 0:
            raise ValueError("the second-resonance maximum needs a seeded field")
        return float(np.pi / (params.alpha * np.sqrt(r * (r + 2.0))))
    raise ValueError(f"resonance must be 1 or 2, got {resonance}")
