"""Low-gain regime: one electron on the momentum ladder in a fixed classical field.

The electron starts in the momentum eigenstate p = nu*q/2 and exchanges
recoil quanta q with the field.  Three routes to the same physics live here
and are tested against each other:

* the full interaction-picture Hamiltonian — nearest-neighbour couplings of
  equal magnitude ``alpha_n`` whose phases rotate at the detuning of each
  transition (only the resonant pair is stationary);
* static effective Hamiltonians per resonance — the resonant manifold plus
  the level shifts and higher-order couplings induced by the off-resonant
  ladder, tabulated to third order (first and third resonance) or fourth
  order (second resonance);
* closed-form expressions — the per-electron gain ``dn/N`` for nu = 1, 2, 3
  and the explicit level populations of the second and third resonance.

Observables exclude a buffer of levels at the truncation edge so that ladder
truncation can never contaminate them; doubling the half-width M must leave
every reported number unchanged at the 1e-8 level.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict

import numpy as np

from .core import (
    EDGE_BUFFER,
    BandedHermitianOperator,
    FelParams,
    LadderState,
    Trace,
    first_maximum,
    level_populations,
    photon_change,
)

__all__ = [
    "LowGainModel",
    "SUPPORTED_ORDERS",
    "build_full_hamiltonian",
    "rotating_frame_hamiltonian",
    "build_effective_hamiltonian",
    "propagate",
    "gain_frequency",
    "analytic_dn",
    "analytic_populations_second",
    "analytic_populations_third",
    "momentum_label_to_level",
    "ripple_period",
    "fit_rabi_frequency",
    "gain_from_state",
]

#: Expansion orders available per resonance for the effective models.
SUPPORTED_ORDERS: Dict[int, tuple[int, ...]] = {1: (1, 2, 3), 2: (2, 4), 3: (1, 2, 3)}


@dataclass(frozen=True)
class LowGainModel:
    """A low-gain scenario: parameters plus the dynamical route to use."""

    params: FelParams
    variant: str = "full_hamiltonian"  # "full_hamiltonian" | "effective"

    def __post_init__(self) -> None:
        if self.params.context != "low":
            raise ValueError("LowGainModel requires params in the low-gain context")
        if self.variant not in ("full_hamiltonian", "effective"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "effective":
            self.resolve_order()  # validates nu/order up front

    def resolve_order(self) -> int:
        nu = self.params.nu
        if nu not in SUPPORTED_ORDERS:
            raise ValueError(
                f"no effective model for resonance nu = {nu}; supported: 1, 2, 3"
            )
        orders = SUPPORTED_ORDERS[nu]
        order = self.params.order if self.params.order is not None else orders[-1]
        if order not in orders:
            raise ValueError(
                f"resonance nu = {nu} supports expansion orders {orders}, got {order}"
            )
        return order


def build_full_hamiltonian(params: FelParams) -> BandedHermitianOperator:
    """Interaction-picture ladder Hamiltonian with oscillating couplings.

    Every nearest-neighbour entry (mu, mu+1) has magnitude ``alpha`` and
    phase frequency ``nu - 2*mu - 1`` in tau: the transition from +nu*q/2 to
    +nu*q/2 - q is detuned by that amount, and exactly the pair symmetric
    about zero momentum is stationary.  A negative ``params.nu`` builds the
    mirrored scenario (initial momentum reflected).
    """
    m = params.ladder_halfwidth
    size = 2 * m + 1
    mus = np.arange(-m, m)  # row index of each (mu, mu+1) entry
    band1 = np.full(size - 1, params.alpha, dtype=complex)
    freq1 = (params.nu - 2 * mus - 1).astype(float)
    return BandedHermitianOperator(size=size, bands={1: band1}, freqs={1: freq1})


def rotating_frame_hamiltonian(params: FelParams) -> BandedHermitianOperator:
    """Static frame equivalent of the full Hamiltonian.

    Undoing the interaction-picture phases turns the oscillating couplings
    into a constant nearest-neighbour coupling ``alpha`` plus the kinetic
    diagonal (nu/2 - mu)^2.  The transformation between the two frames is
    diagonal, so level populations — and with them every observable reported
    here — are identical, while propagation becomes a single exact
    eigendecomposition instead of time stepping.
    """
    m = params.ladder_halfwidth
    size = 2 * m + 1
    mus = np.arange(-m, m + 1)
    diag = (params.nu / 2.0 - mus) ** 2
    band1 = np.full(size - 1, params.alpha)
    return BandedHermitianOperator(size=size, bands={0: diag, 1: band1})


def _effective_bands(nu: int, alpha: float, order: int, m: int) -> Dict[tuple[int, int], float]:
    """Effective-model matrix elements as {(mu, mu') with mu' >= mu: value}.

    Level indices are ladder indices (level mu holds momentum nu*q/2 - mu*q).
    The infinite level-shift sums are truncated at the ladder bounds; the
    excluded tails only touch levels inside the reporting buffer.
    """
    h: Dict[tuple[int, int], float] = {}

    def add(i: int, j: int, val: float) -> None:
        if abs(i) > m or abs(j) > m:
            return
        key = (i, j) if i <= j else (j, i)
        h[key] = h.get(key, 0.0) + val

    mus = range(-m, m + 1)
    if nu == 1:
        add(0, 1, alpha)
        if order >= 2:
            add(0, 0, -0.5 * alpha**2)
            add(1, 1, -0.5 * alpha**2)
            for mu in mus:
                if mu not in (0, 1):
                    add(mu, mu, alpha**2 / (2.0 * mu * (mu - 1)))
        if order >= 3:
            add(0, 1, -0.25 * alpha**3)
            add(-1, 2, 0.25 * alpha**3)
    elif nu == 2:
        add(0, 2, alpha**2)
        for mu in mus:
            add(mu, mu, 2.0 * alpha**2 / ((2 * mu - 3) * (2 * mu - 1)))
        if order >= 4:
            add(0, 2, -(16.0 / 9.0) * alpha**4)
            add(-1, 3, alpha**4 / 36.0)
            for mu in mus:
                if abs(mu + 1) <= m:
                    half = mu - 0.5
                    shift = alpha**4 / (8.0 * half**3 * (half**2 - 1.0) ** 2)
                    add(mu + 1, mu + 1, -shift)
                    add(mu, mu, shift)
                if mu != 0 and abs(mu + 1) <= m:
                    pair = alpha**4 / (64.0 * mu * (mu**2 - 0.25) ** 2)
                    add(mu + 1, mu + 1, pair)
                    add(mu, mu, pair)
    elif nu == 3:
        add(1, 2, alpha)
        if order >= 2:
            add(1, 1, -0.5 * alpha**2)
            add(2, 2, -0.5 * alpha**2)
            for mu in mus:
                if mu not in (1, 2):
                    add(mu, mu, alpha**2 / (2.0 * (mu - 1) * (mu - 2)))
        if order >= 3:
            add(1, 2, -0.25 * alpha**3)
            add(0, 3, 0.25 * alpha**3)
    return h


def build_effective_hamiltonian(params: FelParams, order: int | None = None) -> BandedHermitianOperator:
    """Static effective Hamiltonian of the requested resonance and order.

    Supported expansion orders are 1-3 for nu = 1 and 3, and 2 or 4 for
    nu = 2 (whose expansion has no odd terms); anything else is rejected
    outright rather than silently truncated.
    """
    model = LowGainModel(
        params=params if order is None else _with_order(params, order),
        variant="effective",
    )
    order = model.resolve_order()
    nu, alpha, m = params.nu, params.alpha, params.ladder_halfwidth
    elements = _effective_bands(nu, alpha, order, m)
    size = 2 * m + 1
    max_d = max((j - i for (i, j) in elements), default=0)
    bands = {d: np.zeros(size - d) for d in range(max_d + 1)}
    for (i, j), val in elements.items():
        bands[j - i][i + m] = val
    bands = {d: arr for d, arr in bands.items() if np.any(arr != 0) or d == 0}
    return BandedHermitianOperator(size=size, bands=bands)


def _with_order(params: FelParams, order: int) -> FelParams:
    return replace(params, order=order)


def propagate(
    model: LowGainModel,
    state: LadderState,
    tau_end: float,
    sample_count: int = 1001,
) -> Trace:
    """Evolve a ladder state and record populations and the per-electron gain.

    Both variants reduce to one real-symmetric eigendecomposition: the
    effective models are static by construction, and the full Hamiltonian is
    propagated in its static rotating frame (an exact, population-preserving
    equivalence — no time-stepping error enters).  Norm and frame energy are
    recorded so conservation can be audited; levels within the edge buffer
    are excluded from the reported populations and from dn.

    Returns a Trace over tau with columns ``P[mu]`` for each interior level,
    ``dn_per_N``, ``norm``, and ``energy``.
    """
    params = model.params
    if model.variant == "full_hamiltonian":
        op = rotating_frame_hamiltonian(params)
    else:
        op = build_effective_hamiltonian(params)
    h = op.dense().real
    if state.amplitudes.size != op.size:
        raise ValueError("state size does not match the model's ladder")

    if tau_end <= 0:
        raise ValueError("tau_end must be positive")
    taus = np.linspace(0.0, tau_end, sample_count)
    w, v = np.linalg.eigh(h)
    c0 = v.T @ state.amplitudes
    phases = np.exp(-1j * np.outer(w, taus)) * c0[:, None]
    psi = v @ phases  # (size, samples)
    psi[:, 0] = state.amplitudes  # the tau = 0 propagator is the identity, exactly

    probs = np.abs(psi) ** 2
    m = params.ladder_halfwidth
    mus = np.arange(-m, m + 1)
    interior = np.abs(mus) <= m - EDGE_BUFFER
    columns: Dict[str, np.ndarray] = {}
    for mu, row in zip(mus[interior], probs[interior]):
        columns[f"P[{mu}]"] = row
    dn = (mus[interior, None] * probs[interior]).sum(axis=0)
    columns["dn_per_N"] = dn
    columns["norm"] = probs.sum(axis=0)
    columns["energy"] = np.einsum("is,ij,js->s", psi.conj(), h, psi).real
    return Trace(axis_label="tau", x=taus, columns=columns)


def gain_frequency(nu: int, alpha: float) -> float:
    """Envelope frequency of dn/N in tau implied by the closed-form gains.

    The first maximum of the gain sits at tau = pi / (2 * gain_frequency);
    scaling with resonance order follows alpha**nu up to the bracketed
    corrections of ``analytic_dn``.
    """
    if nu == 1:
        return alpha * (1.0 - alpha**2 / 4.0)
    if nu == 2:
        return alpha**2 * (1.0 - 16.0 * alpha**2 / 9.0)
    if nu == 3:
        return alpha**3 / 4.0
    raise ValueError(f"closed forms cover nu in {{1, 2, 3}}, got {nu}")


def analytic_dn(nu: int, alpha: float, phase: np.ndarray | float) -> np.ndarray | float:
    """Closed-form per-electron gain dn/N versus Rabi phase Omega*t.

    nu = 1: sin^2[Omega*t (1 - alpha^2/4)]            (amplitude 1)
    nu = 2: 2 sin^2[alpha Omega*t (1 - 16 alpha^2/9)] (amplitude 2)
    nu = 3: 3 sin^2[(alpha^2/4) Omega*t]              (amplitude 3)
    """
    phase = np.asarray(phase, dtype=float)
    if nu == 1:
        out = np.sin(phase * (1.0 - alpha**2 / 4.0)) ** 2
    elif nu == 2:
        out = 2.0 * np.sin(alpha * phase * (1.0 - 16.0 * alpha**2 / 9.0)) ** 2
    elif nu == 3:
        out = 3.0 * np.sin((alpha**2 / 4.0) * phase) ** 2
    else:
        raise ValueError(f"closed forms cover nu in {{1, 2, 3}}, got {nu}; use propagate")
    return float(out) if np.ndim(phase) == 0 else out


def analytic_populations_second(alpha: float, tau: np.ndarray | float) -> Dict[int, np.ndarray]:
    """Closed-form second-resonance populations, keyed by momentum in units of q.

    Returns {+2: P_2q, +1: P_q, 0: P_0, -1: P_-q, -2: P_-2q} exactly as the
    asymptotic expansion gives them (amplitudes kept to second order in
    alpha, frequencies to fourth).  Their sum is identically 1; pointwise
    accuracy against full propagation degrades as alpha**2 — see
    ``momentum_label_to_level`` for the ladder-index correspondence.
    """
    tau = np.asarray(tau, dtype=float)
    a2 = alpha * alpha
    xi1 = a2 * (1.0 - 16.0 * a2 / 9.0)
    xi2 = (a2 * a2 / 36.0) * np.sqrt(1.0 + (124.0 / 125.0) ** 2)
    xi3 = 3.0 - (8.0 * a2 / 15.0) * (1.0 - 16.0 * a2 / 5.0)
    xi4 = 1.0 + (8.0 * a2 / 3.0) * (1.0 - 7.0 * (8.0 * alpha / 15.0) ** 2)

    c1, s1 = np.cos(xi1 * tau), np.sin(xi1 * tau)
    c2, s2 = np.cos(xi2 * tau), np.sin(xi2 * tau)
    c3 = np.cos(xi3 * tau)
    c4, s4 = np.cos(xi4 * tau), np.sin(xi4 * tau)

    p_2q = (a2 / 9.0) * (c1**2 + c2**2 - 2.0 * c1 * c2 * c3)
    p_q = c1**2 + 2.0 * a2 * c1 * (-(10.0 / 9.0) * c1 + c4 + (1.0 / 9.0) * c2 * c3)
    p_0 = 2.0 * a2 * (1.0 - np.cos((xi1 + xi4) * tau))
    p_mq = s1**2 + 2.0 * a2 * s1 * (-(10.0 / 9.0) * s1 - s4 + (1.0 / 9.0) * s2 * c3)
    p_m2q = (a2 / 9.0) * (s1**2 + s2**2 - 2.0 * s1 * s2 * c3)
    return {2: p_2q, 1: p_q, 0: p_0, -1: p_mq, -2: p_m2q}


def analytic_populations_third(alpha: float, tau: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form third-resonance pair (P at +3q/2, P at -3q/2).

    Amplitude corrections are neglected in this pair, so the two values sum
    to exactly 1 and the transfer is a pure Rabi cycle at alpha**3/4.
    """
    tau = np.asarray(tau, dtype=float)
    phase = (alpha**3 / 4.0) * tau
    return np.cos(phase) ** 2, np.sin(phase) ** 2


def momentum_label_to_level(nu: int, k2: int) -> int:
    """Ladder index mu of the level with momentum (k2/2)*q, given resonance nu.

    Level mu holds momentum nu*q/2 - mu*q, so mu = (nu - k2) / 2 where k2
    counts the momentum in half-recoil units (k2 = 2 means +q, k2 = -3 means
    -3q/2, ...).  Rejects labels off the ladder's parity.
    """
    if (nu - k2) % 2 != 0:
        raise ValueError(f"momentum {k2}/2 q is not on the nu = {nu} ladder")
    return (nu - k2) // 2


def ripple_period(params: FelParams) -> float:
    """Period (in tau) of the slowest off-resonant coupling phase.

    This is the natural smoothing window when locating slow-envelope extrema
    of a full-Hamiltonian trace: averaging over one ripple period removes the
    fast oscillations without biasing the envelope.
    """
    op = build_full_hamiltonian(params)
    freqs = np.abs(op.freqs[1])
    nonzero = freqs[freqs > 0]
    if nonzero.size == 0:
        raise ValueError("no oscillating couplings on this ladder")
    return float(2.0 * np.pi / nonzero.min())


def fit_rabi_frequency(trace: Trace, column: str = "dn_per_N", smooth_window: float = 0.0) -> float:
    """Effective oscillation frequency from the first maximum of a gain trace.

    For a gain of the form sin^2(omega * x) the first maximum sits at
    omega * x = pi/2, so the estimator is pi / (2 * x_max).  Pass a smoothing
    window (one ripple period) when the trace carries fast off-resonant
    ripple on top of the envelope.  Raises if the trace contains no interior
    maximum.
    """
    ext = first_maximum(trace.x, np.asarray(trace.column(column), dtype=float), smooth_window)
    return float(np.pi / (2.0 * ext.position))


def _interior_populations(state: LadderState) -> Dict[int, float]:
    m = state.halfwidth
    pops = level_populations(state)
    return {mu: p for mu, p in pops.items() if abs(mu) <= m - EDGE_BUFFER}


def gain_from_state(state: LadderState) -> float:
    """Per-electron gain dn/N of a ladder state (interior levels only)."""
    return photon_change(_interior_populations(state), N=1)
