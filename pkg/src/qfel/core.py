"""Shared parameter bookkeeping, state containers, and observable extraction.

Everything in this package is dimensionless.  The electron lives on a discrete
momentum ladder with spacing q (the two-photon recoil): level mu holds momentum
p - mu*q, where p = nu*q/2 is the initial momentum selected by the resonance
index nu.  Time is measured in units of the inverse recoil frequency (tau),
Rabi phase as Omega*t = alpha*tau, and undulator length in gain lengths
(ell = L/L_g) with the conversion alpha_N * tau = ell / 2.

Two dynamical regimes share these containers:

* low gain  -- a single electron in a fixed classical field; the quantum
  parameter is ``alpha = alpha_n`` (coupling times sqrt of the field's photon
  number over the recoil frequency);
* high gain -- N electrons coupled to a quantized mode; the quantum parameter
  is ``alpha = alpha_N`` (coupling times sqrt(N) over the recoil frequency).

The regime is always declared explicitly through ``FelParams.context`` and
never inferred from parameter values.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Dict, Mapping, NamedTuple

import numpy as np

__all__ = [
    "FelParams",
    "LadderState",
    "DickeState",
    "BandedHermitianOperator",
    "Trace",
    "Extremum",
    "level_populations",
    "photon_change",
    "dicke_photon_number",
    "boxcar_smooth",
    "first_maximum",
]

#: Levels this close to the truncation edge are excluded from reported
#: observables so that ladder-truncation artifacts cannot contaminate them.
EDGE_BUFFER = 2


@dataclass(frozen=True)
class FelParams:
    """Dimensionless parameters of one simulation scenario.

    Parameters
    ----------
    alpha:
        Quantum parameter.  In the low-gain context this is ``alpha_n``; in
        the high-gain context ``alpha_N``.  Must be positive; values above 1
        leave the quantum regime and trigger a warning, not an error.
    nu:
        Resonance index; the initial electron momentum is ``nu*q/2``.
        Positive in normal operation.  A negative value selects the mirrored
        initial momentum ``-|nu|*q/2`` (used by reflection checks).
    n0:
        Initial photon number of the seeded mode (high gain); non-negative.
    N:
        Electron count (high gain); positive.
    M:
        Ladder truncation half-width (low gain).  Defaults to ``|nu| + 8``;
        must be at least ``|nu| + 3`` so every coupling of the effective
        models fits inside the truncated ladder.
    order:
        Expansion order for the effective low-gain models; ``None`` selects
        each resonance's highest tabulated order.
    context:
        ``"low"`` or ``"high"``; declares which regime ``alpha`` refers to.
    epsilon:
        Optional bare coupling-to-recoil ratio.  Defaults to
        ``alpha / sqrt(N)`` in the high-gain context.
    """

    alpha: float
    nu: int = 1
    n0: float = 0.0
    N: int = 1
    M: int | None = None
    order: int | None = None
    context: str = "low"
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.context not in ("low", "high"):
            raise ValueError(f"context must be 'low' or 'high', got {self.context!r}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.alpha > 1:
            warnings.warn(
                f"alpha = {self.alpha} exceeds 1: outside the quantum regime",
                stacklevel=2,
            )
        if int(self.nu) != self.nu or self.nu == 0:
            raise ValueError(f"nu must be a nonzero integer, got {self.nu}")
        if self.n0 < 0:
            raise ValueError(f"n0 must be non-negative, got {self.n0}")
        if self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        m = self.ladder_halfwidth
        if m < abs(self.nu) + 3:
            raise ValueError(
                f"M = {m} too small: need M >= |nu| + 3 = {abs(self.nu) + 3}"
            )
        if self.epsilon is None and self.context == "high":
            object.__setattr__(self, "epsilon", self.alpha / np.sqrt(self.N))

    @property
    def ladder_halfwidth(self) -> int:
        """Truncation half-width M, defaulted to ``|nu| + 8``."""
        return self.M if self.M is not None else abs(self.nu) + 8

    @property
    def seed_ratio(self) -> float:
        """Seed strength n0/N (high-gain bookkeeping)."""
        return self.n0 / self.N

    def tau_from_length(self, ell: np.ndarray | float) -> np.ndarray | float:
        """Convert undulator length ell = L/L_g to dimensionless time tau."""
        return np.asarray(ell) / (2.0 * self.alpha)

    def rabi_phase(self, tau: np.ndarray | float) -> np.ndarray | float:
        """Convert tau to the Rabi phase Omega*t = alpha * tau (low gain)."""
        return self.alpha * np.asarray(tau)


@dataclass
class LadderState:
    """Single-electron amplitudes over momentum levels p - mu*q, mu in [-M, M]."""

    nu: int
    amplitudes: np.ndarray  # complex, length 2*M + 1, index mu + M

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or self.amplitudes.size % 2 != 1:
            raise ValueError("amplitudes must be a 1-D array of odd length")

    @classmethod
    def initial(cls, params: FelParams) -> "LadderState":
        """Momentum eigenstate at the initial level mu = 0."""
        m = params.ladder_halfwidth
        amps = np.zeros(2 * m + 1, dtype=complex)
        amps[m] = 1.0
        return cls(nu=params.nu, amplitudes=amps)

    @property
    def halfwidth(self) -> int:
        return (self.amplitudes.size - 1) // 2

    @property
    def mu_values(self) -> np.ndarray:
        m = self.halfwidth
        return np.arange(-m, m + 1)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass
class DickeState:
    """Collective amplitudes c_mu, mu in [0, N], of the seeded many-electron basis.

    Basis state mu carries photon number ``n0 + photon_step * mu``: every
    collective step transfers one electron across the resonance and emits
    ``photon_step`` photons (1 for the first resonance, 2 for the second).
    """

    c: np.ndarray  # complex, length N + 1
    photon_step: int
    n0: float

    def __post_init__(self) -> None:
        self.c = np.asarray(self.c, dtype=complex)
        if self.photon_step not in (1, 2):
            raise ValueError(f"photon_step must be 1 or 2, got {self.photon_step}")
        if self.n0 < 0:
            raise ValueError("n0 must be non-negative")

    @classmethod
    def seeded(cls, N: int, n0: float, photon_step: int) -> "DickeState":
        """Product seed state: all electrons unexcited, field in the n0 Fock state."""
        c = np.zeros(N + 1, dtype=complex)
        c[0] = 1.0
        return cls(c=c, photon_step=photon_step, n0=n0)

    @property
    def N(self) -> int:
        return self.c.size - 1

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.c) ** 2))


@dataclass
class BandedHermitianOperator:
    """Hermitian band matrix with optional per-entry oscillation frequencies.

    Only the diagonal and upper bands are stored; the lower bands are the
    conjugate transpose by construction, so every materialized matrix is
    Hermitian for every time.  ``bands[d][i]`` is the static entry H[i, i+d]
    for band distance ``d in [0, half_bandwidth]``; if ``freqs`` carries a
    matching array, the entry at time tau is ``bands[d][i] * exp(1j *
    freqs[d][i] * tau)``.
    """

    size: int
    bands: Dict[int, np.ndarray]
    freqs: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for d, entries in self.bands.items():
            entries = np.asarray(entries)
            if d < 0 or entries.shape != (self.size - d,):
                raise ValueError(f"band {d} must have length size - d = {self.size - d}")
            self.bands[d] = entries
        if 0 in self.bands and np.iscomplexobj(self.bands[0]):
            if np.max(np.abs(self.bands[0].imag)) > 0:
                raise ValueError("diagonal band must be real for Hermiticity")
        for d, om in self.freqs.items():
            om = np.asarray(om, dtype=float)
            if d not in self.bands or om.shape != (self.size - d,):
                raise ValueError(f"frequency band {d} must match stored band {d}")
            self.freqs[d] = om

    @property
    def half_bandwidth(self) -> int:
        return max(self.bands, default=0)

    @property
    def is_static(self) -> bool:
        return all(np.all(om == 0) for om in self.freqs.values())

    def dense(self, tau: float = 0.0) -> np.ndarray:
        """Materialize the full Hermitian matrix at time tau."""
        h = np.zeros((self.size, self.size), dtype=complex)
        for d, entries in self.bands.items():
            vals = np.asarray(entries, dtype=complex)
            if d in self.freqs:
                vals = vals * np.exp(1j * self.freqs[d] * tau)
            idx = np.arange(self.size - d)
            h[idx, idx + d] += vals
            if d > 0:
                h[idx + d, idx] += np.conj(vals)
        return h

    def tridiagonal_parts(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (diagonal, off-diagonal) for a static real tridiagonal operator."""
        if self.half_bandwidth > 1 or not self.is_static:
            raise ValueError("operator is not a static tridiagonal")
        diag = np.real(self.bands.get(0, np.zeros(self.size)))
        off = np.real(self.bands.get(1, np.zeros(self.size - 1)))
        return np.asarray(diag, dtype=float), np.asarray(off, dtype=float)


@dataclass
class Trace:
    """Sampled observable series: one abscissa, named columns of equal length."""

    axis_label: str
    x: np.ndarray
    columns: Dict[str, np.ndarray]

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=float)
        if self.x.ndim != 1 or self.x.size < 2:
            raise ValueError("abscissa must be 1-D with at least two samples")
        if np.any(np.diff(self.x) <= 0):
            raise ValueError("abscissae must be strictly increasing")
        for name, col in self.columns.items():
            col = np.asarray(col)
            if col.shape != self.x.shape:
                raise ValueError(f"column {name!r} length differs from abscissa")
            self.columns[name] = col

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]


def level_populations(state: LadderState) -> Dict[int, float]:
    """Probabilities P_mu = |psi_mu|^2 for every ladder level."""
    probs = np.abs(state.amplitudes) ** 2
    return {int(mu): float(p) for mu, p in zip(state.mu_values, probs)}


def photon_change(populations: Mapping[int, float], N: int) -> float:
    """Emitted-photon count delta_n = N * sum_mu mu * P_mu.

    Positive values mean net emission (population moved toward lower
    momentum).  The populations must be normalized; deviations beyond 1e-6
    are rejected because they signal a broken state, not roundoff.
    """
    total = float(sum(populations.values()))
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"populations sum to {total}, violating normalization")
    return float(N) * float(sum(mu * p for mu, p in populations.items()))


def dicke_photon_number(state: DickeState) -> float:
    """Photon-number expectation n = sum_mu |c_mu|^2 (n0 + s*mu)."""
    probs = np.abs(state.c) ** 2
    mus = np.arange(state.c.size)
    return float(np.sum(probs * (state.n0 + state.photon_step * mus)))


def boxcar_smooth(x: np.ndarray, y: np.ndarray, window: float) -> tuple[np.ndarray, np.ndarray]:
    """Moving average of y over an x-window; returns the valid interior part.

    Used to suppress fast off-resonant ripple before locating slow-envelope
    extrema.  The returned abscissa is trimmed so every output sample averages
    a full window.
    """
    if window <= 0:
        return x, y
    dx = float(np.mean(np.diff(x)))
    k = max(1, int(round(window / dx)))
    if k % 2 == 0:
        k += 1
    if k >= y.size:
        raise ValueError("smoothing window longer than the trace")
    kernel = np.full(k, 1.0 / k)
    ys = np.convolve(y, kernel, mode="valid")
    half = k // 2
    return x[half : x.size - half], ys


class Extremum(NamedTuple):
    """Location and height of a trace extremum."""

    position: float
    amplitude: float


def first_maximum(x: np.ndarray, y: np.ndarray, smooth_window: float = 0.0) -> Extremum:
    """First maximum of a sampled oscillation, with parabolic refinement.

    The trace is expected to cover roughly one oscillation period so that the
    global maximum is the first one.  With ``smooth_window > 0`` the trace is
    boxcar-averaged first, which suppresses fast ripple when locating the
    position of a slow envelope (the raw amplitude is usually wanted instead:
    call once without smoothing for the height).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if smooth_window > 0:
        x, y = boxcar_smooth(x, y, smooth_window)
    i = int(np.argmax(y))
    if i == 0 or i == y.size - 1:
        raise ValueError("no interior maximum found within the trace")
    # Parabola through the three samples around the discrete maximum.
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return Extremum(float(x[i]), float(y1))
    shift = 0.5 * (y0 - y2) / denom
    shift = float(np.clip(shift, -1.0, 1.0))
    dx = x[i + 1] - x[i] if shift >= 0 else x[i] - x[i - 1]
    pos = float(x[i] + shift * dx)
    amp = float(y1 - 0.25 * (y0 - y2) * shift)
    return Extremum(pos, amp)
