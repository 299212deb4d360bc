"""Scenario-driven command line: figure data as CSV, validation, sweeps.

Subcommands
-----------
``fig2``      per-electron gain of the first three resonances vs Rabi phase
``fig3``      collective photon growth, first (``--panel top``) or second
              (``--panel bottom``) resonance, closed forms next to numerics
``fig4``      closed-form photon growth of both resonances side by side
``validate``  runs every cross-route check and reports pass/fail per line
``sweep``     grid campaigns over alpha, n0, resonance with one row per point

Outputs are deterministic: the same scenario always produces byte-identical
CSV (one leading ``# key=value`` comment line recording the resolved
parameters, then a header line, then ``%.12g``-formatted rows).  Scenario
files hold the same keys as the flags, one ``key=value`` per line; flags win
over file values.  Exit codes: 0 success, 1 failed validation or runtime
error, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import validate as validation
from .core import FelParams, LadderState, first_maximum
from .highgain import (
    HighGainModel,
    analytic_n_first,
    analytic_n_second,
    lmax_exact,
    lmax_ratio,
    propagate_dicke,
)
from .lowgain import (
    LowGainModel,
    analytic_dn,
    fit_rabi_frequency,
    gain_frequency,
    propagate,
    ripple_period,
)

__all__ = [
    "Scenario",
    "ScenarioError",
    "main",
    "run_fig2",
    "run_fig3",
    "run_fig4",
    "run_sweep",
    "run_validate",
]


class ScenarioError(ValueError):
    """A scenario asks for an unsupported or ill-formed combination."""


@dataclass(frozen=True)
class Scenario:
    """Resolved parameters of one CLI run.

    Collects everything a subcommand needs after merging scenario-file values
    and flag overrides; every runner validates the combinations it actually
    uses and rejects the rest with a specific message.
    """

    regime: str
    resonance: int
    variant: str | None
    alpha: float
    n0: float
    electrons: int
    levels: int | None
    end: float | None
    samples: int | None
    out: Path


def _fmt(value) -> str:
    """One CSV cell; floats at %.12g keep outputs byte-stable and diffable."""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_csv(out: Path, meta: dict, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    lines = ["# " + " ".join(f"{k}={_fmt(v)}" for k, v in meta.items())]
    lines.append(",".join(header))
    count = 0
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
        count += 1
    out.write_text("\n".join(lines) + "\n", encoding="ascii")
    return count


# ---------------------------------------------------------------------------
# figure runners


def run_fig2(
    alpha: float = 0.25,
    end: float | None = None,
    samples: int | None = None,
    out: Path | str = "fig2.csv",
) -> Path:
    """Gain of the first three resonances vs Rabi phase, closed form and numeric.

    Columns: Omega_t, then the three closed-form dn/N curves, then the three
    full-propagation curves on the same axis.  The default span covers one
    full envelope period of the slowest (third) resonance.
    """
    if alpha <= 0:
        raise ScenarioError("alpha must be positive")
    # Default span: one full envelope period of the slowest (third) resonance.
    end = 1.05 * np.pi * alpha / gain_frequency(3, alpha) if end is None else end
    samples = 4001 if samples is None else samples
    if end <= 0:
        raise ScenarioError("end (Omega*t span) must be positive")
    omega_t = np.linspace(0.0, end, samples)
    tau_end = end / alpha

    columns: list[np.ndarray] = [omega_t]
    header = ["Omega_t"]
    meta = {"subcommand": "fig2", "alpha": alpha, "end": end, "samples": samples}
    for nu in (1, 2, 3):
        columns.append(np.asarray(analytic_dn(nu, alpha, omega_t)))
        header.append(f"dn_analytic_nu{nu}")
    for nu in (1, 2, 3):
        params = FelParams(alpha=alpha, nu=nu, context="low")
        model = LowGainModel(params=params, variant="full_hamiltonian")
        trace = propagate(model, LadderState.initial(params), tau_end, samples)
        columns.append(trace.column("dn_per_N"))
        header.append(f"dn_numeric_nu{nu}")
        meta[f"levels_nu{nu}"] = params.ladder_halfwidth
    out = Path(out)
    _write_csv(out, meta, header, zip(*columns))
    return out


_FIG3_DEFAULTS = {
    "top": {"alpha": 0.5, "resonance": 1, "end": 7.0, "samples": 501, "out": "fig3_top.csv"},
    "bottom": {"alpha": 0.25, "resonance": 2, "end": 45.0, "samples": 601, "out": "fig3_bottom.csv"},
}


def run_fig3(
    panel: str,
    alpha: float | None = None,
    n0: float | None = None,
    electrons: int | None = None,
    end: float | None = None,
    samples: int | None = None,
    out: Path | str | None = None,
) -> Path:
    """Collective photon growth against the matching closed forms.

    ``top``: first resonance — both analytic orders next to the third-order
    numeric model.  ``bottom``: second resonance — the mean-field closed form
    next to the pair-coupling-only and full numeric models.
    """
    if panel not in _FIG3_DEFAULTS:
        raise ScenarioError(f"panel must be 'top' or 'bottom', got {panel!r}")
    d = _FIG3_DEFAULTS[panel]
    alpha = d["alpha"] if alpha is None else alpha
    n0 = 1000.0 if n0 is None else n0
    electrons = 10_000 if electrons is None else electrons
    end = d["end"] if end is None else end
    samples = d["samples"] if samples is None else samples
    out = Path(d["out"] if out is None else out)
    nu = d["resonance"]
    if n0 <= 0:
        raise ScenarioError("the collective closed forms need a seeded field: n0 > 0")

    params = FelParams(alpha=alpha, nu=nu, n0=n0, N=electrons, context="high")
    meta = {
        "subcommand": "fig3",
        "panel": panel,
        "alpha": alpha,
        "n0": n0,
        "electrons": electrons,
        "end": end,
        "samples": samples,
    }
    ell = np.linspace(0.0, end, samples)
    if panel == "top":
        header = ["L_over_Lg", "n_analytic_order3", "n_analytic_order1", "n_numeric_third_order"]
        numeric = propagate_dicke(HighGainModel(params=params, variant="third_order"), end, samples)
        columns = [
            ell,
            np.asarray(analytic_n_first(ell, params, order=3)),
            np.asarray(analytic_n_first(ell, params, order=1)),
            numeric.column("n"),
        ]
    else:
        header = ["L_over_Lg", "n_analytic", "n_numeric_dicke_only", "n_numeric_full_second_order"]
        pair = propagate_dicke(HighGainModel(params=params, variant="dicke_only"), end, samples)
        full = propagate_dicke(HighGainModel(params=params, variant="full_second_order"), end, samples)
        columns = [
            ell,
            np.asarray(analytic_n_second(ell, params)),
            pair.column("n"),
            full.column("n"),
        ]
    _write_csv(out, meta, header, zip(*columns))
    return out


def run_fig4(
    alpha: float = 0.25,
    n0: float | None = None,
    electrons: int | None = None,
    end: float | None = None,
    samples: int | None = None,
    out: Path | str = "fig4.csv",
) -> Path:
    """Closed-form photon growth of both resonances on one axis.

    Shows the height/length trade-off: the second resonance tops out two
    photons per electron above the seed but needs a much longer interaction
    length.  The default span covers both first maxima.
    """
    electrons = 10_000 if electrons is None else electrons
    n0 = 0.1 * electrons if n0 is None else n0
    samples = 1201 if samples is None else samples
    if n0 <= 0:
        raise ScenarioError("the collective closed forms need a seeded field: n0 > 0")
    p1 = FelParams(alpha=alpha, nu=1, n0=n0, N=electrons, context="high")
    p2 = FelParams(alpha=alpha, nu=2, n0=n0, N=electrons, context="high")
    if end is None:
        end = 1.2 * max(lmax_exact(p1, 1), lmax_exact(p2, 2))
    ell = np.linspace(0.0, end, samples)
    meta = {
        "subcommand": "fig4",
        "alpha": alpha,
        "n0": n0,
        "electrons": electrons,
        "end": end,
        "samples": samples,
    }
    header = ["L_over_Lg", "n_first_resonance", "n_second_resonance"]
    columns = [
        ell,
        np.asarray(analytic_n_first(ell, p1, order=3)),
        np.asarray(analytic_n_second(ell, p2)),
    ]
    out = Path(out)
    _write_csv(out, meta, header, zip(*columns))
    return out


# ---------------------------------------------------------------------------
# validation


def run_validate(stream=None) -> int:
    """Print one pass/fail line per check with measured values; 0 iff all pass."""
    stream = stream or sys.stdout
    results = validation.run_all()
    for result in results:
        print(result.line(), file=stream)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed", file=stream)
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------
# sweep campaigns

_SWEEP_HEADER = [
    "alpha",
    "n0",
    "electrons",
    "resonance",
    "fitted_frequency",
    "max_amplitude",
    "max_position",
    "length_ratio_shorthand",
    "length_ratio_exact",
    "error",
]


def _sweep_point_low(
    alpha: float, n0: float, nu: int, electrons: int, variant: str, end: float | None, samples: int
) -> list:
    row: list = [alpha, n0, electrons, nu, math.nan, math.nan, math.nan, math.nan, math.nan, ""]
    try:
        params = FelParams(alpha=alpha, nu=nu, context="low")
        model = LowGainModel(params=params, variant=variant)
        tau_end = 1.05 * np.pi / gain_frequency(nu, alpha) if end is None else end
        trace = propagate(model, LadderState.initial(params), tau_end, samples)
        window = ripple_period(params) if variant == "full_hamiltonian" else 0.0
        row[4] = fit_rabi_frequency(trace, smooth_window=window)
        peak = first_maximum(trace.x, trace.column("dn_per_N"))
        row[5] = peak.amplitude
        row[6] = peak.position
    except Exception as err:  # noqa: BLE001 - per-point failures land in the error column
        row[9] = _sanitize(err)
    return row


def _sweep_point_high(alpha: float, n0: float, nu: int, electrons: int) -> list:
    row: list = [alpha, n0, electrons, nu, math.nan, math.nan, math.nan, math.nan, math.nan, ""]
    errors: list[str] = []
    try:
        params = FelParams(alpha=alpha, nu=nu, n0=n0, N=electrons, context="high")
        row[5] = n0 + nu * electrons  # closed-form ceiling of the first maximum
        row[6] = lmax_exact(params, nu)
    except Exception as err:  # noqa: BLE001
        errors.append(_sanitize(err))
    try:
        row[7] = lmax_ratio(alpha, n0 / electrons)
        p = FelParams(alpha=alpha, nu=2, n0=n0, N=electrons, context="high")
        row[8] = lmax_exact(p, 2) / lmax_exact(p, 1)
    except Exception as err:  # noqa: BLE001
        errors.append(_sanitize(err))
    row[9] = "; ".join(errors)
    return row


def _sanitize(err: Exception) -> str:
    """Error-cell text: keep the CSV one-line and comma-free."""
    return str(err).replace(",", ";").replace("\n", " ")


def run_sweep(
    regime: str = "low",
    alphas: Sequence[float] = (0.1, 0.2, 0.3),
    n0s: Sequence[float] | None = None,
    resonances: Sequence[int] | None = None,
    electrons: int | None = None,
    variant: str | None = None,
    end: float | None = None,
    samples: int | None = None,
    jobs: int = 1,
    out: Path | str = "sweep.csv",
) -> Path:
    """One row per (alpha, n0, resonance) grid point; failures stay in-row.

    Low regime: propagates the momentum ladder and fits the effective Rabi
    frequency plus the first gain maximum.  High regime: evaluates the
    closed-form maxima and the exact vs shorthand interaction-length ratio
    (no propagation, so wide grids stay cheap).  Points run concurrently with
    ``jobs`` > 1; rows are always emitted in grid order, so parallel output
    is identical to serial output.
    """
    if regime not in ("low", "high"):
        raise ScenarioError(f"regime must be 'low' or 'high', got {regime!r}")
    if regime == "low":
        n0s = (0.0,) if n0s is None else n0s
        resonances = (1, 2, 3) if resonances is None else resonances
        electrons = 1 if electrons is None else electrons
        variant = "full_hamiltonian" if variant is None else variant
        if variant not in ("full_hamiltonian", "effective"):
            raise ScenarioError(
                f"low-gain sweep variant must be 'full_hamiltonian' or 'effective', got {variant!r}"
            )
        samples = 2001 if samples is None else samples
    else:
        n0s = (1000.0,) if n0s is None else n0s
        resonances = (1, 2) if resonances is None else resonances
        electrons = 10_000 if electrons is None else electrons
        if variant is not None:
            raise ScenarioError("the high-gain sweep is closed-form only; --variant does not apply")
        if end is not None or samples is not None:
            raise ScenarioError("the high-gain sweep is closed-form only; --end/--samples do not apply")

    grid = [(a, n0, nu) for a in alphas for n0 in n0s for nu in resonances]

    def point(args: tuple[float, float, int]) -> list:
        a, n0, nu = args
        if regime == "low":
            return _sweep_point_low(a, n0, nu, electrons, variant, end, samples)
        return _sweep_point_high(a, n0, nu, electrons)

    if jobs > 1 and grid:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(point, grid))
    else:
        rows = [point(g) for g in grid]

    meta = {
        "subcommand": "sweep",
        "regime": regime,
        "alpha": ",".join(_fmt(a) for a in alphas),
        "n0": ",".join(_fmt(v) for v in n0s),
        "resonance": ",".join(str(r) for r in resonances),
        "electrons": electrons,
    }
    if regime == "low":
        meta["variant"] = variant
        meta["end"] = "auto" if end is None else end
        meta["samples"] = samples
    out = Path(out)
    _write_csv(out, meta, _SWEEP_HEADER, rows)
    return out


# ---------------------------------------------------------------------------
# option plumbing: scenario files + flags, converted by one table


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as err:
        raise ScenarioError(f"expected a number, got {text!r}") from err


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as err:
        raise ScenarioError(f"expected an integer, got {text!r}") from err


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(_parse_float(part) for part in text.split(",") if part != "")


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(_parse_int(part) for part in text.split(",") if part != "")


def _parse_choice(*choices: str) -> Callable[[str], str]:
    def convert(text: str) -> str:
        if text not in choices:
            raise ScenarioError(f"expected one of {', '.join(choices)}; got {text!r}")
        return text

    return convert


_OPTION_KINDS: dict[str, dict[str, Callable[[str], object]]] = {
    "fig2": {
        "alpha": _parse_float,
        "end": _parse_float,
        "samples": _parse_int,
        "out": str,
    },
    "fig3": {
        "panel": _parse_choice("top", "bottom"),
        "alpha": _parse_float,
        "n0": _parse_float,
        "electrons": _parse_int,
        "end": _parse_float,
        "samples": _parse_int,
        "out": str,
    },
    "fig4": {
        "alpha": _parse_float,
        "n0": _parse_float,
        "electrons": _parse_int,
        "end": _parse_float,
        "samples": _parse_int,
        "out": str,
    },
    "sweep": {
        "regime": _parse_choice("low", "high"),
        "alpha": _parse_float_list,
        "n0": _parse_float_list,
        "resonance": _parse_int_list,
        "electrons": _parse_int,
        "variant": str,
        "end": _parse_float,
        "samples": _parse_int,
        "jobs": _parse_int,
        "out": str,
    },
    "validate": {},
}


def _read_scenario_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ScenarioError(f"cannot read scenario file: {err}") from err
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ScenarioError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve_options(args: argparse.Namespace) -> dict[str, object]:
    """Merge scenario-file values under flag values and convert both."""
    kinds = _OPTION_KINDS[args.command]
    raw: dict[str, str] = {}
    if getattr(args, "config", None):
        for key, value in _read_scenario_file(args.config).items():
            if key not in kinds:
                raise ScenarioError(
                    f"unknown scenario key {key!r} for {args.command} "
                    f"(known: {', '.join(sorted(kinds)) or 'none'})"
                )
            raw[key] = value
    for key in kinds:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            raw[key] = flag_value
    return {key: kinds[key](value) for key, value in raw.items()}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfel",
        description="Quantum-regime free-electron-laser dynamics: figure data, validation, sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="scenario file of key=value lines; flags win")
        for key in _OPTION_KINDS[name]:
            flag_help = {
                "alpha": "quantum parameter (comma list for sweep)",
                "n0": "seed photon number (comma list for sweep)",
                "electrons": "number of electrons N",
                "resonance": "comma list of resonance orders",
                "variant": "model variant where a module offers several",
                "end": "span of the x axis (Omega*t for fig2, tau for the low-gain sweep, L/L_g otherwise)",
                "samples": "number of output samples",
                "out": "output CSV path",
                "panel": "which figure panel: top or bottom",
                "regime": "low (ladder) or high (collective closed forms)",
                "jobs": "concurrent grid points",
            }[key]
            p.add_argument(f"--{key}", help=flag_help)
        return p

    add("fig2", "gain of the three lowest resonances vs Rabi phase (closed form + numeric)")
    add("fig3", "collective photon growth vs closed forms, one resonance per panel")
    add("fig4", "closed-form photon growth of both resonances on one axis")
    add("validate", "run all cross-route checks and report pass/fail per line")
    add("sweep", "grid campaign over alpha, n0, resonance; one CSV row per point")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = _resolve_options(args)
        if args.command == "validate":
            return run_validate()
        if args.command == "fig2":
            path = run_fig2(**opts)
        elif args.command == "fig3":
            if "panel" not in opts:
                raise ScenarioError("fig3 needs --panel top or --panel bottom")
            path = run_fig3(**opts)
        elif args.command == "fig4":
            path = run_fig4(**opts)
        else:
            renames = {"alpha": "alphas", "n0": "n0s", "resonance": "resonances"}
            path = run_sweep(**{renames.get(k, k): v for k, v in opts.items()})
        print(f"wrote {path}")
        return 0
    except ScenarioError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover - exercised via the console script
    sys.exit(main())
