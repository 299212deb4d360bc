"""Parameter validation, state containers, banded operators, trace tooling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfel.core import (
    BandedHermitianOperator,
    DickeState,
    FelParams,
    LadderState,
    Trace,
    boxcar_smooth,
    dicke_photon_number,
    first_maximum,
    level_populations,
    photon_change,
)


class TestFelParams:
    def test_defaults_resolve(self):
        p = FelParams(alpha=0.25)
        assert p.nu == 1
        assert p.ladder_halfwidth == 9  # |nu| + 8
        assert p.context == "low"

    def test_ladder_halfwidth_override(self):
        assert FelParams(alpha=0.25, nu=2, M=15).ladder_halfwidth == 15

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha": 0.0},
            {"alpha": -1.0},
            {"alpha": 0.25, "context": "medium"},
            {"alpha": 0.25, "nu": 0},
            {"alpha": 0.25, "nu": 1.5},
            {"alpha": 0.25, "n0": -1.0},
            {"alpha": 0.25, "N": 0},
            {"alpha": 0.25, "nu": 2, "M": 4},  # below |nu| + 3
        ],
    )
    def test_rejections(self, kwargs):
        with pytest.raises(ValueError):
            FelParams(**kwargs)

    def test_alpha_above_one_warns(self):
        with pytest.warns(UserWarning, match="quantum regime"):
            FelParams(alpha=1.5)

    def test_mirrored_resonance_allowed(self):
        p = FelParams(alpha=0.25, nu=-2)
        assert p.ladder_halfwidth == 10

    def test_time_conversions(self):
        p = FelParams(alpha=0.25, nu=2, n0=100, N=1000, context="high")
        # L/(2 L_g) = alpha * tau, so tau = ell / (2 alpha).
        assert p.tau_from_length(1.0) == pytest.approx(2.0)
        # Omega t = alpha_n * tau with alpha_n = alpha sqrt(n0/N).
        assert p.rabi_phase(8.0) == pytest.approx(0.25 * 8.0)
        assert p.seed_ratio == pytest.approx(0.1)

    def test_epsilon_default_in_high_context(self):
        p = FelParams(alpha=0.25, nu=2, n0=100, N=400, context="high")
        assert p.epsilon == pytest.approx(0.25 / 20.0)


class TestStates:
    def test_initial_ladder_state(self):
        p = FelParams(alpha=0.25, nu=3)
        s = LadderState.initial(p)
        assert s.amplitudes.size == 2 * p.ladder_halfwidth + 1
        assert s.norm == pytest.approx(1.0)
        assert s.amplitudes[p.ladder_halfwidth] == 1.0  # all weight on mu = 0
        assert s.mu_values[0] == -p.ladder_halfwidth
        assert s.mu_values[-1] == p.ladder_halfwidth

    def test_level_populations_keys_and_sum(self):
        p = FelParams(alpha=0.25, nu=1)
        pops = level_populations(LadderState.initial(p))
        assert set(pops) == set(range(-9, 10))
        assert sum(pops.values()) == pytest.approx(1.0)

    def test_seeded_dicke_state(self):
        s = DickeState.seeded(N=12, n0=3.0, photon_step=2)
        assert s.c.size == 13
        assert s.c[0] == 1.0
        assert s.norm == pytest.approx(1.0)
        assert s.N == 12

    def test_photon_change_is_weighted_level_sum(self):
        pops = {-1: 0.25, 0: 0.5, 1: 0.25}
        assert photon_change(pops, N=4) == pytest.approx(0.0)
        pops = {0: 0.4, 1: 0.6}
        assert photon_change(pops, N=10) == pytest.approx(6.0)

    def test_photon_change_rejects_broken_norm(self):
        with pytest.raises(ValueError, match="norm"):
            photon_change({0: 0.5, 1: 0.4}, N=1)

    @given(
        n0=st.floats(min_value=0.0, max_value=50.0),
        step=st.sampled_from([1, 2]),
        weights=st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=2, max_size=9),
    )
    @settings(deadline=None, max_examples=60)
    def test_dicke_photon_number_matches_direct_sum(self, n0, step, weights):
        w = np.asarray(weights, dtype=float) + 1e-3
        c = np.sqrt(w / w.sum()).astype(complex)
        state = DickeState(c=c, photon_step=step, n0=n0)
        expected = sum(abs(c[mu]) ** 2 * (n0 + step * mu) for mu in range(c.size))
        assert dicke_photon_number(state) == pytest.approx(expected, rel=1e-12)


class TestBandedOperator:
    def test_dense_is_hermitian_with_phases(self):
        rng = np.random.default_rng(7)
        size = 6
        op = BandedHermitianOperator(
            size=size,
            bands={0: rng.normal(size=size), 1: rng.normal(size=size - 1) + 0j},
            freqs={1: rng.normal(size=size - 1)},
        )
        for tau in (0.0, 0.7, 2.31):
            h = op.dense(tau)
            assert np.allclose(h, h.conj().T, atol=1e-15)

    def test_band_shape_validation(self):
        with pytest.raises(ValueError):
            BandedHermitianOperator(size=4, bands={1: np.ones(2)})

    def test_diagonal_must_be_real(self):
        with pytest.raises(ValueError):
            BandedHermitianOperator(size=3, bands={0: np.array([1.0, 2.0, 1j])})

    def test_static_property_and_tridiagonal_parts(self):
        op = BandedHermitianOperator(size=3, bands={0: np.arange(3.0), 1: np.ones(2)})
        assert op.is_static
        diag, off = op.tridiagonal_parts()
        assert np.array_equal(diag, np.arange(3.0))
        assert np.array_equal(off, np.ones(2))
        assert op.half_bandwidth == 1


class TestTrace:
    def test_column_access_and_validation(self):
        x = np.linspace(0, 1, 5)
        t = Trace(axis_label="tau", x=x, columns={"y": x**2})
        assert np.array_equal(t.column("y"), x**2)
        with pytest.raises(ValueError):
            Trace(axis_label="tau", x=x[::-1], columns={"y": x})
        with pytest.raises(ValueError):
            Trace(axis_label="tau", x=x, columns={"y": x[:-1]})


class TestSmoothingAndExtrema:
    def test_boxcar_passthrough_for_nonpositive_window(self):
        x = np.linspace(0, 1, 10)
        xs, ys = boxcar_smooth(x, x, 0.0)
        assert np.array_equal(xs, x)
        assert np.array_equal(ys, x)

    def test_boxcar_preserves_constants_and_trims(self):
        x = np.linspace(0, 10, 101)
        y = np.full_like(x, 3.5)
        xs, ys = boxcar_smooth(x, y, 1.0)
        assert xs.size == ys.size
        assert xs.size < x.size
        assert np.allclose(ys, 3.5)

    def test_boxcar_rejects_window_longer_than_trace(self):
        x = np.linspace(0, 1, 10)
        with pytest.raises(ValueError, match="window"):
            boxcar_smooth(x, x, 5.0)

    def test_first_maximum_refines_parabola_exactly(self):
        x = np.linspace(0, np.pi, 1001)
        y = np.sin(x) ** 2
        ext = first_maximum(x, y)
        assert ext.position == pytest.approx(np.pi / 2, abs=1e-6)
        assert ext.amplitude == pytest.approx(1.0, abs=1e-8)

    def test_first_maximum_needs_interior_peak(self):
        x = np.linspace(0, 1, 50)
        with pytest.raises(ValueError, match="maximum"):
            first_maximum(x, x)  # monotone: maximum sits on the boundary

    def test_first_maximum_with_smoothing_tracks_envelope(self):
        x = np.linspace(0, np.pi, 4001)
        ripple = 0.05 * np.sin(40 * x)
        y = np.sin(x) ** 2 + ripple
        ext = first_maximum(x, y, smooth_window=2 * np.pi / 40)
        assert ext.position == pytest.approx(np.pi / 2, abs=5e-3)
