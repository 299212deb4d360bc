"""Momentum-ladder dynamics: builders, route agreement, closed forms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import expm_populations, ode_populations
from qfel.core import FelParams, LadderState, Trace, first_maximum
from qfel.lowgain import (
    SUPPORTED_ORDERS,
    LowGainModel,
    analytic_dn,
    analytic_populations_second,
    analytic_populations_third,
    build_effective_hamiltonian,
    build_full_hamiltonian,
    fit_rabi_frequency,
    gain_frequency,
    gain_from_state,
    momentum_label_to_level,
    propagate,
    ripple_period,
    rotating_frame_hamiltonian,
)


def _params(nu, alpha=0.25, **kw):
    return FelParams(alpha=alpha, nu=nu, context="low", **kw)


class TestFullHamiltonian:
    def test_structure_and_resonant_pair(self):
        p = _params(1, M=5)
        op = build_full_hamiltonian(p)
        assert op.size == 11
        assert np.allclose(np.abs(op.bands[1]), 0.25)
        mus = np.arange(-5, 5)
        assert np.array_equal(op.freqs[1], -2.0 * mus)  # nu - 2mu - 1 at nu = 1
        # Exactly the (0, 1) transition is stationary for nu = 1 ...
        assert op.freqs[1][5] == 0.0
        assert np.count_nonzero(op.freqs[1] == 0) == 1
        # ... and no single-step transition is stationary for nu = 2.
        assert np.all(build_full_hamiltonian(_params(2, M=5)).freqs[1] != 0)

    def test_dense_matches_explicit_matrix(self):
        p = _params(2, M=5)
        op = build_full_hamiltonian(p)
        tau = 0.83
        m = 5
        expected = np.zeros((11, 11), dtype=complex)
        for row, mu in enumerate(range(-m, m)):
            entry = p.alpha * np.exp(1j * (p.nu - 2 * mu - 1) * tau)
            expected[row, row + 1] = entry
            expected[row + 1, row] = np.conj(entry)
        assert np.allclose(op.dense(tau), expected, atol=1e-15)

    def test_rotating_frame_has_kinetic_diagonal(self):
        p = _params(3, M=6)
        op = rotating_frame_hamiltonian(p)
        mus = np.arange(-6, 7)
        assert np.allclose(op.bands[0], (1.5 - mus) ** 2)
        assert np.allclose(op.bands[1], p.alpha)
        assert op.is_static


class TestRouteAgreement:
    def test_full_propagation_matches_direct_ode_integration(self):
        # The static-frame shortcut must reproduce brute-force integration
        # of the oscillating-coupling Hamiltonian, population by population.
        p = _params(1, alpha=0.3, M=6)
        op = build_full_hamiltonian(p)
        psi0 = np.zeros(13, dtype=complex)
        psi0[6] = 1.0
        taus = np.linspace(0.0, 6.0, 7)
        reference = ode_populations(op, psi0, taus)
        model = LowGainModel(params=p, variant="full_hamiltonian")
        trace = propagate(model, LadderState.initial(p), 6.0, 7)
        for i in range(1, 7):
            for mu in range(-4, 5):
                assert trace.column(f"P[{mu}]")[i] == pytest.approx(
                    reference[i, mu + 6], abs=1e-9
                )

    def test_effective_propagation_matches_expm_oracle(self):
        p = _params(2, alpha=0.25, M=6)
        op = build_effective_hamiltonian(p)
        psi0 = np.zeros(13, dtype=complex)
        psi0[6] = 1.0
        taus = [0.0, 4.0, 8.0]
        reference = expm_populations(op, psi0, taus)
        model = LowGainModel(params=p, variant="effective")
        trace = propagate(model, LadderState.initial(p), 8.0, 3)
        for i in (1, 2):
            for mu in range(-4, 5):
                assert trace.column(f"P[{mu}]")[i] == pytest.approx(
                    reference[i, mu + 6], abs=1e-10
                )

    @pytest.mark.parametrize("nu", [1, 2, 3])
    @pytest.mark.parametrize("alpha", [0.1, 0.25])
    def test_full_vs_effective_gain_within_expansion_error(self, nu, alpha):
        # The two routes are independent models of the same resonance; their
        # per-electron gain must agree to the size of the first neglected
        # expansion term over a full envelope period.
        p = _params(nu, alpha=alpha)
        tau_end = 1.0 * np.pi / gain_frequency(nu, alpha)
        samples = 1501
        full = propagate(
            LowGainModel(params=p, variant="full_hamiltonian"),
            LadderState.initial(p),
            tau_end,
            samples,
        )
        effective = propagate(
            LowGainModel(params=p, variant="effective"),
            LadderState.initial(p),
            tau_end,
            samples,
        )
        gap = np.max(np.abs(full.column("dn_per_N") - effective.column("dn_per_N")))
        # Measured ripple coefficients are ~1.0, ~4.0, ~2.9 per resonance and
        # scale as alpha^2 (the first neglected off-resonant term).
        coefficient = {1: 1.5, 2: 4.5, 3: 3.5}[nu]
        assert gap <= coefficient * alpha**2

    def test_mirrored_resonance_gain_is_antisymmetric(self):
        p = _params(1, alpha=0.25, M=6)
        pm = _params(-1, alpha=0.25, M=6)
        t1 = propagate(LowGainModel(params=p), LadderState.initial(p), 10.0, 101)
        t2 = propagate(LowGainModel(params=pm), LadderState.initial(pm), 10.0, 101)
        assert np.max(np.abs(t1.column("dn_per_N") + t2.column("dn_per_N"))) < 1e-12


class TestEffectiveHamiltonian:
    def test_first_resonance_matrix_elements(self):
        alpha, m = 0.25, 6
        op = build_effective_hamiltonian(_params(1, alpha=alpha, M=m))
        diag = op.bands[0]

        def d(mu):
            return diag[mu + m]

        assert d(0) == pytest.approx(-0.5 * alpha**2)
        assert d(1) == pytest.approx(-0.5 * alpha**2)
        assert d(2) == pytest.approx(alpha**2 / 4.0)
        assert d(-1) == pytest.approx(alpha**2 / 4.0)
        assert d(3) == pytest.approx(alpha**2 / 12.0)
        # Resonant coupling with its third-order correction, and the induced
        # three-step coupling between the neighbours of the resonant pair.
        band1 = op.bands[1]
        assert band1[0 + m] == pytest.approx(alpha - alpha**3 / 4.0)
        assert np.count_nonzero(band1) == 1
        assert op.bands[3][-1 + m] == pytest.approx(alpha**3 / 4.0)

    def test_second_resonance_matrix_elements(self):
        alpha, m = 0.2, 6
        low = build_effective_hamiltonian(_params(2, alpha=alpha, M=m), order=2)
        diag = low.bands[0]
        for mu in (-2, -1, 0, 1, 2, 3):
            expected = 2.0 * alpha**2 / ((2 * mu - 3) * (2 * mu - 1))
            assert diag[mu + m] == pytest.approx(expected), f"mu={mu}"
        assert low.bands[2][0 + m] == pytest.approx(alpha**2)
        assert 1 not in low.bands or not np.any(low.bands[1])

        high = build_effective_hamiltonian(_params(2, alpha=alpha, M=m), order=4)
        assert high.bands[2][0 + m] == pytest.approx(alpha**2 - (16.0 / 9.0) * alpha**4)
        assert high.bands[4][-1 + m] == pytest.approx(alpha**4 / 36.0)

    def test_third_resonance_is_first_shifted_by_one(self):
        # The nu = 3 table maps onto the nu = 1 table translated one level up.
        alpha, m = 0.25, 7
        op1 = build_effective_hamiltonian(_params(1, alpha=alpha, M=m))
        op3 = build_effective_hamiltonian(_params(3, alpha=alpha, M=m))
        d1, d3 = op1.bands[0], op3.bands[0]
        assert np.allclose(d3[1:], d1[:-1])
        assert op3.bands[1][1 + m] == pytest.approx(op1.bands[1][0 + m])
        assert op3.bands[3][0 + m] == pytest.approx(op1.bands[3][-1 + m])

    def test_unsupported_orders_are_rejected(self):
        with pytest.raises(ValueError, match="orders"):
            build_effective_hamiltonian(_params(2), order=3)
        with pytest.raises(ValueError, match="orders"):
            build_effective_hamiltonian(_params(1), order=4)
        with pytest.raises(ValueError, match="resonance"):
            build_effective_hamiltonian(_params(4))
        assert SUPPORTED_ORDERS == {1: (1, 2, 3), 2: (2, 4), 3: (1, 2, 3)}

    def test_order_one_first_resonance_is_exact_rabi(self):
        p = _params(1, alpha=0.25)
        model = LowGainModel(params=_params(1, alpha=0.25, order=1), variant="effective")
        trace = propagate(model, LadderState.initial(p), 30.0, 601)
        expected = np.sin(0.25 * trace.x) ** 2
        assert np.max(np.abs(trace.column("dn_per_N") - expected)) < 1e-12


class TestPropagate:
    def test_rejects_bad_span_and_mismatched_state(self):
        p = _params(1)
        model = LowGainModel(params=p)
        with pytest.raises(ValueError):
            propagate(model, LadderState.initial(p), 0.0)
        wrong = LadderState(nu=1, amplitudes=np.zeros(5, dtype=complex))
        with pytest.raises(ValueError, match="size"):
            propagate(model, wrong, 1.0)

    def test_reports_only_interior_levels(self):
        p = _params(1, M=6)
        trace = propagate(LowGainModel(params=p), LadderState.initial(p), 5.0, 11)
        assert "P[4]" in trace.columns
        assert "P[5]" not in trace.columns  # edge buffer of two levels
        assert "P[6]" not in trace.columns

    def test_initial_row_is_exact(self):
        p = _params(2)
        trace = propagate(LowGainModel(params=p), LadderState.initial(p), 5.0, 11)
        assert trace.column("dn_per_N")[0] == 0.0
        assert trace.column("P[0]")[0] == 1.0
        assert trace.column("norm")[0] == 1.0

    def test_conserves_norm_and_frame_energy(self):
        p = _params(2, alpha=0.25)
        trace = propagate(LowGainModel(params=p), LadderState.initial(p), 80.0, 801)
        assert np.max(np.abs(trace.column("norm") - 1.0)) < 1e-12
        energy = trace.column("energy")
        assert np.max(np.abs(energy - energy[0])) < 1e-12


class TestClosedForms:
    def test_gain_peaks_are_one_two_three(self):
        for nu in (1, 2, 3):
            phase = np.linspace(0, 2 * np.pi / gain_frequency(nu, 0.25) * 0.25, 20001)
            peak = np.max(analytic_dn(nu, 0.25, phase))
            assert peak == pytest.approx(nu, abs=1e-6)

    def test_gain_closed_form_rejects_higher_resonances(self):
        with pytest.raises(ValueError, match="nu"):
            analytic_dn(4, 0.25, 1.0)
        with pytest.raises(ValueError):
            gain_frequency(4, 0.25)

    def test_scalar_phase_gives_scalar_gain(self):
        out = analytic_dn(1, 0.25, 0.0)
        assert isinstance(out, float)
        assert out == 0.0

    @given(alpha=st.floats(min_value=0.01, max_value=0.4))
    @settings(deadline=None, max_examples=50)
    def test_second_resonance_populations_sum_to_one_identically(self, alpha):
        tau = np.linspace(0.0, 3.0 / alpha**2, 401)
        pops = analytic_populations_second(alpha, tau)
        assert set(pops) == {2, 1, 0, -1, -2}
        assert np.max(np.abs(sum(pops.values()) - 1.0)) < 1e-12

    def test_second_resonance_initial_population(self):
        pops = analytic_populations_second(0.25, 0.0)
        assert pops[1] == pytest.approx(1.0)  # all weight at momentum +q
        for k in (2, 0, -1, -2):
            assert pops[k] == pytest.approx(0.0, abs=1e-15)

    @given(alpha=st.floats(min_value=0.01, max_value=0.4))
    @settings(deadline=None, max_examples=50)
    def test_third_resonance_pair_is_a_pure_rabi_cycle(self, alpha):
        tau = np.linspace(0.0, 2.0 / alpha**3, 101)
        up, down = analytic_populations_third(alpha, tau)
        assert np.max(np.abs(up + down - 1.0)) < 1e-12
        assert np.allclose(down, np.sin(alpha**3 / 4.0 * tau) ** 2)

    def test_momentum_label_mapping(self):
        assert momentum_label_to_level(2, 2) == 0  # +q is where nu = 2 starts
        assert momentum_label_to_level(2, 4) == -1
        assert momentum_label_to_level(2, -4) == 3
        assert momentum_label_to_level(1, 1) == 0
        assert momentum_label_to_level(3, -3) == 3
        with pytest.raises(ValueError, match="ladder"):
            momentum_label_to_level(2, 3)


class TestEstimators:
    def test_ripple_periods(self):
        assert ripple_period(_params(1)) == pytest.approx(np.pi)
        assert ripple_period(_params(2)) == pytest.approx(2 * np.pi)
        assert ripple_period(_params(3)) == pytest.approx(np.pi)

    def test_fit_rabi_frequency_on_synthetic_trace(self):
        x = np.linspace(0.0, 20.0, 4001)
        trace = Trace(axis_label="tau", x=x, columns={"dn_per_N": np.sin(0.2 * x) ** 2})
        assert fit_rabi_frequency(trace) == pytest.approx(0.2, rel=1e-6)

    def test_fitted_frequency_tracks_closed_form(self):
        p = _params(1, alpha=0.25)
        tau_end = 1.05 * np.pi / gain_frequency(1, 0.25)
        trace = propagate(LowGainModel(params=p), LadderState.initial(p), tau_end, 4001)
        fitted = fit_rabi_frequency(trace, smooth_window=ripple_period(p))
        assert fitted == pytest.approx(gain_frequency(1, 0.25), rel=0.02)

    def test_gain_from_state_matches_trace_endpoint(self):
        p = _params(1, alpha=0.25, M=6)
        model = LowGainModel(params=p)
        trace = propagate(model, LadderState.initial(p), 4.0, 5)
        op = rotating_frame_hamiltonian(p)
        w, v = np.linalg.eigh(op.dense().real)
        psi0 = np.zeros(13, dtype=complex)
        psi0[6] = 1.0
        psi = v @ (np.exp(-1j * w * 4.0) * (v.T @ psi0))
        state = LadderState(nu=1, amplitudes=psi)
        assert gain_from_state(state) == pytest.approx(
            trace.column("dn_per_N")[-1], abs=1e-12
        )
