"""Elliptic integral and Jacobi cn against scipy and identity oracles."""

import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings
from hypothesis import strategies as st

from qfel.specfun import EllipticModulus, elliptic_K, jacobi_cn, modulus_from_seed

# scipy works with the parameter m = k**2; the package works with the
# modulus k.  The explicit conversion below is the point of the contract.
MODULI = [0.0, 0.05, 0.3, 0.5, 1 / np.sqrt(2.0), 0.9, 0.95346, 0.999, 0.999999]


class TestEllipticK:
    def test_value_at_zero_is_exact(self):
        assert elliptic_K(0.0) == np.pi / 2

    def test_against_scipy_over_modulus_range(self):
        for k in MODULI:
            assert elliptic_K(k) == pytest.approx(sps.ellipk(k * k), rel=1e-14, abs=1e-14)

    def test_reference_point_half_sqrt2(self):
        # Lemniscatic value, frozen from an independent AGM evaluation.
        assert abs(elliptic_K(1.0 / np.sqrt(2.0)) - 1.8540746773013717) < 1e-15

    def test_monotone_increasing(self):
        values = [elliptic_K(k) for k in MODULI]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("bad", [-0.1, 1.0, 1.5, np.inf])
    def test_domain_rejection(self, bad):
        with pytest.raises(ValueError, match="modulus"):
            elliptic_K(bad)


class TestJacobiCn:
    def test_against_scipy_on_grid(self):
        u = np.linspace(-30.0, 30.0, 601)
        for k in MODULI:
            expected = sps.ellipj(u, k * k)[1]  # (sn, cn, dn, ph)
            assert np.max(np.abs(jacobi_cn(u, k) - expected)) < 1e-10

    def test_scalar_input_returns_float(self):
        out = jacobi_cn(0.3, 0.5)
        assert isinstance(out, float)
        assert out == pytest.approx(sps.ellipj(0.3, 0.25)[1], abs=1e-12)

    def test_origin_value(self):
        for k in MODULI:
            assert jacobi_cn(0.0, k) == pytest.approx(1.0, abs=1e-12)

    def test_circular_limit(self):
        u = np.linspace(-10, 10, 201)
        assert np.max(np.abs(jacobi_cn(u, 0.0) - np.cos(u))) < 1e-12

    def test_quarter_period_zero(self):
        for k in MODULI[1:]:
            assert abs(jacobi_cn(elliptic_K(k), k)) < 1e-10

    def test_periodicity_4k(self):
        for k in (0.3, 0.7, 0.95346):
            bigk = elliptic_K(k)
            u = np.linspace(-8 * bigk, 8 * bigk, 301)
            assert np.max(np.abs(jacobi_cn(u + 4 * bigk, k) - jacobi_cn(u, k))) < 1e-9

    def test_bounded_and_even(self):
        u = np.linspace(0, 50, 501)
        for k in MODULI:
            cn = jacobi_cn(u, k)
            assert np.max(np.abs(cn)) <= 1.0 + 1e-12
            assert np.max(np.abs(jacobi_cn(-u, k) - cn)) < 1e-12

    @given(
        u=st.floats(min_value=-100.0, max_value=100.0),
        k=st.floats(min_value=0.0, max_value=0.9999),
    )
    @settings(deadline=None, max_examples=150)
    def test_pythagorean_identity_against_scipy(self, u, k):
        cn = jacobi_cn(u, k)
        sn_ref, cn_ref = sps.ellipj(u, k * k)[:2]
        assert cn == pytest.approx(cn_ref, abs=1e-9)
        assert cn * cn + sn_ref * sn_ref == pytest.approx(1.0, abs=1e-9)


class TestModulus:
    def test_constraint(self):
        with pytest.raises(ValueError):
            EllipticModulus(1.0)
        with pytest.raises(ValueError):
            EllipticModulus(-0.2)
        assert float(EllipticModulus(0.5)) == 0.5

    def test_seed_modulus_reference_value(self):
        # k = (1 + 0.1)**-1/2, frozen.
        assert modulus_from_seed(100, 1000) == pytest.approx(0.9534625892455922, abs=1e-15)

    def test_seedless_field_rejected(self):
        with pytest.raises(ValueError, match="modulus"):
            modulus_from_seed(0.0, 1000)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            modulus_from_seed(-1.0, 10)
        with pytest.raises(ValueError):
            modulus_from_seed(1.0, 0)

    @given(
        n0=st.floats(min_value=1e-6, max_value=1e6),
        N=st.integers(min_value=1, max_value=10**6),
    )
    @settings(deadline=None, max_examples=100)
    def test_always_a_valid_modulus(self, n0, N):
        k = modulus_from_seed(n0, N)
        assert 0.0 < float(k) < 1.0
