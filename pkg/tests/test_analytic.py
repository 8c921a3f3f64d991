import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import eval_legendre

from tmsv_parity import analytic
from tmsv_parity.analytic import LimitsReport, PhaseGrid
from tmsv_parity.errors import DegenerateStateError, DivergenceError, DomainError


def fd_sensitivity(signal, phi, h=1e-4):
    """Plain five-point derivative; kept separate from the package's error propagation."""
    d = (-signal(phi + 2 * h) + 8 * signal(phi + h) - 8 * signal(phi - h) + signal(phi - 2 * h)) / (12 * h)
    return math.sqrt(1 - signal(phi) ** 2) / abs(d)


class TestLegendre:
    @pytest.mark.parametrize("x", [-1.0, -0.3, 0.0, 0.8, 1.0])
    def test_base_cases(self, x):
        assert analytic.legendre_P(0, x) == 1.0
        assert analytic.legendre_P(1, x) == x

    def test_p2_at_zero(self):
        assert analytic.legendre_P(2, 0.0) == -0.5

    def test_endpoint(self):
        for n in range(51):
            assert analytic.legendre_P(n, 1.0) == pytest.approx(1.0, abs=1e-13)

    @given(st.integers(0, 100), st.floats(-1, 1))
    def test_matches_scipy(self, n, x):
        assert abs(analytic.legendre_P(n, x) - eval_legendre(n, x)) < 1e-12

    @given(st.integers(0, 100), st.floats(-1, 1))
    def test_bounded(self, n, x):
        assert abs(analytic.legendre_P(n, x)) <= 1.0 + 1e-13

    def test_domain(self):
        with pytest.raises(DomainError):
            analytic.legendre_P(3, 1.01)


class TestParityForms:
    def test_twin_fock_vacuum(self):
        for phi in np.linspace(-3, 3, 7):
            assert analytic.parity_twin_fock(0, phi) == 1.0

    def test_twin_fock_two_at_quarter_pi(self):
        assert analytic.parity_twin_fock(2, math.pi / 4) == pytest.approx(-0.5, abs=1e-15)

    def test_tmsv_values(self):
        assert analytic.parity_tmsv(7.0, 0.0) == 1.0
        assert analytic.parity_tmsv(10.0, math.pi / 2) == pytest.approx(1 / 11, rel=1e-15)
        with pytest.raises(DomainError):
            analytic.parity_tmsv(-1.0, 0.2)

    @pytest.mark.parametrize("nbar", [1.0, 5.0, 10.0])
    def test_tmsv_equals_twin_fock_series(self, nbar):
        t = nbar / (nbar + 2)
        n_max = math.ceil(math.log(1e-14) / math.log(t))
        for phi in np.linspace(-math.pi, math.pi, 41):
            # raw twin-Fock parities read a quarter period later
            series = (1 - t) * sum(
                t ** n * (-1) ** n * eval_legendre(n, math.cos(2 * (phi + math.pi / 2))) for n in range(n_max + 1)
            )
            assert abs(analytic.parity_tmsv(nbar, phi) - series) < 1e-8
            assert abs(analytic.parity_tmsv_series(nbar, phi, n_max) - series) < 1e-12

    def test_coherent(self):
        assert analytic.parity_coherent(30.0, 0.0) == 1.0
        for phi in (0.3, 1.7, -2.5):
            assert analytic.parity_coherent(4.0, phi) == pytest.approx(
                analytic.parity_coherent(4.0, phi + 2 * math.pi), rel=1e-12
            )

    @given(st.floats(0, 100), st.floats(-10, 10))
    def test_tmsv_even_and_pi_periodic(self, nbar, phi):
        v = analytic.parity_tmsv(nbar, phi)
        assert 0 < v <= 1
        assert v == pytest.approx(analytic.parity_tmsv(nbar, -phi), rel=1e-12)
        assert v == pytest.approx(analytic.parity_tmsv(nbar, phi + math.pi), rel=1e-9)

    def test_width_ratio(self):
        tmsv_w = analytic.peak_width(lambda p: analytic.parity_tmsv(10.0, p))
        coh_w = analytic.peak_width(lambda p: analytic.parity_coherent(100.0, p))
        # closed-form widths at level 1/sqrt(2)
        assert tmsv_w == pytest.approx(2 * math.asin(math.sqrt(1 / 120)), abs=1e-8)
        assert coh_w == pytest.approx(4 * math.asin(math.sqrt(math.log(2) / 400)), abs=1e-8)
        assert 0.9 <= tmsv_w / coh_w <= 1.1


class TestSensitivity:
    def test_tmsv_at_origin(self):
        assert analytic.sensitivity_tmsv(10.0, 0.0) == pytest.approx(1 / math.sqrt(120), rel=1e-15)
        assert analytic.sensitivity_tmsv(10.0, 0.0) < 0.1

    @given(st.floats(1e-3, 1e3))
    def test_tmsv_origin_times_root_qfi(self, nbar):
        a = nbar * (nbar + 2)
        assert analytic.sensitivity_tmsv(nbar, 0.0) * math.sqrt(a) == pytest.approx(1.0, rel=1e-14)

    def test_tmsv_finite_difference(self):
        signal = lambda p: analytic.parity_tmsv(10.0, p)
        assert analytic.sensitivity_tmsv(10.0, 0.01) == pytest.approx(fd_sensitivity(signal, 0.01, 1e-5), rel=1e-6)

    def test_tmsv_diverges(self):
        with pytest.raises(DivergenceError):
            analytic.sensitivity_tmsv(3.0, math.pi / 2)

    @pytest.mark.parametrize("phi", [0.05, 0.3, 1.0, -2.0])
    def test_coherent_finite_difference(self, phi):
        signal = lambda p: analytic.parity_coherent(4.0, p)
        assert analytic.sensitivity_coherent(4.0, phi) == pytest.approx(fd_sensitivity(signal, phi), rel=1e-6)
        assert analytic.sensitivity_coherent(25.0, 0.0) == pytest.approx(0.2)

    def test_taylor_at_origin(self):
        for nbar in (1.0, 5.0, 25.0):
            assert analytic.sensitivity_tmsv_taylor(nbar, 0.0) == pytest.approx(1 / math.sqrt(nbar * (nbar + 2)))
            assert analytic.sensitivity_coherent_taylor(nbar, 0.0) == pytest.approx(1 / math.sqrt(nbar))
        assert analytic.sensitivity_coherent_taylor(25.0, 0.0) == pytest.approx(0.2, rel=1e-15)

    @pytest.mark.parametrize("nbar", [1.0, 5.0, 25.0, 100.0])
    def test_tmsv_taylor_near_origin(self, nbar):
        a = nbar * (nbar + 2)
        for phi in np.linspace(-0.01 / math.sqrt(a), 0.01 / math.sqrt(a), 21):
            exact = analytic.sensitivity_tmsv(nbar, phi)
            assert abs(analytic.sensitivity_tmsv_taylor(nbar, phi) / exact - 1) < 1e-3

    @given(st.floats(0.01, 50))
    def test_ordering_at_origin(self, nbar):
        d = analytic.sensitivity_tmsv(nbar, 0.0)
        hofmann = 1 / math.sqrt(analytic.second_moment_tmsv(nbar))
        assert hofmann <= d < 1 / nbar
        if nbar > 1:
            assert 1 / nbar < 1 / math.sqrt(nbar)


class TestLimits:
    def test_tmsv_hofmann(self):
        assert analytic.limits(2.0, 12.0).hofmann == pytest.approx(1 / math.sqrt(12))
        assert analytic.limits(2.0, 12.0).hofmann == pytest.approx(0.2887, abs=1e-4)

    @given(st.floats(1, 1e4), st.floats(1, 10))
    def test_ordering(self, nbar, factor):
        lim = analytic.limits(nbar, nbar * nbar * factor)
        assert lim.hofmann <= lim.hl <= lim.snl

    def test_coherent_ordering(self):
        lim = analytic.limits(25.0, analytic.second_moment_coherent(25.0))
        assert 0 < lim.hofmann <= lim.hl <= lim.snl

    @pytest.mark.parametrize("theta", [0.0, 0.3, 1.0])
    def test_rho_hofmann(self, theta):
        lim = analytic.limits(4 * math.cos(theta) ** 2, 16 * math.cos(theta) ** 2)
        assert lim.hofmann == pytest.approx(1 / (4 * math.cos(theta)), rel=1e-14)

    def test_impossible_moments(self):
        with pytest.raises(DomainError):
            analytic.limits(3.0, 8.0)

    def test_report_positive(self):
        with pytest.raises(DomainError):
            LimitsReport(snl=1.0, hl=0.0, hofmann=1.0)

    def test_max_photon_limit(self):
        assert analytic.max_photon_limit(4) == 0.25
        assert analytic.max_photon_limit(None) is None


class TestRho:
    def test_theta_zero(self):
        assert analytic.sensitivity_rho_parity(2, 0.0) == pytest.approx(1 / math.sqrt(12))

    def test_degenerate(self):
        with pytest.raises(DegenerateStateError):
            analytic.sensitivity_rho_parity(2, math.pi / 2)

    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_beats_hl_only_past_crossover(self, n):
        # parity beats 1/nbar exactly when cos(theta) < sqrt((n+1)/(2n))
        crossover = math.acos(math.sqrt((n + 1) / (2 * n)))
        for theta in np.linspace(0.0, 1.5, 151):
            d = analytic.sensitivity_rho_parity(n, theta)
            hl = analytic.limits_rho(n, theta).hl
            if theta > crossover + 1e-9:
                assert d < hl
            elif theta < crossover - 1e-9:
                assert d > hl

    @given(st.integers(1, 20), st.floats(0, 1.5))
    def test_never_beats_hofmann(self, n, theta):
        assert analytic.sensitivity_rho_parity(n, theta) >= analytic.limits_rho(n, theta).hofmann * (1 - 1e-14)

    @pytest.mark.parametrize("n,theta", [(2, 0.0), (2, 0.5), (5, 1.0), (3, 0.2)])
    def test_matches_mixture_error_propagation(self, n, theta):
        s2, c2 = math.sin(theta) ** 2, math.cos(theta) ** 2
        signal = lambda p: s2 + c2 * eval_legendre(n, math.cos(2 * p))
        assert fd_sensitivity(signal, 1e-3, 1e-5) == pytest.approx(analytic.sensitivity_rho_parity(n, theta), rel=1e-5)


class TestPhaseGrid:
    def test_values(self):
        assert np.allclose(PhaseGrid(-1, 1, 5).values(), [-1, -0.5, 0, 0.5, 1])

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, 1, 3), (2, 1, 3)])
    def test_invariants(self, args):
        with pytest.raises(ValueError):
            PhaseGrid(*args)
