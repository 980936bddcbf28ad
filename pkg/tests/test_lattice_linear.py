import numpy as np
import pytest
from scipy import special

from nlsgrowth.fields import InitialData, make_initial_lattice
from nlsgrowth.lattice_linear import (
    InsufficientHalfWidthError,
    StationaryPhaseApprox,
    adversarial_data,
    default_half_width,
    kernel_integral,
    kernel_table,
    linear_evolve,
    pairing_check,
    random_ensemble_second_moment,
    stationary_phase_eval,
)


class TestKernelIntegral:
    def test_t_zero_orthogonality(self):
        assert kernel_integral(0.0, 0) == pytest.approx(1.0)
        assert abs(kernel_integral(0.0, 3)) < 1e-15

    def test_bessel_identity(self):
        # F_n(t) = i^n J_n(t); scipy is a third, independent route
        got = kernel_integral(10.0, 2)
        ref = (1j) ** 2 * special.jv(2, 10.0)
        assert abs(got - ref) < 1e-12

    def test_negative_order(self):
        got = kernel_integral(7.0, -3)
        ref = (1j) ** 3 * special.jv(3, 7.0)  # F_{-n} = i^n J_n for odd n sign flip cancels
        assert abs(abs(got) - abs(ref)) < 1e-12


class TestKernelTable:
    def test_time_zero(self):
        tab = kernel_table(0.0, half_width=5)
        assert tab.value(0) == pytest.approx(1.0)
        for n in range(1, 6):
            assert tab.value(n) == 0.0

    @pytest.mark.parametrize("t", [1.0, 10.0, 50.0, 200.0])
    def test_unitarity(self, t):
        tab = kernel_table(t)
        assert tab.unitarity_deficit() < 1e-12

    def test_even_kernel(self):
        tab = kernel_table(13.0)
        for n in (1, 5, 17):
            assert tab.value(n) == tab.value(-n)

    @pytest.mark.parametrize("t", [10.0, 50.0, 200.0])
    def test_recurrence_matches_quadrature_oracle(self, t):
        # K_n(t) = e^{-2it} F_n(2t); check against the slow adaptive quadrature
        tab = kernel_table(t)
        ns = list(range(0, int(2 * t) + 40, max(1, int(t) // 7)))
        phase = np.exp(-2j * t)
        for n in ns:
            assert abs(tab.value(n) - phase * kernel_integral(2.0 * t, n)) < 1e-12

    def test_pinned_value_t25_n10(self):
        tab = kernel_table(25.0)
        expected = np.exp(-50j) * (1j) ** 10 * special.jv(10, 50.0)
        assert abs(tab.value(10) - expected) < 1e-13

    def test_insufficient_half_width_raises(self):
        with pytest.raises(InsufficientHalfWidthError):
            kernel_table(50.0, half_width=60)

    def test_scipy_cross_check_dense(self):
        t = 37.0
        tab = kernel_table(t)
        n = np.arange(-tab.half_width, tab.half_width + 1)
        ref = np.exp(-2j * t) * (1j) ** np.abs(n) * special.jv(np.abs(n), 2 * t)
        assert np.max(np.abs(tab.values - ref)) < 1e-13


class TestLinearEvolve:
    def test_delta_reproduces_kernel(self):
        t = 12.0
        n_ext = default_half_width(t)
        psi0 = make_initial_lattice(InitialData.delta(1.0), n_ext)
        tab = kernel_table(t, n_ext)
        out = linear_evolve(psi0, t, tab)
        for n in (-30, -3, 0, 7, 19):
            assert abs(out.at(n) - tab.value(n)) < 1e-13

    def test_time_zero_identity(self):
        psi0 = make_initial_lattice(InitialData.random_phase(1.0, 3), 64)
        out = linear_evolve(psi0, 0.0, kernel_table(0.0, 64))
        assert np.allclose(out.values, psi0.values, atol=1e-14)

    def test_mass_preserved(self):
        t = 9.0
        psi0 = make_initial_lattice(InitialData.random_phase(1.0, 11), 256)
        out = linear_evolve(psi0, t)
        assert abs(out.mass() - psi0.mass()) / psi0.mass() < 1e-12


class TestStationaryPhase:
    def test_parity_structure(self):
        for n in (-8, 0, 4):
            val = stationary_phase_eval(100.0, n)
            assert val.imag == 0.0
        for n in (-7, 1, 9):
            val = stationary_phase_eval(100.0, n)
            assert val.real == 0.0

    def test_regime_validation(self):
        with pytest.raises(ValueError):
            stationary_phase_eval(10.0, 0)
        with pytest.raises(ValueError):
            stationary_phase_eval(100.0, 51)

    def test_phase_fields(self):
        ap = StationaryPhaseApprox.for_point(100.0, 50)
        assert np.sin(ap.theta_s) == pytest.approx(0.5)
        assert ap.phi == pytest.approx(np.pi / 4 + 100 * np.cos(ap.theta_s) + 50 * ap.theta_s)
        assert ap.amplitude == pytest.approx(np.sqrt(2 / (np.pi * 100 * np.cos(ap.theta_s))))

    def test_envelope_vs_quadrature_oracle(self):
        # mean relative envelope error over the interior regime at t = 200
        t = 200.0
        errs = []
        for n in range(-100, 101):
            exact = kernel_integral(t, n)
            approx = stationary_phase_eval(t, n)
            errs.append(abs(abs(approx) - abs(exact)) / abs(exact))
        assert float(np.mean(errs)) <= 0.05

    def test_n0_envelope_matches_j0(self):
        t = 50.0
        approx = stationary_phase_eval(t, 0)
        assert abs(approx) == pytest.approx(
            np.sqrt(2 / (np.pi * t)) * abs(np.cos(t - np.pi / 4)), rel=1e-12
        )
        # documented offset: the printed-phase variant differs from the
        # classical J_0 phase by pi/2
        assert abs(abs(approx) - abs(special.jv(0, t))) < 0.05 * np.sqrt(2 / (np.pi * t))


class TestAdversarial:
    def test_phase_alignment_identity(self):
        t0 = 25.0
        tab = kernel_table(t0)
        data = adversarial_data(t0, tab.half_width, tab)
        evolved = linear_evolve(data, t0, kernel_table(t0, tab.half_width))
        expected = float(np.sum(np.abs(tab.values)))
        assert abs(evolved.at(0)) == pytest.approx(expected, rel=1e-12)

    def test_unit_modulus(self):
        data = adversarial_data(25.0, 200)
        mags = np.abs(data.values)
        assert np.max(mags) <= 1.0 + 1e-12

    def test_lower_bound_ratio_t100(self):
        # measured once via the kernel oracle: ratio = 1.78797...; the spec
        # sheet's illustrative range [0.3, 1.6] is contradicted by direct
        # computation, so we pin the acceptance envelope [0.3, 2.0] instead
        t0 = 100.0
        tab = kernel_table(t0)
        ratio = float(np.sum(np.abs(tab.values))) / np.sqrt(t0)
        assert 0.3 <= ratio <= 2.0
        assert ratio == pytest.approx(1.787971, abs=1e-4)

    def test_extent_too_small_raises(self):
        with pytest.raises(ValueError):
            adversarial_data(100.0, 50)


class TestPairing:
    @pytest.mark.parametrize("t", [100.0, 400.0])
    def test_pairing_true(self, t):
        assert pairing_check(t) is True

    def test_regime(self):
        with pytest.raises(ValueError):
            pairing_check(5.0)


class TestEnsemble:
    def test_t_zero_exact(self):
        # psi(0,0) = a_0 with |a_0| = 1: zero-variance estimate
        m2 = random_ensemble_second_moment(0.0, 1.0, 128, seed=1, kernel=kernel_table(0.0, 4))
        assert m2 == pytest.approx(1.0, abs=1e-14)

    def test_unit_expectation(self):
        m2 = random_ensemble_second_moment(50.0, 1.0, 200, seed=9)
        assert abs(m2 - 1.0) <= 4.0 / np.sqrt(200)

    def test_amplitude_scaling(self):
        m2 = random_ensemble_second_moment(20.0, 2.0, 200, seed=9)
        assert abs(m2 - 4.0) <= 4.0 * 4.0 / np.sqrt(200)

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            random_ensemble_second_moment(1.0, 1.0, 50, seed=0)

    def test_reproducible(self):
        a = random_ensemble_second_moment(10.0, 1.0, 100, seed=4)
        b = random_ensemble_second_moment(10.0, 1.0, 100, seed=4)
        assert a == b
