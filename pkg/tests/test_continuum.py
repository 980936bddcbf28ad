import numpy as np
import pytest
from scipy import integrate

from nlsgrowth.continuum import (
    ContinuumModel,
    ContractionError,
    LocalEnergyProbe,
    Trajectory,
    bootstrap_monitor,
    comb_oracle,
    dispersive_envelope_ratio,
    global_energy,
    global_mass,
    linear_propagate,
    local_energy_probe,
    mollify,
    picard_solve,
    regularized_nonlinearity,
    run_continuum,
    step_lawson_rk4,
)
from nlsgrowth.fields import (
    GridField,
    InitialData,
    Mollifier,
    chi_eval,
    gaussian_comb_eval,
    make_initial_grid,
)

GAUSS = Mollifier.gaussian(1.0)
IDENT = Mollifier.fourier_cutoff(np.inf)


def plane_wave(box, size, mode, amp=1.0):
    x = -box / 2 + (box / size) * np.arange(size)
    k = 2 * np.pi * mode / box
    return GridField(values=amp * np.exp(1j * k * x), box_length=box), k


class TestMollify:
    def test_plane_wave_diagonal(self):
        u, k = plane_wave(32.0, 256, mode=5)
        out = mollify(u, GAUSS)
        assert np.allclose(out.values, np.exp(-k ** 2 / 2) * u.values, atol=1e-13)

    def test_cutoff_identity_on_band(self):
        u, _ = plane_wave(32.0, 256, mode=3)
        out = mollify(u, Mollifier.fourier_cutoff(10.0))
        assert np.allclose(out.values, u.values, atol=1e-13)

    def test_constant_preserved(self):
        g = GridField(values=np.full(64, 2.5, dtype=complex), box_length=10.0)
        out = mollify(g, GAUSS)
        assert np.allclose(out.values, 2.5, atol=1e-14)

    def test_commutes_with_conjugation(self):
        rng = np.random.default_rng(3)
        u = GridField(
            values=rng.standard_normal(128) + 1j * rng.standard_normal(128),
            box_length=20.0,
        )
        a = mollify(GridField(values=np.conj(u.values), box_length=20.0), GAUSS).values
        b = np.conj(mollify(u, GAUSS).values)
        assert np.allclose(a, b, atol=1e-13)


class TestNonlinearity:
    def test_zero(self):
        g = GridField(values=np.zeros(64, dtype=complex), box_length=10.0)
        assert np.all(regularized_nonlinearity(g, GAUSS).values == 0)

    def test_monochromatic_algebra(self):
        amp = 0.7 + 0.2j
        u, k = plane_wave(32.0, 256, mode=4, amp=amp)
        g = float(np.exp(-k ** 2 / 2))
        out = regularized_nonlinearity(u, GAUSS)
        expected = g ** 4 * abs(amp) ** 2 * amp * u.values / abs(amp) ** 0  # g(k)^4 |A|^2 A e^{ikx}
        assert np.allclose(out.values, g ** 4 * abs(amp) ** 2 * u.values, atol=1e-12)

    def test_identity_limit_matches_plain_cubic(self):
        # band-limited to k_max/3 so the pointwise cubic is alias-free
        box, size = 32.0, 256
        rng = np.random.default_rng(7)
        x = -box / 2 + (box / size) * np.arange(size)
        vals = np.zeros(size, dtype=complex)
        for m in range(1, 8):
            k = 2 * np.pi * m / box
            vals += rng.normal() * np.exp(1j * k * x) + rng.normal() * np.exp(-1j * k * x)
        u = GridField(values=0.3 * vals, box_length=box)
        out = regularized_nonlinearity(u, IDENT)
        plain = np.abs(u.values) ** 2 * u.values
        assert np.max(np.abs(out.values - plain)) < 1e-10


class TestLinearPropagate:
    def test_plane_wave_phase(self):
        u, k = plane_wave(16.0, 128, mode=3)
        t = 0.7
        out = linear_propagate(u, t)
        assert np.allclose(out.values, np.exp(-1j * k ** 2 * t) * u.values, atol=1e-12)

    def test_identity_at_zero(self):
        u, _ = plane_wave(16.0, 128, mode=2)
        assert np.allclose(linear_propagate(u, 0.0).values, u.values)

    @pytest.mark.parametrize("t", [0.5, 2.0, 5.0])
    def test_comb_closed_form(self, t):
        box, size = 256.0, 4096
        coeffs = np.ones(41)
        u0 = make_initial_grid(InitialData.gaussian_comb(coeffs, -20), box, size)
        out = linear_propagate(u0, t)
        x = u0.x
        expected = comb_oracle(coeffs, t, x, -20)
        assert np.max(np.abs(out.values - expected)) < 1e-8


class TestCombOracle:
    def test_t_zero_limit(self):
        coeffs = np.exp(1j * np.linspace(0, 3, 11))
        xs = np.linspace(-4, 4, 17)
        a = comb_oracle(coeffs, 0.0, xs, -5)
        b = gaussian_comb_eval(coeffs, xs, -5)
        assert np.allclose(a, b, atol=1e-14)

    def test_single_gaussian_modulus(self):
        t = 1.7
        val = comb_oracle([1.0], t, 0.0, 0)
        assert abs(val) == pytest.approx((1 + 16 * t ** 2) ** -0.25, rel=1e-12)

    def test_all_ones_t10_origin_pinned(self):
        # frozen by direct wide-window summation of the closed form
        val = comb_oracle(np.ones(81), 10.0, 0.0, -40)
        z = 40j + 1.0
        j = np.arange(-40, 41)
        direct = np.sum(np.exp(-(0.0 - j) ** 2 / z)) / np.sqrt(z)
        assert val == pytest.approx(direct, abs=1e-15)


class TestLawson:
    def test_zero_field(self):
        model = ContinuumModel(GAUSS, 32.0, 128, 0.01)
        g = GridField(values=np.zeros(128, dtype=complex), box_length=32.0)
        assert np.all(step_lawson_rk4(g, model).values == 0)

    def test_coupling_off_matches_linear_exactly(self):
        model = ContinuumModel(GAUSS, 32.0, 256, 0.02, coupling=0.0)
        u0 = make_initial_grid(InitialData.random_band(0.5, 2.0, 3), 32.0, 256)
        stepped = step_lawson_rk4(u0, model)
        exact = linear_propagate(u0, 0.02)
        assert np.max(np.abs(stepped.values - exact.values)) < 1e-14

    def test_dt_halving_fourth_order(self):
        box, size = 128.0, 512
        u0 = make_initial_grid(
            InitialData.gaussian_comb(0.5 * np.ones(41), -20), box, size
        )

        def terminal(dt):
            model = ContinuumModel(GAUSS, box, size, dt)
            return run_continuum(u0, model, 1.0, 1.0).values[-1]

        ref = terminal(1.0 / 1024.0)
        err_coarse = np.max(np.abs(terminal(0.02) - ref))
        err_fine = np.max(np.abs(terminal(0.01) - ref))
        assert err_coarse / err_fine >= 12.0

    def test_conservation_short(self):
        box, size = 128.0, 1024
        u0 = make_initial_grid(InitialData.gaussian_comb(np.ones(127), -63), box, size)
        model = ContinuumModel(GAUSS, box, size, 1e-3)
        traj = run_continuum(u0, model, 1.0, 0.2)
        m0 = global_mass(traj.field(0))
        e0 = global_energy(traj.field(0), GAUSS)
        for i in range(len(traj.times)):
            assert abs(global_mass(traj.field(i)) - m0) / m0 < 1e-10
            assert abs(global_energy(traj.field(i), GAUSS) - e0) / e0 < 1e-9


class TestPicard:
    def test_zero_data_one_iteration(self):
        model = ContinuumModel(GAUSS, 32.0, 128, 1e-2)
        u0 = GridField(values=np.zeros(128, dtype=complex), box_length=32.0)
        res = picard_solve(u0, 0.1, model, tol=1e-10)
        assert res.iterations == 1
        assert np.all(res.trajectory.values == 0)

    def test_linear_one_iteration(self):
        model = ContinuumModel(GAUSS, 32.0, 128, 1e-2, coupling=0.0)
        u0 = make_initial_grid(InitialData.random_band(0.5, 1.0, 11), 32.0, 128)
        res = picard_solve(u0, 0.1, model, tol=1e-12)
        assert res.iterations == 1
        exact = linear_propagate(u0, 0.1)
        assert np.max(np.abs(res.trajectory.values[-1] - exact.values)) < 1e-12

    def test_cross_validates_lawson(self):
        box, size = 64.0, 512
        u0 = make_initial_grid(
            InitialData.gaussian_comb(0.5 * np.ones(17), -8), box, size
        )
        model = ContinuumModel(GAUSS, box, size, 1e-3)
        res = picard_solve(u0, 0.1, model, tol=1e-8)
        assert res.iterations <= 8
        traj = run_continuum(u0, model, 0.1, 1e-3)
        diff = np.max(np.abs(res.trajectory.values[-1] - traj.values[-1]))
        assert diff < 1e-6

    def test_divergence_error(self):
        box, size = 32.0, 128
        u0 = make_initial_grid(
            InitialData.periodic([3.0], [1.0]), box, size
        )
        model = ContinuumModel(IDENT, box, size, 5e-2)
        with pytest.raises(ContractionError):
            picard_solve(u0, 4.0, model, tol=1e-10, max_iter=40)


class TestConserved:
    def test_single_mode_values(self):
        amp = 1.3 - 0.4j
        box, size = 32.0, 256
        u, k = plane_wave(box, size, mode=4, amp=amp)
        assert global_mass(u) == pytest.approx(abs(amp) ** 2 * box, rel=1e-12)
        g = float(np.exp(-k ** 2 / 2))
        expected = 0.5 * k ** 2 * abs(amp) ** 2 * box + 0.25 * g ** 4 * abs(amp) ** 4 * box
        assert global_energy(u, GAUSS) == pytest.approx(expected, rel=1e-12)

    def test_zero(self):
        g = GridField(values=np.zeros(64, dtype=complex), box_length=8.0)
        assert global_mass(g) == 0.0
        assert global_energy(g, GAUSS) == 0.0

    def test_parseval(self):
        rng = np.random.default_rng(2)
        box, size = 40.0, 512
        u = make_initial_grid(InitialData.random_band(1.0, 3.0, 5), box, size)
        coeffs = np.fft.fft(u.values) / size
        parseval = box * float(np.sum(np.abs(coeffs) ** 2))
        assert global_mass(u) == pytest.approx(parseval, rel=1e-12)


class TestLocalEnergyProbe:
    def test_zero(self):
        g = GridField(values=np.zeros(1024, dtype=complex), box_length=128.0)
        assert local_energy_probe(g, LocalEnergyProbe(0.0, 4.0), GAUSS) == 0.0

    def test_constant_field_oracle(self):
        # (A^4/4 + A^2/2) * R * int chi^2, with int chi^2 by quadrature
        amp, R = 1.5, 4.0
        box, size = 128.0, 1024
        g = GridField(values=np.full(size, amp, dtype=complex), box_length=box)
        chi_sq_integral, _ = integrate.quad(lambda s: chi_eval(s) ** 2, -2.0, 2.0, epsabs=1e-13)
        expected = (amp ** 4 / 4 + amp ** 2 / 2) * R * chi_sq_integral
        got = local_energy_probe(g, LocalEnergyProbe(0.0, R), GAUSS)
        assert got == pytest.approx(expected, rel=1e-6)

    def test_homogeneity_on_constant(self):
        box, size = 128.0, 1024
        probe = LocalEnergyProbe(0.0, 2.0)
        g1 = GridField(values=np.full(size, 1.0, dtype=complex), box_length=box)
        g2 = GridField(values=np.full(size, 2.0, dtype=complex), box_length=box)
        e1_mass = 0.5 * 1.0 ** 2
        # quartic scales x16, mass term x4
        chi_sq_integral, _ = integrate.quad(lambda s: chi_eval(s) ** 2, -2.0, 2.0)
        e1 = local_energy_probe(g1, probe, GAUSS)
        e2 = local_energy_probe(g2, probe, GAUSS)
        quartic1 = 0.25 * 1.0
        mass1 = 0.5 * 1.0
        expected_ratio = (16 * quartic1 + 4 * mass1) / (quartic1 + mass1)
        assert e2 / e1 == pytest.approx(expected_ratio, rel=1e-9)

    def test_window_validation(self):
        with pytest.raises(ValueError):
            LocalEnergyProbe(0.0, 0.5)
        g = GridField(values=np.zeros(256, dtype=complex), box_length=32.0)
        with pytest.raises(ValueError):
            local_energy_probe(g, LocalEnergyProbe(10.0, 4.0), GAUSS)


class TestBootstrap:
    def test_zero_data_degenerate_pass(self):
        traj = Trajectory(
            times=np.array([0.0, 1.0]),
            values=np.zeros((2, 256), dtype=complex),
            box_length=64.0,
        )
        rep = bootstrap_monitor(traj, [LocalEnergyProbe(0.0, 2.0)], GAUSS)
        assert not rep.flagged
        assert "zero" in rep.note

    def test_linear_run_ratio_bounded(self):
        box, size = 256.0, 2048
        u0 = make_initial_grid(InitialData.gaussian_comb(np.ones(129), -64), box, size)
        model = ContinuumModel(GAUSS, box, size, 5e-3, coupling=0.0)
        traj = run_continuum(u0, model, 2.0, 0.25)
        probes = [LocalEnergyProbe(x, 8.0) for x in (-32.0, 0.0, 32.0)]
        rep = bootstrap_monitor(traj, probes, GAUSS, flag_factor=1.5)
        assert rep.max_ratio <= 1.5
        assert not rep.flagged


class TestDispersiveEnvelope:
    def test_comb_envelope_bounded(self):
        box, size = 256.0, 2048
        u0 = make_initial_grid(InitialData.gaussian_comb(np.ones(129), -64), box, size)
        # C^2 norms computed spectrally
        k = 2 * np.pi * np.fft.fftfreq(size, d=box / size)
        v = np.fft.fft(u0.values)
        norms = sum(
            float(np.max(np.abs(np.fft.ifft((1j * k) ** q * v)))) for q in range(3)
        )
        ratio = dispersive_envelope_ratio(u0, np.linspace(0.0, 20.0, 21))
        assert ratio <= 10.0 * norms
