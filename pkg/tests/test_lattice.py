import numpy as np
import pytest

from nlsgrowth.fields import InitialData, LatticeField, WeightProfile, make_initial_lattice
from nlsgrowth.lattice import (
    LatticeModel,
    forward_diff,
    global_energy,
    lattice_laplacian,
    local_energy,
    local_mass,
    require_defocusing,
    run_lattice,
    step_splitstep,
    sup_time_derivative,
    windowed_mass_avg,
    windowed_quartic_avg,
)
from nlsgrowth.lattice_linear import default_half_width, kernel_table, linear_evolve


def lattice(vals):
    vals = np.asarray(vals, dtype=complex)
    return LatticeField(values=vals, extent=(len(vals) - 1) // 2)


class TestStencils:
    def test_forward_diff(self):
        const = lattice(np.ones(7))
        assert np.all(forward_diff(const).values == 0)
        delta = lattice([0, 0, 0, 1, 0, 0, 0])
        d = forward_diff(delta)
        assert d.at(0) == -1.0 and d.at(-1) == 1.0
        assert d.at(1) == 0.0 and d.at(2) == 0.0
        ramp = lattice(np.arange(-3, 4, dtype=float))
        interior = forward_diff(ramp).values[:-1]  # wrap hits the last site only
        assert np.allclose(interior, 1.0)

    def test_laplacian(self):
        delta = lattice([0, 0, 0, 1, 0, 0, 0])
        lap = lattice_laplacian(delta)
        assert lap.at(0) == -2.0 and lap.at(1) == 1.0 and lap.at(-1) == 1.0
        assert np.all(lattice_laplacian(lattice(np.ones(9))).values == 0)

    def test_laplacian_plane_wave_symbol(self):
        n = 50
        period = 2 * n + 1
        kappa = 2 * np.pi * 7 / period  # ring-commensurate mode
        x = np.arange(-n, n + 1)
        wave = LatticeField(values=np.exp(1j * kappa * x), extent=n)
        lap = lattice_laplacian(wave)
        eig = -4.0 * np.sin(kappa / 2) ** 2
        assert np.allclose(lap.values, eig * wave.values, atol=1e-12)


class TestSplitStep:
    def test_zero_field(self):
        model = LatticeModel(extent=8, dt=0.05)
        out = step_splitstep(lattice(np.zeros(17)), model)
        assert np.all(out.values == 0)

    def test_constant_field_phase_rotation(self):
        # uniform solution: psi(t) = e^{-i t} for A = 1, defocusing cubic
        model = LatticeModel(sign=+1, p=2.0, extent=8, dt=0.05)
        psi = make_initial_lattice(InitialData.constant(1.0), 8)
        for _ in range(100):
            psi = step_splitstep(psi, model)
        t = 100 * model.dt
        assert np.allclose(psi.values, np.exp(-1j * t), atol=1e-12)
        assert np.max(np.abs(np.abs(psi.values) - 1.0)) < 1e-13

    def test_mass_conserved_per_step(self):
        model = LatticeModel(extent=128, dt=0.05)
        psi = make_initial_lattice(InitialData.random_phase(1.0, 21), 128)
        m0 = psi.mass()
        psi = step_splitstep(psi, model)
        assert abs(psi.mass() - m0) / m0 < 1e-14

    def test_mass_drift_many_steps(self):
        model = LatticeModel(extent=256, dt=0.01)
        psi = make_initial_lattice(InitialData.random_phase(1.0, 5), 256)
        m0 = psi.mass()
        for _ in range(2000):
            psi = step_splitstep(psi, model)
        assert abs(psi.mass() - m0) / m0 < 1e-12

    def test_linear_limit_matches_bessel_kernel(self):
        # coupling 0, delta data: 1000 steps of dt = 0.05 vs exact propagator
        t = 50.0
        extent = max(default_half_width(t), 200)
        model = LatticeModel(extent=extent, dt=0.05, coupling=0.0)
        psi = make_initial_lattice(InitialData.delta(1.0), extent)
        for _ in range(1000):
            psi = step_splitstep(psi, model)
        exact = linear_evolve(
            make_initial_lattice(InitialData.delta(1.0), extent), t,
            kernel_table(t, extent),
        )
        assert np.max(np.abs(psi.values - exact.values)) < 1e-8

    def test_dt_precondition(self):
        with pytest.raises(ValueError):
            LatticeModel(extent=8, dt=0.2)


class TestDiagnostics:
    def test_local_mass_examples(self):
        w0 = WeightProfile(0, 1.0, 0.0)
        zero = lattice(np.zeros(2001))
        assert local_mass(zero, WeightProfile(0, 1.0, 10.0), 0.0) == 0.0
        delta = make_initial_lattice(InitialData.delta(1.0), 5)
        assert local_mass(delta, w0, 0.0) == pytest.approx(np.exp(-1.0))

    def test_local_mass_constant_against_naive_oracle(self):
        n = 1000
        w = WeightProfile(0, 1.0, 10.0)
        psi = make_initial_lattice(InitialData.constant(1.0), n)
        # independent naive summation oracle
        oracle = 0.0
        for x in range(-n, n + 1):
            oracle += np.exp(-np.sqrt(x * x + 1.0) / 21.0)
        assert local_mass(psi, w, 0.0) == pytest.approx(oracle, rel=1e-12)

    def test_local_energy_examples(self):
        w = WeightProfile(0, 1.0, 10.0)
        zero = lattice(np.zeros(21))
        assert local_energy(zero, w, 0.0) == 0.0
        # constant: gradient term vanishes, quartic term is (A^4/4) sum e^{-F}
        amp = 1.3
        psi = make_initial_lattice(InitialData.constant(amp), 30)
        weights = np.exp(-w.evaluate(0.0, np.arange(-30, 31)))
        assert local_energy(psi, w, 0.0) == pytest.approx(
            amp ** 4 / 4 * float(np.sum(weights)), rel=1e-12
        )

    def test_local_energy_delta_stencil_oracle(self):
        w0 = WeightProfile(0, 1.0, 0.0)
        delta = make_initial_lattice(InitialData.delta(1.0), 5)
        f = lambda x: np.sqrt(x * x + 1.0)  # F(0, x) at R=1, t0=0
        expected = 0.5 * (np.exp(-f(-1)) + np.exp(-f(0))) + 0.25 * np.exp(-f(0))
        assert local_energy(delta, w0, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_windowed_averages(self):
        psi = make_initial_lattice(InitialData.constant(1.0), 200)
        assert windowed_mass_avg(psi, 0, 10.0) == pytest.approx(21.0 / 10.0)
        assert windowed_mass_avg(lattice(np.zeros(41)), 0, 5.0) == 0.0
        rp = make_initial_lattice(InitialData.random_phase(1.0, 1), 200)
        assert windowed_mass_avg(rp, 0, 50.0) == pytest.approx(101.0 / 50.0)
        assert windowed_quartic_avg(psi, 0, 10.0) == pytest.approx(21.0 / 10.0)
        psi2 = make_initial_lattice(InitialData.constant(2.0), 200)
        assert windowed_quartic_avg(psi2, 0, 10.0) == pytest.approx(21.0 * 16.0 / 10.0)

    def test_window_bounds(self):
        psi = make_initial_lattice(InitialData.constant(1.0), 20)
        with pytest.raises(ValueError):
            windowed_mass_avg(psi, 0, 25.0)
        with pytest.raises(ValueError):
            windowed_mass_avg(psi, 15, 10.0)
        with pytest.raises(ValueError):
            windowed_mass_avg(psi, 0, 0.5)

    def test_sup_time_derivative(self):
        model = LatticeModel(extent=5, dt=0.01)
        assert sup_time_derivative(lattice(np.zeros(11)), model) == 0.0
        const = make_initial_lattice(InitialData.constant(1.0), 5)
        assert sup_time_derivative(const, model) == pytest.approx(1.0)
        delta = make_initial_lattice(InitialData.delta(1.0), 5)
        assert sup_time_derivative(delta, model) == pytest.approx(3.0)

    def test_require_defocusing(self):
        require_defocusing(LatticeModel(extent=4, dt=0.01, sign=+1), "x")
        with pytest.raises(ValueError):
            require_defocusing(LatticeModel(extent=4, dt=0.01, sign=-1), "x")


class TestGronwall:
    def test_local_mass_bound_sample(self):
        # M(t0)/M(0) <= 2^(3/R) (1 + 1e-6): exponential form of the
        # integrated differential inequality, R = 1, t0 = 50
        t0 = 50.0
        extent = 192
        model = LatticeModel(sign=+1, p=2.0, extent=extent, dt=0.01)
        w = WeightProfile(0, 1.0, t0)
        bound = 2.0 ** 3 * (1.0 + 1e-6)
        for seed in (0, 1, 2):
            psi = make_initial_lattice(InitialData.random_phase(1.0, seed), extent)
            m_start = local_mass(psi, w, 0.0)
            records, final = run_lattice(model, psi, t0, record_dt=t0)
            m_end = local_mass(final, w, t0)
            assert m_end / m_start <= bound


class TestGrowthInvariants:
    @staticmethod
    def _slopes(p, sign, seed=11, t_final=120.0, extent=320):
        model = LatticeModel(sign=sign, p=p, extent=extent, dt=0.01)
        psi0 = make_initial_lattice(InitialData.random_phase(1.0, seed), extent)
        records, _ = run_lattice(model, psi0, t_final, record_dt=0.5)
        t = np.array([r.t for r in records])
        sup = np.array([r.sup_abs for r in records])
        sup_dt = np.array([r.sup_dt for r in records])
        window = (10.0, t_final)
        from nlsgrowth.harness.fitting import fit_growth

        return fit_growth(t, sup, window).slope, fit_growth(t, sup_dt, window).slope

    def test_time_derivative_slopes(self):
        # d psi/dt grows no faster than t^(3/2) (mass route) resp. t^(3/4)
        # (energy route, defocusing); measured values sit far below
        _, dt_slope_foc = self._slopes(2.0, -1)
        assert dt_slope_foc <= 1.5 + 0.1
        _, dt_slope_defoc = self._slopes(2.0, +1)
        assert dt_slope_defoc <= 0.75 + 0.1

    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
    def test_p_generalization_slope(self, p):
        sup_slope, _ = self._slopes(p, +1)
        assert sup_slope <= 1.0 / (p + 2.0) + 0.05


class TestRunDriver:
    def test_records_monotone_and_finite(self):
        model = LatticeModel(extent=64, dt=0.01)
        psi = make_initial_lattice(InitialData.random_phase(1.0, 2), 64)
        records, final = run_lattice(model, psi, 2.0, 0.25)
        ts = [r.t for r in records]
        assert ts == sorted(ts) and len(set(ts)) == len(ts)
        for r in records:
            for v in (r.sup_abs, r.global_mass, r.global_energy, r.local_mass,
                      r.local_energy, r.sup_dt):
                assert np.isfinite(v)

    def test_global_energy_drift_small(self):
        model = LatticeModel(extent=128, dt=0.005)
        psi = make_initial_lattice(InitialData.random_phase(0.5, 9), 128)
        e0 = global_energy(psi, model)
        records, final = run_lattice(model, psi, 5.0, 1.0)
        e1 = global_energy(final, model)
        assert abs(e1 - e0) / abs(e0) < 1e-4  # second-order splitting
