import numpy as np
import pytest

from nlsgrowth.fields import (
    GridField,
    InitialData,
    LatticeField,
    Mollifier,
    SpectralField,
    WeightProfile,
    chi_eval,
    gaussian_comb_eval,
    make_initial_grid,
    make_initial_lattice,
    weight_eval,
)


class TestChi:
    def test_plateau_support_symmetry(self):
        assert chi_eval(0.5) == 1.0
        assert chi_eval(3.0) == 0.0
        mid = chi_eval(1.5)
        assert 0.0 < mid < 1.0
        assert mid == chi_eval(-1.5)

    def test_sampled_invariants(self):
        x = np.linspace(-4.0, 4.0, 10_000)
        y = chi_eval(x)
        assert np.all((y >= 0.0) & (y <= 1.0))
        assert np.allclose(y, chi_eval(-x))
        assert np.all(y[np.abs(x) <= 1.0] == 1.0)
        assert np.all(y[np.abs(x) >= 2.0] == 0.0)

    def test_c2_junctions(self):
        # value, first and second difference quotients continuous at |x|=1, 2
        for x0 in (1.0, 2.0):
            eps = 1e-6
            for fd in range(3):
                h = 1e-4
                pts_in = [x0 - eps - fd * h + i * h for i in range(fd + 1)]
                pts_out = [x0 + eps + i * h for i in range(fd + 1)]

                def diff(pts):
                    vals = [chi_eval(p) for p in pts]
                    for _ in range(fd):
                        vals = np.diff(vals) / h
                    return np.asarray(vals)[0]

                assert abs(diff(pts_in) - diff(pts_out)) < 1e-2 * 10 ** fd


class TestWeight:
    def test_point_values(self):
        assert weight_eval(WeightProfile(0, 1.0, 0.0), 0.0, 0) == pytest.approx(1.0)
        assert weight_eval(WeightProfile(0, 1.0, 10.0), 0.0, 0) == pytest.approx(1.0 / 21.0)
        assert weight_eval(WeightProfile(5, 2.0, 10.0), 10.0, 5) == pytest.approx(1.0 / 22.0)

    def test_rejects_time_outside_window(self):
        w = WeightProfile(0, 1.0, 5.0)
        with pytest.raises(ValueError):
            w.evaluate(5.1, 0)
        with pytest.raises(ValueError):
            w.evaluate(-0.1, 0)

    def test_nondecreasing_in_time(self):
        # d/dt F >= 0 (the denominator 2*t0 - t + 1 shrinks as t grows); the
        # local-mass Gronwall damping term -|psi|^2 e^{-F} dF/dt relies on it
        w = WeightProfile(3, 2.0, 20.0)
        ts = np.linspace(0.0, 20.0, 50)
        for x in (-7, 0, 3, 11):
            vals = [weight_eval(w, t, x) for t in ts]
            assert np.all(np.diff(vals) >= -1e-15)
        assert np.all(w.evaluate(7.0, np.arange(-50, 51)) > 0.0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            WeightProfile(0, 0.5, 1.0)
        with pytest.raises(ValueError):
            WeightProfile(0, 1.0, -1.0)


class TestLatticeField:
    def test_shape_checks(self):
        with pytest.raises(ValueError):
            LatticeField(values=np.zeros(4, dtype=complex), extent=2)
        f = LatticeField(values=np.arange(5, dtype=complex), extent=2)
        assert f.origin_index == 2
        assert f.at(0) == 2.0
        assert list(f.sites) == [-2, -1, 0, 1, 2]

    def test_rejects_nonfinite(self):
        vals = np.zeros(5, dtype=complex)
        vals[1] = np.nan
        with pytest.raises(ValueError):
            LatticeField(values=vals, extent=2)


class TestInitialLattice:
    def test_constant_and_delta(self):
        f = make_initial_lattice(InitialData.constant(1.0), 2)
        assert np.all(f.values == 1.0 + 0j)
        g = make_initial_lattice(InitialData.delta(1.0), 2)
        assert np.array_equal(g.values, np.array([0, 0, 1, 0, 0], dtype=complex))

    def test_random_phase_unit_modulus_reproducible(self):
        spec = InitialData.random_phase(1.0, seed=7)
        f1 = make_initial_lattice(spec, 10_000)
        f2 = make_initial_lattice(spec, 10_000)
        assert np.array_equal(f1.values, f2.values)  # bitwise
        assert np.max(np.abs(np.abs(f1.values) - 1.0)) < 1e-15

    def test_random_gaussian_moment(self):
        f = make_initial_lattice(InitialData.random_gaussian(2.0, seed=3), 50_000)
        m2 = np.mean(np.abs(f.values) ** 2)
        assert m2 == pytest.approx(4.0, rel=0.05)

    def test_periodic_has_no_wrap_seam(self):
        spec = InitialData.periodic([0.5, 0.5j], [0.9, 2.3])
        f = make_initial_lattice(spec, 100)
        period = 2 * 100 + 1
        # snapped frequencies make the data exactly ring-periodic
        x = np.arange(-100, 101)
        fund = 2 * np.pi / period
        freqs = [round(0.9 / fund) * fund, round(2.3 / fund) * fund]
        expected = 0.5 * np.exp(1j * freqs[0] * (x + period)) + 0.5j * np.exp(
            1j * freqs[1] * (x + period)
        )
        assert np.allclose(f.values, expected, atol=1e-12)

    def test_comb_on_lattice(self):
        spec = InitialData.gaussian_comb(np.ones(9), -4)
        f = make_initial_lattice(spec, 30)
        direct = gaussian_comb_eval(np.ones(9), 0.0, -4)
        assert f.at(0) == pytest.approx(direct)


class TestGaussianCombEval:
    def test_zero_and_single(self):
        assert gaussian_comb_eval(np.zeros(5), 1.3, -2) == 0.0
        a = np.zeros(5)
        a[2] = 1.0
        assert gaussian_comb_eval(a, 0.0, -2) == pytest.approx(1.0)

    def test_all_ones_against_wide_sum_oracle(self):
        # independent oracle: naive sum over a very wide window
        j = np.arange(-40, 41, dtype=float)
        oracle = complex(np.sum(np.exp(-(0.0 - j) ** 2)))
        got = gaussian_comb_eval(np.ones(41), 0.0, -20)
        assert got == pytest.approx(oracle, abs=1e-15)
        assert abs(oracle - 1.7726372048266521) < 1e-12

    def test_rejects_large_coefficients(self):
        with pytest.raises(ValueError):
            gaussian_comb_eval(np.array([2.0]), 0.0)


class TestSpectral:
    def test_round_trip_hundred_random_fields(self):
        rng = np.random.default_rng(0)
        worst = 0.0
        for _ in range(100):
            m = int(rng.choice([64, 128, 256]))
            vals = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            grid = GridField(values=vals, box_length=float(rng.uniform(5.0, 50.0)))
            back = SpectralField.from_grid(grid).to_grid()
            worst = max(
                worst,
                float(np.max(np.abs(back.values - grid.values)) / np.max(np.abs(grid.values))),
            )
        assert worst < 1e-12

    def test_wavenumbers(self):
        grid = GridField(values=np.zeros(8, dtype=complex), box_length=4.0)
        spec = SpectralField.from_grid(grid)
        got = np.sort(spec.wavenumbers)
        expected = 2 * np.pi * np.arange(-4, 4) / 4.0
        assert np.allclose(got, np.sort(expected))

    def test_power_of_two_required(self):
        with pytest.raises(ValueError):
            GridField(values=np.zeros(12, dtype=complex), box_length=1.0)


class TestMollifier:
    def test_gaussian_transfer(self):
        phi = Mollifier.gaussian(1.5)
        k = np.linspace(-10, 10, 101)
        tr = phi.transfer(k)
        assert np.allclose(tr, phi.transfer(-k))
        assert np.all((tr > 0) & (tr <= 1.0))
        assert tr[50] == pytest.approx(1.0)  # unit mass <=> transfer(0) = 1
        assert phi.transfer(np.array([2.0]))[0] == pytest.approx(np.exp(-1.5 ** 2 * 4 / 2))

    def test_cutoff_indicator(self):
        phi = Mollifier.fourier_cutoff(3.0)
        k = np.array([-4.0, -3.0, 0.0, 2.9, 3.1])
        assert np.array_equal(phi.transfer(k), np.array([0.0, 1.0, 1.0, 1.0, 0.0]))

    def test_validation(self):
        with pytest.raises(ValueError):
            Mollifier.gaussian(0.0)
        with pytest.raises(ValueError):
            Mollifier.fourier_cutoff(-1.0)


class TestGridData:
    def test_random_band_bounded_and_reproducible(self):
        spec = InitialData.random_band(0.7, 2.0, seed=5)
        f1 = make_initial_grid(spec, 64.0, 256)
        f2 = make_initial_grid(spec, 64.0, 256)
        assert np.array_equal(f1.values, f2.values)
        assert f1.sup_abs() == pytest.approx(0.7, rel=1e-12)

    def test_lattice_only_kind_rejected_on_grid(self):
        with pytest.raises(ValueError):
            make_initial_grid(InitialData.delta(1.0), 10.0, 64)
