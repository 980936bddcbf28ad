import numpy as np
import pytest

from nlsgrowth.fields import GridField, InitialData, chi_eval, make_initial_grid
from nlsgrowth.wave import WaveState, nlw_cone_test, nlw_energy, nlw_step_leapfrog, run_nlw


def real_grid(vals, box):
    return GridField(values=np.asarray(vals, dtype=complex), box_length=box)


def zero_state(box, size):
    z = np.zeros(size)
    return WaveState(u=real_grid(z, box), v=real_grid(z, box))


class TestStep:
    def test_zero_state_fixed(self):
        s = zero_state(32.0, 256)
        out = nlw_step_leapfrog(s, 0.05)
        assert np.all(out.u.values == 0) and np.all(out.v.values == 0)

    def test_cfl_guard(self):
        s = zero_state(32.0, 256)
        with pytest.raises(ValueError):
            nlw_step_leapfrog(s, 1.0)

    def test_linear_standing_wave(self):
        # coupling 0: u = cos(kx) cos(kt) exactly (spectral space, 2nd order time)
        box, size = 2 * np.pi * 8, 256
        kmode = 3
        k = 2 * np.pi * kmode / box
        x = -box / 2 + (box / size) * np.arange(size)
        state = WaveState(u=real_grid(np.cos(k * x), box), v=real_grid(np.zeros(size), box))
        dt = 1e-3
        records, final = run_nlw(state, 1.0, dt, 1.0, coupling=0.0)
        expected = np.cos(k * x) * np.cos(k * 1.0)
        err = np.max(np.abs(final.u.values.real - expected))
        assert err < 5e-7  # O(dt^2 k^3)

        # second-order convergence in dt
        _, final2 = run_nlw(state, 1.0, 2e-3, 1.0, coupling=0.0)
        err2 = np.max(np.abs(final2.u.values.real - expected))
        assert err2 / err == pytest.approx(4.0, rel=0.2)


class TestEnergy:
    def test_energy_value_single_mode(self):
        box, size = 2 * np.pi * 4, 256
        k = 2 * np.pi * 2 / box
        x = -box / 2 + (box / size) * np.arange(size)
        amp = 0.7
        state = WaveState(
            u=real_grid(amp * np.cos(k * x), box), v=real_grid(np.zeros(size), box)
        )
        # 1/2 int u_x^2 = 1/2 * amp^2 k^2 * box/2 ; quartic = 1/4 * amp^4 * (3/8) box
        expected = 0.5 * amp ** 2 * k ** 2 * box / 2 + 0.25 * amp ** 4 * (3.0 / 8.0) * box
        assert nlw_energy(state) == pytest.approx(expected, rel=1e-12)

    def test_drift_random_data(self):
        box, size = 64.0, 256
        u0 = make_initial_grid(InitialData.random_band(1.0, 2.0, 4), box, size)
        u1 = make_initial_grid(InitialData.random_band(1.0, 2.0, 5), box, size)
        state = WaveState(
            u=real_grid(u0.values.real, box), v=real_grid(u1.values.real, box)
        )
        e0 = nlw_energy(state)
        records, _ = run_nlw(state, 5.0, 2.5e-4, 1.0)
        drift = max(abs(e - e0) / abs(e0) for _, _, e in records)
        assert drift < 1e-6


class TestConeTest:
    def test_zero_data(self):
        box, size = 128.0, 512
        z = np.zeros(size)
        d = nlw_cone_test(real_grid(z, box), real_grid(z, box), 5.0, 0.05)
        assert d == 0.0

    def test_data_inside_cone_identical(self):
        # compactly supported data already inside |x| <= T: truncation is the
        # identity and the two runs coincide exactly
        box, size = 128.0, 512
        x = -box / 2 + (box / size) * np.arange(size)
        T = 10.0
        bump = np.where(np.abs(x) < 8.0, np.cos(np.pi * x / 16.0) ** 2, 0.0)
        d = nlw_cone_test(real_grid(bump, box), real_grid(0 * bump, box), T, 0.05)
        assert d == 0.0

    def test_random_data_small_difference(self):
        # reduced-size smoke of the acceptance cone check
        box, size = 128.0, 2048
        u0 = make_initial_grid(InitialData.random_band(0.5, 0.5, 11), box, size)
        u1 = make_initial_grid(InitialData.random_band(0.5, 0.5, 12), box, size)
        T = 10.0
        d = nlw_cone_test(
            real_grid(u0.values.real, box), real_grid(u1.values.real, box), T, 2e-3
        )
        # spectral-tail floor of the coarse grid; the acceptance suite runs
        # the full-resolution T=20 check at 1e-10
        assert d < 1e-8
