"""Shared field types, cutoffs, weights, and initial-data generators.

Complex amplitudes live either on a truncated integer lattice (origin-centered,
periodic wrap) or on a uniform periodic grid over a box of length L.  All types
are plain immutable-after-construction values and safe to share read-only
between concurrent runs.

Random generators use numpy's PCG64 (``np.random.default_rng(seed)``); every
random construction is bitwise reproducible from its seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import fft as _fft

__all__ = [
    "LatticeField",
    "GridField",
    "SpectralField",
    "WeightProfile",
    "Mollifier",
    "InitialData",
    "chi_eval",
    "weight_eval",
    "make_initial_lattice",
    "make_initial_grid",
    "gaussian_comb_eval",
    "COMB_TRUNCATION",
]

# e^{-(x-j)^2} below this threshold is dropped from comb sums; exact to double
# precision.
COMB_TRUNCATION = 1e-18


# ---------------------------------------------------------------------------
# field containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeField:
    """Complex amplitudes on the truncated lattice, sites -N..N.

    ``values[x + extent]`` is the amplitude at site x; boundary operations wrap
    periodically (period 2N+1).
    """

    values: np.ndarray
    extent: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        if self.extent < 1:
            raise ValueError("extent must be >= 1")
        if vals.shape != (2 * self.extent + 1,):
            raise ValueError(
                f"values length {vals.shape} != 2*extent+1 = {2 * self.extent + 1}"
            )
        if not np.all(np.isfinite(vals.view(float))):
            raise ValueError("lattice field contains non-finite entries")

    @property
    def origin_index(self) -> int:
        return self.extent

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.extent, self.extent + 1)

    def at(self, x: int) -> complex:
        """Amplitude at site x (no wrap; x must lie in -N..N)."""
        if abs(x) > self.extent:
            raise IndexError(f"site {x} outside extent {self.extent}")
        return complex(self.values[x + self.extent])

    def sup_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def mass(self) -> float:
        """Global l2 mass sum_x |psi(x)|^2."""
        return float(np.sum(np.abs(self.values) ** 2))


@dataclass(frozen=True)
class GridField:
    """Complex samples on the periodic grid x_j = -L/2 + j*h, h = L/M."""

    values: np.ndarray
    box_length: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        m = vals.shape[0]
        if m < 2 or (m & (m - 1)) != 0:
            raise ValueError(f"grid size {m} is not a power of two")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")
        if not np.all(np.isfinite(vals.view(float))):
            raise ValueError("grid field contains non-finite entries")

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def spacing(self) -> float:
        return self.box_length / self.size

    @property
    def x(self) -> np.ndarray:
        return -self.box_length / 2 + self.spacing * np.arange(self.size)

    def sup_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def grid_wavenumbers(box_length: float, size: int) -> np.ndarray:
    """k_m = 2*pi*m/L for m in {0..M/2-1, -M/2..-1} (FFT ordering)."""
    return 2.0 * np.pi * _fft.fftfreq(size, d=box_length / size)


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients c_m with u(x) = sum_m c_m exp(i k_m x).

    Coefficients are stored in FFT ordering; ``wavenumbers`` gives the matching
    k_m = 2*pi*m/L, m in {-M/2, ..., M/2-1}.
    """

    coeffs: np.ndarray
    box_length: float

    @property
    def size(self) -> int:
        return self.coeffs.shape[0]

    @property
    def wavenumbers(self) -> np.ndarray:
        return grid_wavenumbers(self.box_length, self.size)

    @classmethod
    def from_grid(cls, grid: GridField) -> "SpectralField":
        m = grid.size
        k = grid_wavenumbers(grid.box_length, m)
        # grid samples start at x = -L/2, so undo that offset to make the
        # coefficients literal coefficients of exp(i k x)
        coeffs = _fft.fft(grid.values) / m * np.exp(1j * k * grid.box_length / 2)
        return cls(coeffs=coeffs, box_length=grid.box_length)

    def to_grid(self) -> GridField:
        m = self.size
        k = self.wavenumbers
        vals = _fft.ifft(self.coeffs * np.exp(-1j * k * self.box_length / 2) * m)
        return GridField(values=vals, box_length=self.box_length)


# ---------------------------------------------------------------------------
# cutoff and weights
# ---------------------------------------------------------------------------

def chi_eval(x):
    """C^2 plateau cutoff: 1 on |x|<=1, 0 on |x|>=2, quintic smoothstep between.

    The shell uses s(u) = 6u^5 - 15u^4 + 10u^3 with u = 2-|x|, so chi and its
    first two derivatives are continuous and chi is even.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.zeros_like(ax)
    out[ax <= 1.0] = 1.0
    shell = (ax > 1.0) & (ax < 2.0)
    u = 2.0 - ax[shell]
    out[shell] = u ** 3 * (10.0 - 15.0 * u + 6.0 * u ** 2)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class WeightProfile:
    """Space-time weight F(t,x) = sqrt((x-x0)^2+1) / (R*(2*t0 - t + 1)).

    Defined for 0 <= t <= t0; strictly positive and nonincreasing in t.
    """

    x0: int
    R: float
    t0: float

    def __post_init__(self):
        if self.R < 1.0:
            raise ValueError("R must be >= 1")
        if self.t0 < 0.0:
            raise ValueError("t0 must be >= 0")

    def evaluate(self, t: float, x):
        if t < 0.0 or t > self.t0:
            raise ValueError(f"t={t} outside [0, t0={self.t0}]")
        x = np.asarray(x, dtype=float)
        num = np.sqrt((x - self.x0) ** 2 + 1.0)
        return num / (self.R * (2.0 * self.t0 - t + 1.0))


def weight_eval(w: WeightProfile, t: float, x) -> float:
    """F(t,x) for a single site (scalar convenience wrapper)."""
    out = w.evaluate(t, x)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# mollifier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mollifier:
    """Smoothing kernel applied by spectral multiplication.

    kind "gaussian": unit-mass Gaussian of width sigma, transfer
    exp(-sigma^2 k^2 / 2).  kind "fourier_cutoff": sharp frequency truncation,
    transfer 1_{|k| <= K}.  ``fourier_cutoff(np.inf)`` is the identity and
    serves as the sigma -> 0 plain-cubic limit.
    """

    kind: str
    sigma: float = 0.0
    cutoff: float = 0.0

    @classmethod
    def gaussian(cls, sigma: float) -> "Mollifier":
        if not sigma > 0:
            raise ValueError("gaussian width must be positive")
        return cls(kind="gaussian", sigma=sigma)

    @classmethod
    def fourier_cutoff(cls, cutoff: float) -> "Mollifier":
        if not cutoff > 0:
            raise ValueError("cutoff wavenumber must be positive")
        return cls(kind="fourier_cutoff", cutoff=cutoff)

    def transfer(self, k: np.ndarray) -> np.ndarray:
        """Real, even transfer function, bounded by 1."""
        if self.kind == "gaussian":
            return np.exp(-self.sigma ** 2 * k ** 2 / 2.0)
        if self.kind == "fourier_cutoff":
            return (np.abs(k) <= self.cutoff).astype(float)
        raise ValueError(f"unknown mollifier kind {self.kind!r}")


# ---------------------------------------------------------------------------
# initial data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InitialData:
    """Generator spec for bounded (and a few unbounded) initial data.

    Kinds:
      constant(A)                   psi0 = A everywhere
      delta(A)                      A at the origin, 0 elsewhere
      random_phase(A, seed)         A * exp(i theta_x), theta uniform [0, 2pi)
      random_gaussian(A, seed)      complex Gaussians with E|psi0|^2 = A^2
                                    (not sup-bounded)
      gaussian_comb(coeffs, j0)     sum_j a_j exp(-(x - j)^2), j = j0, j0+1, ...
      periodic(amps, freqs)         sum_m amp_m exp(i freq_m x); frequencies
                                    are snapped to the carrier's reciprocal
                                    lattice at realization time
      random_band(A, k_band, seed)  random-phase trig polynomial with modes
                                    |k| <= k_band, normalized to sup = A
                                    (continuum-smooth random bounded data)
    """

    kind: str
    amplitude: float = 1.0
    seed: int | None = None
    coeffs: np.ndarray | None = None
    comb_origin: int = 0
    amplitudes: tuple = ()
    frequencies: tuple = ()
    k_band: float = 1.0

    @classmethod
    def constant(cls, amplitude: float = 1.0) -> "InitialData":
        return cls(kind="constant", amplitude=amplitude)

    @classmethod
    def delta(cls, amplitude: float = 1.0) -> "InitialData":
        return cls(kind="delta", amplitude=amplitude)

    @classmethod
    def random_phase(cls, amplitude: float, seed: int) -> "InitialData":
        return cls(kind="random_phase", amplitude=amplitude, seed=seed)

    @classmethod
    def random_gaussian(cls, amplitude: float, seed: int) -> "InitialData":
        return cls(kind="random_gaussian", amplitude=amplitude, seed=seed)

    @classmethod
    def gaussian_comb(cls, coeffs: Sequence[complex], comb_origin: int | None = None) -> "InitialData":
        arr = np.asarray(coeffs, dtype=complex)
        if np.any(np.abs(arr) > 1.0 + 1e-12):
            raise ValueError("comb coefficients must satisfy |a_j| <= 1")
        if comb_origin is None:
            comb_origin = -(len(arr) // 2)
        return cls(kind="gaussian_comb", coeffs=arr, comb_origin=comb_origin)

    @classmethod
    def random_comb(cls, amplitude: float, half_extent: int, seed: int) -> "InitialData":
        """Comb with unit-modulus random-phase a_j scaled by amplitude <= 1."""
        if not 0 <= amplitude <= 1:
            raise ValueError("comb amplitude must lie in [0, 1]")
        rng = np.random.default_rng(seed)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=2 * half_extent + 1)
        return cls.gaussian_comb(amplitude * np.exp(1j * theta), -half_extent)

    @classmethod
    def periodic(cls, amplitudes: Sequence[complex], frequencies: Sequence[float]) -> "InitialData":
        if len(amplitudes) != len(frequencies):
            raise ValueError("amplitudes and frequencies must have equal length")
        return cls(
            kind="periodic",
            amplitudes=tuple(complex(a) for a in amplitudes),
            frequencies=tuple(float(f) for f in frequencies),
        )

    @classmethod
    def random_band(cls, amplitude: float, k_band: float, seed: int) -> "InitialData":
        return cls(kind="random_band", amplitude=amplitude, k_band=k_band, seed=seed)

    @property
    def sup_bound(self) -> float:
        """A with sup|psi0| <= A (inf for the unbounded Gaussian kind)."""
        if self.kind in ("constant", "delta", "random_phase", "random_band"):
            return self.amplitude
        if self.kind == "gaussian_comb":
            # each site sees at most the full comb of unit Gaussians
            return float(np.max(np.abs(self.coeffs))) * 1.7726372048266521
        if self.kind == "periodic":
            return float(np.sum(np.abs(self.amplitudes)))
        return float("inf")


def gaussian_comb_eval(coeffs: Sequence[complex], x, comb_origin: int = 0):
    """Pointwise sum_j a_j exp(-(x-j)^2), j = comb_origin + index.

    Terms with exp(-(x-j)^2) < COMB_TRUNCATION are dropped (exact to double
    precision); coefficients must satisfy |a_j| <= 1.
    """
    a = np.asarray(coeffs, dtype=complex)
    if np.any(np.abs(a) > 1.0 + 1e-12):
        raise ValueError("comb coefficients must satisfy |a_j| <= 1")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    j = comb_origin + np.arange(len(a), dtype=float)
    # window of centers that can contribute at least COMB_TRUNCATION
    reach = np.sqrt(-np.log(COMB_TRUNCATION))
    out = np.zeros(xv.shape, dtype=complex)
    if len(a):
        lo = np.searchsorted(j, xv - reach, side="left")
        hi = np.searchsorted(j, xv + reach, side="right")
        for idx in range(xv.shape[0]):
            jj = j[lo[idx]:hi[idx]]
            out[idx] = np.sum(a[lo[idx]:hi[idx]] * np.exp(-(xv[idx] - jj) ** 2))
    if np.ndim(x) == 0:
        return complex(out[0])
    return out


def _snap_frequencies(frequencies, fundamental):
    """Snap requested frequencies to integer multiples of the fundamental."""
    return [round(f / fundamental) * fundamental for f in frequencies]


def make_initial_lattice(spec: InitialData, extent: int) -> LatticeField:
    """Realize an InitialData spec on the truncated lattice, sites -N..N."""
    if extent < 1:
        raise ValueError("extent must be >= 1")
    n_sites = 2 * extent + 1
    sites = np.arange(-extent, extent + 1, dtype=float)
    if spec.kind == "constant":
        vals = np.full(n_sites, spec.amplitude, dtype=complex)
    elif spec.kind == "delta":
        vals = np.zeros(n_sites, dtype=complex)
        vals[extent] = spec.amplitude
    elif spec.kind == "random_phase":
        rng = np.random.default_rng(spec.seed)
        vals = spec.amplitude * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n_sites))
    elif spec.kind == "random_gaussian":
        rng = np.random.default_rng(spec.seed)
        vals = spec.amplitude * (
            rng.standard_normal(n_sites) + 1j * rng.standard_normal(n_sites)
        ) / np.sqrt(2.0)
    elif spec.kind == "gaussian_comb":
        vals = gaussian_comb_eval(spec.coeffs, sites, spec.comb_origin)
    elif spec.kind == "periodic":
        # ring-commensurate frequencies keep the data truly periodic across
        # the wrap seam
        fund = 2.0 * np.pi / n_sites
        freqs = _snap_frequencies(spec.frequencies, fund)
        vals = np.zeros(n_sites, dtype=complex)
        for amp, f in zip(spec.amplitudes, freqs):
            vals += amp * np.exp(1j * f * sites)
    elif spec.kind == "random_band":
        raise ValueError("random_band is a continuum-grid data kind")
    else:
        raise ValueError(f"unknown initial data kind {spec.kind!r}")
    return LatticeField(values=vals, extent=extent)


def make_initial_grid(spec: InitialData, box_length: float, size: int) -> GridField:
    """Realize an InitialData spec on the periodic grid."""
    x = -box_length / 2 + (box_length / size) * np.arange(size)
    if spec.kind == "constant":
        vals = np.full(size, spec.amplitude, dtype=complex)
    elif spec.kind == "gaussian_comb":
        vals = gaussian_comb_eval(spec.coeffs, x, spec.comb_origin)
    elif spec.kind == "periodic":
        fund = 2.0 * np.pi / box_length
        freqs = _snap_frequencies(spec.frequencies, fund)
        vals = np.zeros(size, dtype=complex)
        for amp, f in zip(spec.amplitudes, freqs):
            vals += amp * np.exp(1j * f * x)
    elif spec.kind == "random_band":
        rng = np.random.default_rng(spec.seed)
        n_modes = int(np.floor(spec.k_band * box_length / (2.0 * np.pi)))
        vals = np.zeros(size, dtype=complex)
        for m in range(1, n_modes + 1):
            k = 2.0 * np.pi * m / box_length
            c_plus = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
            c_minus = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
            vals += c_plus * np.exp(1j * k * x) + c_minus * np.exp(-1j * k * x)
        peak = np.max(np.abs(vals))
        if peak > 0:
            vals *= spec.amplitude / peak
    else:
        raise ValueError(f"initial data kind {spec.kind!r} not defined on the grid")
    return GridField(values=vals, box_length=box_length)
