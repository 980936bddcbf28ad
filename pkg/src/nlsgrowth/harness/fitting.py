"""Power-law exponent estimation: least squares of log(value) vs log(t)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FitResult", "fit_growth", "dyadic_subsample", "last_decade_window"]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    window: tuple[float, float]
    residual_rms: float
    n_points: int


def fit_growth(t: np.ndarray, values: np.ndarray, window: tuple[float, float]) -> FitResult:
    """Fit value ~ C * t^slope on the samples with t inside ``window``.

    Requires at least 8 in-window samples with positive t and value.
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    t_lo, t_hi = window
    if not t_lo < t_hi:
        raise ValueError("window must satisfy t_lo < t_hi")
    mask = (t >= t_lo) & (t <= t_hi) & (t > 0)
    if np.count_nonzero(mask) < 8:
        raise ValueError(
            f"need >= 8 samples in window [{t_lo}, {t_hi}], got {np.count_nonzero(mask)}"
        )
    tv = t[mask]
    vv = values[mask]
    if np.any(vv <= 0):
        raise ValueError("growth fit requires positive values in the window")
    lx = np.log(tv)
    ly = np.log(vv)
    design = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        window=(float(t_lo), float(t_hi)),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
        n_points=int(len(tv)),
    )


def last_decade_window(t_final: float) -> tuple[float, float]:
    """Default fit window: the last decade of the run, [T/10, T]."""
    return (t_final / 10.0, t_final)


def dyadic_subsample(t: np.ndarray, values: np.ndarray, per_octave: int = 8):
    """Thin a time series so samples are roughly uniform in log t.

    Keeps every sample whose log-time advanced by at least 1/per_octave
    octaves since the last kept sample (first positive-t sample always kept).
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = []
    last_log = -np.inf
    step = np.log(2.0) / per_octave
    for i, ti in enumerate(t):
        if ti <= 0:
            continue
        if np.log(ti) >= last_log + step or not keep:
            keep.append(i)
            last_log = np.log(ti)
    idx = np.array(keep, dtype=int)
    return t[idx], values[idx]
