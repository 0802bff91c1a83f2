"""Frequency, extremum and drift extraction from sampled time series."""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import PreconditionError

logger = logging.getLogger(__name__)

# first step below this fraction of the largest step: the series starts at a turning point
FLAT_START = 0.05


@dataclass(frozen=True)
class Extrema:
    tau: np.ndarray
    value: np.ndarray
    is_max: np.ndarray


def _series(tau, signal) -> Tuple[np.ndarray, np.ndarray]:
    tau = np.asarray(tau, dtype=float)
    signal = np.asarray(signal, dtype=float)
    if tau.shape != signal.shape or tau.ndim != 1 or len(tau) < 3:
        raise PreconditionError("need matching 1-d series of at least 3 samples", "analysis")
    return tau, signal


def zero_crossings(tau, signal) -> np.ndarray:
    """Linearly interpolated sign changes."""
    tau, signal = _series(tau, signal)
    idx = np.nonzero(np.signbit(signal[:-1]) != np.signbit(signal[1:]))[0]
    t0, t1 = tau[idx], tau[idx + 1]
    s0, s1 = signal[idx], signal[idx + 1]
    return t0 - s0 * (t1 - t0) / (s1 - s0)


def zero_crossing_frequency(tau, signal) -> float:
    """Angular frequency π/(mean spacing of zero crossings)."""
    crossings = zero_crossings(tau, signal)
    if len(crossings) < 2:
        raise PreconditionError("fewer than two zero crossings", "analysis")
    spacing = (crossings[-1] - crossings[0]) / (len(crossings) - 1)
    return math.pi / spacing


def local_extrema(tau, signal) -> Extrema:
    """Interior extrema refined by a parabola through the three nearest samples."""
    tau, signal = _series(tau, signal)
    left, centre, right = signal[:-2], signal[1:-1], signal[2:]
    is_max = (centre > left) & (centre >= right)
    is_min = (centre < left) & (centre <= right)
    idx = np.nonzero(is_max | is_min)[0] + 1
    y0, y1, y2 = signal[idx - 1], signal[idx], signal[idx + 1]
    curvature = y0 - 2 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(curvature != 0, 0.5 * (y0 - y2) / curvature, 0.0)
    step = tau[idx + 1] - tau[idx]
    peak = y1 - 0.25 * (y0 - y2) * shift
    return Extrema(tau[idx] + shift * step, peak, is_max[idx - 1])


def fit_linear_drift(tau, signal) -> Tuple[float, float]:
    """Least-squares (slope, intercept)."""
    tau, signal = _series(tau, signal)
    slope, intercept = np.polyfit(tau, signal, 1)
    return float(slope), float(intercept)


def _starts_flat(signal: np.ndarray) -> bool:
    steps = np.abs(np.diff(signal))
    return bool(steps.max() > 0 and steps[0] <= FLAT_START * steps.max())


def first_period(tau, signal) -> float:
    """Period of the first full oscillation of ``signal``.

    The period is the spacing of two successive extrema of the same kind,
    taking the pair that completes earliest. The first sample counts as an
    extremum only when the series starts flat, so a phase-shifted oscillation
    is not mistaken for one that starts at a turning point.

    Args:
        tau: Sample times, increasing.
        signal: Samples of the oscillating series.

    Returns:
        The period in the units of ``tau``.

    Raises:
        PreconditionError: If no two extrema of the same kind are found.
    """
    tau, signal = _series(tau, signal)
    ext = local_extrema(tau, signal)
    maxima = list(ext.tau[ext.is_max])
    minima = list(ext.tau[~ext.is_max])
    if _starts_flat(signal):
        (minima if signal[1] >= signal[0] else maxima).insert(0, tau[0])
    pairs = [times[:2] for times in (maxima, minima) if len(times) >= 2]
    if not pairs:
        raise PreconditionError("series does not cover a full period", "analysis")
    first, second = min(pairs, key=lambda pair: pair[1])
    return float(second - first)


def breakdown_time(tau, oscillation) -> Optional[float]:
    """First extremum whose magnitude is below half the first one, or None."""
    ext = local_extrema(tau, oscillation)
    if len(ext.value) < 2:
        return None
    reference = abs(ext.value[0])
    for t, value in zip(ext.tau[1:], ext.value[1:]):
        if abs(value) < 0.5 * reference:
            return float(t)
    return None
