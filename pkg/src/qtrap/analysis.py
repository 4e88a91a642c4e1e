"""Collapse/revival event detection on sampled series.

The detector works on the S(P) series: it smooths with a centered moving
average, takes local maxima above a height threshold, thins them to a
minimum spacing, and labels each surviving peak by comparing the inversion
envelope at its time against the envelope's global median (revivals ride on
a loud envelope, collapses on a quiet one).  The threshold is a fraction of
the smoothed maximum, so detection is invariant under positive rescaling of
the series.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

DEFAULT_MIN_HEIGHT = 0.1
DEFAULT_MIN_SEPARATION = 20.0
DEFAULT_ZERO_THRESHOLD = 0.01
DEFAULT_ENVELOPE_HALF_WINDOW = 5.0

# Smoothing window width as a share of the peak spacing floor.
_SMOOTH_SHARE = 1.0 / 5.0

COLLAPSE = "collapse"
REVIVAL = "revival"


@dataclass(frozen=True)
class Event:
    """A detected peak: grid time, peak value of the smoothed series, label."""

    t: float
    value: float
    kind: str


@dataclass(frozen=True)
class EventReport:
    """Classified events plus the intervals where the series sits at zero."""

    events: tuple[Event, ...]
    onsets: tuple[tuple[float, float], ...]

    def with_onsets(self, onsets: Sequence[tuple[float, float]]) -> "EventReport":
        return replace(self, onsets=tuple(onsets))


def _split(series: Sequence[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(series), dtype=float)
    if arr.size == 0:
        raise ValueError("empty series")
    t = arr[:, 0]
    if np.any(np.diff(t) < 0):
        raise ValueError("series must be sorted by t")
    return t, arr[:, 1]


def envelope(
    series: Sequence[tuple[float, float]], half_window: float
) -> list[tuple[float, float]]:
    """Sliding maximum of |value| over [t - half_window, t + half_window]."""
    t, v = _split(series)
    if half_window <= 0:
        raise ValueError("half_window must be positive")
    if t.size >= 2:
        step = float(np.max(np.diff(t)))
        if step > 0 and half_window <= step:
            raise ValueError(
                f"half_window {half_window} must exceed the sampling step {step}"
            )
    mag = np.abs(v)
    lo = np.searchsorted(t, t - half_window, side="left")
    hi = np.searchsorted(t, t + half_window, side="right")
    out = np.array([mag[a:b].max() for a, b in zip(lo, hi)])
    return list(zip(t.tolist(), out.tolist()))


def _moving_average(t: np.ndarray, v: np.ndarray, width: float) -> np.ndarray:
    """Centered moving average over a t-width window, shrinking at the edges."""
    if width <= 0:
        return v.copy()
    half = 0.5 * width
    lo = np.searchsorted(t, t - half, side="left")
    hi = np.searchsorted(t, t + half, side="right")
    csum = np.concatenate(([0.0], np.cumsum(v)))
    return (csum[hi] - csum[lo]) / (hi - lo)


def find_peaks(
    series: Sequence[tuple[float, float]],
    min_height: float = DEFAULT_MIN_HEIGHT,
    min_separation: float = DEFAULT_MIN_SEPARATION,
    smooth_window: float | None = None,
) -> list[tuple[float, float]]:
    """Peaks of the smoothed series: (t, smoothed value) pairs, ascending in t.

    The series is smoothed with a centered moving average of width
    min_separation/5 (overridable via smooth_window).  min_height is a
    fraction of the smoothed maximum.  Local maxima above the threshold are
    thinned greedily, highest first, until surviving peaks are at least
    min_separation apart.
    """
    t, v = _split(series)
    if min_separation <= 0:
        raise ValueError("min_separation must be positive")
    if smooth_window is None:
        smooth_window = min_separation * _SMOOTH_SHARE
    sm = _moving_average(t, v, smooth_window)
    threshold = min_height * float(sm.max())
    candidates = [
        i
        for i in range(1, len(sm) - 1)
        if sm[i] > sm[i - 1] and sm[i] >= sm[i + 1] and sm[i] > threshold
    ]
    kept: list[int] = []
    for i in sorted(candidates, key=lambda i: (-sm[i], i)):
        if all(abs(t[i] - t[j]) >= min_separation for j in kept):
            kept.append(i)
    kept.sort()
    return [(float(t[i]), float(sm[i])) for i in kept]


def classify_events(
    sp_peaks: Sequence[tuple[float, float]],
    inv_series: Sequence[tuple[float, float]],
    half_window: float = DEFAULT_ENVELOPE_HALF_WINDOW,
) -> EventReport:
    """Label each S(P) peak by the loudness of the inversion envelope at its time.

    A peak is a revival when the envelope of |Inv| there strictly exceeds the
    envelope's global median, otherwise a collapse.  Onsets are left empty;
    attach them from find_onsets via EventReport.with_onsets.
    """
    if not sp_peaks:
        return EventReport(events=(), onsets=())
    env = envelope(inv_series, half_window)
    t_env = np.array([p[0] for p in env])
    v_env = np.array([p[1] for p in env])
    median = float(np.median(v_env))
    events = []
    for tp, vp in sp_peaks:
        i = int(np.argmin(np.abs(t_env - tp)))
        kind = REVIVAL if v_env[i] > median else COLLAPSE
        events.append(Event(t=float(tp), value=float(vp), kind=kind))
    return EventReport(events=tuple(events), onsets=())


def find_onsets(
    sp_series: Sequence[tuple[float, float]],
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
) -> list[tuple[float, float]]:
    """Maximal t-intervals where the series stays at or below the threshold."""
    t, v = _split(sp_series)
    intervals: list[tuple[float, float]] = []
    start: float | None = None
    for ti, vi in zip(t, v):
        if vi <= zero_threshold:
            if start is None:
                start = float(ti)
            end = float(ti)
        elif start is not None:
            intervals.append((start, end))
            start = None
    if start is not None:
        intervals.append((start, end))
    return intervals
