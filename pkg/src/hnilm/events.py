"""
Step-change event detection and daily event statistics.

An event is a change between two consecutive samples whose magnitude is
strictly greater than the detection threshold.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from datetime import date
from typing import Sequence

import numpy as np

from .core import PowerSeries, align_many, local_date, local_day_index
from .errors import TooShort
from .io import csv_text, fmt_num


@dataclass(frozen=True)
class Event:
    index: int
    timestamp: float
    delta: float


@dataclass(frozen=True)
class EventStats:
    per_day_counts: dict[date, int]
    median: float
    max: int

    def to_csv(self) -> str:
        rows = [(d.isoformat(), c) for d, c in sorted(self.per_day_counts.items())]
        rows += [("median", fmt_num(self.median)), ("max", self.max)]
        return csv_text(("day", "events"), rows)


def _event_mask(values: np.ndarray, threshold: float) -> tuple[np.ndarray, np.ndarray]:
    if not threshold > 0:
        raise ValueError("threshold must be > 0")
    if values.size < 2:
        raise TooShort("need at least two samples to detect events")
    delta = values[1:] - values[:-1]
    with np.errstate(invalid="ignore"):
        mask = np.abs(delta) > threshold
    return mask & ~np.isnan(delta), delta


def detect_events(series: PowerSeries, threshold: float) -> list[Event]:
    """
    Emit one event per consecutive pair ``(i-1, i)`` with
    ``|v[i] - v[i-1]| > threshold``. Pairs touching a missing sample are
    skipped.

    Examples
    --------
    >>> s = PowerSeries(0, 30, [0, 150, 150, 40])
    >>> [(e.index, e.delta) for e in detect_events(s, 100)]
    [(1, 150.0), (3, -110.0)]
    """
    mask, delta = _event_mask(series.values, threshold)
    idx = np.flatnonzero(mask) + 1
    ts = series.start_time + idx * series.period
    return [Event(int(i), float(t), float(delta[i - 1])) for i, t in zip(idx, ts)]


def events_to_csv(events: Sequence[Event]) -> str:
    rows = [(e.index, fmt_num(e.timestamp), fmt_num(e.delta)) for e in events]
    return csv_text(("index", "timestamp", "delta_watts"), rows)


def daily_event_stats(series: PowerSeries, threshold: float, utc_offset: float = 0) -> EventStats:
    """
    Count events per local calendar day.

    Every local day touched by the series gets an entry, including days
    without events. The median of an even number of days is the mean of the
    two central counts.
    """
    mask, _ = _event_mask(series.values, threshold)
    days = local_day_index(series.timestamps, utc_offset)
    first, last = int(days[0]), int(days[-1])
    counts = np.bincount(days[1:][mask] - first, minlength=last - first + 1)
    per_day = {local_date(first + i): int(c) for i, c in enumerate(counts)}
    values = list(per_day.values())
    return EventStats(per_day, float(statistics.median(values)), int(max(values)))


def threshold_sweep(
    series: PowerSeries, thresholds: Sequence[float], utc_offset: float = 0
) -> dict[float, float]:
    """Median events per day for each threshold."""
    if not len(thresholds):
        raise ValueError("thresholds must be non-empty")
    return {t: daily_event_stats(series, t, utc_offset).median for t in thresholds}


def simultaneous_event_mask(feeds: Sequence[PowerSeries], threshold: float):
    """
    Per-interval flags of two or more feeds having an event in the same
    interval, over the feeds' common time range.

    Returns
    -------
    mask : ndarray of bool, length n - 1
        Entry ``j`` covers the interval ending at sample ``j + 1``.
    timestamps : ndarray
        Timestamp of the sample closing each interval.
    """
    if len(feeds) < 2:
        raise ValueError("need at least two feeds")
    aligned = align_many(list(feeds))
    hits = sum(_event_mask(s.values, threshold)[0].astype(int) for s in aligned)
    return hits >= 2, aligned[0].timestamps[1:]


def simultaneous_event_times(feeds: Sequence[PowerSeries], threshold: float) -> list[float]:
    mask, ts = simultaneous_event_mask(feeds, threshold)
    return [float(t) for t in ts[mask]]


def simultaneous_event_rate(feeds: Sequence[PowerSeries], threshold: float) -> float:
    """Fraction of sample intervals in which at least two feeds change state."""
    mask, _ = simultaneous_event_mask(feeds, threshold)
    return float(mask.mean())
