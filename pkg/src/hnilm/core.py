"""
Power time series on a uniform grid and the metering hierarchy model.

Missing samples are stored as NaN. Timestamps are UTC epoch seconds and are
implicit: ``timestamp(i) = start_time + i * period``.
"""

from __future__ import annotations

import datetime as _dt
import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyInput,
    IncompatiblePeriod,
    InvalidHierarchy,
    InvalidSample,
    NoData,
    NoOverlap,
)

SECONDS_PER_HOUR = 3600
SECONDS_PER_DAY = 86400
SECONDS_PER_WEEK = 7 * SECONDS_PER_DAY
# 1970-01-01 was a Thursday; Monday = 0.
_EPOCH_WEEKDAY = 3
_EPOCH_ORDINAL = _dt.date(1970, 1, 1).toordinal()


# ---------------------------------------------------------------------------
# Local-time helpers
# ---------------------------------------------------------------------------
def local_day_index(timestamps, utc_offset: float = 0) -> np.ndarray:
    """Days since 1970-01-01 in local time, as integers."""
    t = np.asarray(timestamps, dtype=float) + utc_offset
    return np.floor(t / SECONDS_PER_DAY).astype(np.int64)


def local_date(day_index: int) -> _dt.date:
    return _dt.date.fromordinal(_EPOCH_ORDINAL + int(day_index))


def day_of_week(timestamps, utc_offset: float = 0) -> np.ndarray:
    """Local day of week, Monday = 0 ... Sunday = 6."""
    return (local_day_index(timestamps, utc_offset) + _EPOCH_WEEKDAY) % 7


def hour_of_day(timestamps, utc_offset: float = 0) -> np.ndarray:
    t = np.asarray(timestamps, dtype=float) + utc_offset
    return (np.floor(t / SECONDS_PER_HOUR).astype(np.int64)) % 24


def second_of_week(timestamps, utc_offset: float = 0) -> np.ndarray:
    """Seconds elapsed since local Monday 00:00."""
    t = np.asarray(timestamps, dtype=float) + utc_offset
    return np.mod(t - (7 - _EPOCH_WEEKDAY) * SECONDS_PER_DAY, SECONDS_PER_WEEK)


def is_weekend(timestamps, utc_offset: float = 0) -> np.ndarray:
    return day_of_week(timestamps, utc_offset) >= 5


# ---------------------------------------------------------------------------
# PowerSeries
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PowerSeries:
    """
    Uniformly sampled active power for one meter.

    Parameters
    ----------
    start_time : float
        UTC epoch seconds of the first sample.
    period : float
        Sampling interval in seconds, > 0.
    values : array_like
        Watts. NaN marks a missing sample. Stored as a read-only float64 copy.
    meta : dict, optional
        Free-form annotations (e.g. which samples were zero-filled). Not part
        of equality.
    signed : bool
        Allow negative values (residuals). Power readings leave this False.
    """

    start_time: float
    period: float
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False, repr=False)
    signed: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValueError(f"period must be > 0, got {self.period}")
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        present = vals[~np.isnan(vals)]
        if not np.all(np.isfinite(present)):
            raise InvalidSample("power samples must be finite")
        if not self.signed and np.any(present < 0):
            raise InvalidSample("power samples must be non-negative")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (
            self.start_time == other.start_time
            and self.period == other.period
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    @property
    def timestamps(self) -> np.ndarray:
        return self.start_time + np.arange(len(self)) * self.period

    @property
    def end_time(self) -> float:
        """Exclusive end of the covered interval."""
        return self.start_time + len(self) * self.period

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    def with_values(self, values, **meta) -> "PowerSeries":
        return PowerSeries(self.start_time, self.period, values, dict(meta), self.signed)

    def window(self, start: float, end: float) -> "PowerSeries":
        """Samples whose timestamps fall in ``[start, end)``."""
        i0 = max(0, math.ceil((start - self.start_time) / self.period - 1e-9))
        i1 = min(len(self), math.ceil((end - self.start_time) / self.period - 1e-9))
        i1 = max(i0, i1)
        return PowerSeries(
            self.start_time + i0 * self.period, self.period, self.values[i0:i1], signed=self.signed
        )

    def energy_wh(self) -> float:
        """Energy over non-missing samples, in watt-hours."""
        return float(np.nansum(self.values) * self.period / SECONDS_PER_HOUR)


def regularize(samples: Iterable[tuple[float, float]], period: float) -> PowerSeries:
    """
    Bin irregular ``(timestamp, watts)`` samples onto a uniform grid.

    Each slot ``[t, t + period)`` takes the mean of the raw samples it
    contains; empty slots are missing. The grid starts at
    ``floor(first_timestamp / period) * period``.

    Examples
    --------
    >>> regularize([(0, 100), (30, 100), (95, 40)], 30).values.tolist()
    [100.0, 100.0, nan, 40.0]
    """
    if not period > 0:
        raise ValueError("period must be > 0")
    arr = np.asarray(list(samples), dtype=float)
    if arr.size == 0:
        raise EmptyInput("no samples to regularize")
    arr = arr.reshape(-1, 2)
    t, w = arr[:, 0], arr[:, 1]
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(w))) or np.any(w < 0):
        raise InvalidSample("timestamps and watts must be finite, watts non-negative")
    start = math.floor(t.min() / period) * period
    bins = np.floor((t - start) / period).astype(np.int64)
    n = int(bins.max()) + 1
    sums = np.bincount(bins, weights=w, minlength=n)
    counts = np.bincount(bins, minlength=n)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    if float(start).is_integer():
        start = int(start)
    return PowerSeries(start, period, vals)


def _period_ratio(new_period: float, period: float) -> int:
    ratio = new_period / period
    k = int(round(ratio))
    if k < 1 or abs(k * period - new_period) > 1e-9 * new_period:
        raise IncompatiblePeriod(
            f"new period {new_period} is not a positive integer multiple of {period}"
        )
    return k


def resample(series: PowerSeries, new_period: float) -> PowerSeries:
    """
    Downsample by block means over ``k = new_period / period`` samples.

    Missing samples are ignored within a block; an all-missing block is
    missing. A trailing partial block is averaged over what it has.
    """
    k = _period_ratio(new_period, series.period)
    if k == 1:
        return series
    n = len(series)
    n_out = -(-n // k)
    padded = np.full(n_out * k, np.nan)
    padded[:n] = series.values
    blocks = padded.reshape(n_out, k)
    present = ~np.isnan(blocks)
    counts = present.sum(axis=1)
    sums = np.where(present, blocks, 0.0).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return PowerSeries(series.start_time, new_period, vals)


def _check_grid(a: PowerSeries, b: PowerSeries) -> None:
    if a.period != b.period:
        raise IncompatiblePeriod(f"periods differ: {a.period} vs {b.period}")
    offset = (b.start_time - a.start_time) / a.period
    if abs(offset - round(offset)) > 1e-9:
        raise IncompatiblePeriod("sample grids are not phase-aligned")


def align_many(series: Sequence[PowerSeries]) -> list[PowerSeries]:
    """Crop every series to the common overlapping time range."""
    if not series:
        raise EmptyInput("nothing to align")
    first = series[0]
    for s in series[1:]:
        _check_grid(first, s)
    start = max(s.start_time for s in series)
    end = min(s.end_time for s in series)
    if end <= start:
        raise NoOverlap("series do not overlap in time")
    return [s.window(start, end) for s in series]


def align(a: PowerSeries, b: PowerSeries) -> tuple[PowerSeries, PowerSeries]:
    """Crop two equal-period series to their overlapping range."""
    out = align_many([a, b])
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Metering hierarchy
# ---------------------------------------------------------------------------
class Level(enum.IntEnum):
    LOAD = 0
    FLOOR = 1
    BUILDING = 2
    TRANSFORMER = 3

    @classmethod
    def parse(cls, name: str | "Level") -> "Level":
        if isinstance(name, Level):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise InvalidHierarchy(f"unknown metering level {name!r}") from None

    @property
    def label(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class MeterNode:
    id: str
    level: Level
    series: PowerSeries | None = None
    children: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "level", Level.parse(self.level))
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class MeterHierarchy:
    """
    Rooted tree of meters. Structure is validated on construction.

    Raises
    ------
    InvalidHierarchy
        On unresolved child ids, multiple parents, cycles, unreachable nodes,
        a root mismatch or a level inversion along a root-to-leaf path.
    """

    nodes: Mapping[str, MeterNode]
    root: str

    def __post_init__(self):
        nodes = dict(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if self.root not in nodes:
            raise InvalidHierarchy(f"root {self.root!r} is not a node")
        parent: dict[str, str] = {}
        for nid, node in nodes.items():
            if node.id != nid:
                raise InvalidHierarchy(f"node key {nid!r} != node id {node.id!r}")
            for c in node.children:
                if c not in nodes:
                    raise InvalidHierarchy(f"child {c!r} of {nid!r} does not resolve")
                if c in parent:
                    raise InvalidHierarchy(f"node {c!r} has more than one parent")
                parent[c] = nid
                if nodes[c].level > node.level:
                    raise InvalidHierarchy(
                        f"level inversion: {c!r} ({nodes[c].level.label}) under "
                        f"{nid!r} ({node.level.label})"
                    )
        if self.root in parent:
            raise InvalidHierarchy("root has a parent (cycle)")
        roots = [n for n in nodes if n not in parent]
        if roots != [self.root]:
            raise InvalidHierarchy(f"expected exactly one root, found {roots}")
        seen = set()
        stack = [self.root]
        while stack:
            nid = stack.pop()
            if nid in seen:
                raise InvalidHierarchy("cycle detected")
            seen.add(nid)
            stack.extend(nodes[nid].children)
        if len(seen) != len(nodes):
            raise InvalidHierarchy("hierarchy contains a cycle or unreachable nodes")
        object.__setattr__(self, "_parent", parent)

    def __getitem__(self, node_id: str) -> MeterNode:
        return self.nodes[node_id]

    def __contains__(self, node_id) -> bool:
        return node_id in self.nodes

    def parent(self, node_id: str) -> str | None:
        return self._parent.get(node_id)

    def walk(self) -> list[str]:
        """Node ids in depth-first pre-order from the root."""
        out, stack = [], [self.root]
        while stack:
            nid = stack.pop()
            out.append(nid)
            stack.extend(reversed(self.nodes[nid].children))
        return out

    def descendants(self, node_id: str, level: Level | None = None) -> list[str]:
        out, stack = [], list(reversed(self.nodes[node_id].children))
        while stack:
            nid = stack.pop()
            if level is None or self.nodes[nid].level == level:
                out.append(nid)
            stack.extend(reversed(self.nodes[nid].children))
        return out

    def series(self, node_id: str) -> PowerSeries:
        s = self.nodes[node_id].series
        if s is None:
            raise NoData(f"node {node_id!r} has no series")
        return s

    def with_series(self, node_id: str, series: PowerSeries | None) -> "MeterHierarchy":
        nodes = dict(self.nodes)
        nodes[node_id] = replace(nodes[node_id], series=series)
        return MeterHierarchy(nodes, self.root)

    @classmethod
    def from_parent_links(
        cls, records: Iterable[tuple[str, str | Level, str | None, PowerSeries | None]]
    ) -> "MeterHierarchy":
        """Build from ``(id, level, parent_id, series)`` records in any order."""
        records = list(records)
        children: dict[str, list[str]] = {r[0]: [] for r in records}
        roots = []
        for nid, _, parent, _ in records:
            if parent is None:
                roots.append(nid)
            elif parent not in children:
                raise InvalidHierarchy(f"parent {parent!r} of {nid!r} does not resolve")
            else:
                children[parent].append(nid)
        if len(children) != len(records):
            raise InvalidHierarchy("duplicate node ids")
        if len(roots) != 1:
            raise InvalidHierarchy(f"expected exactly one root, found {roots}")
        nodes = {
            nid: MeterNode(nid, Level.parse(level), series, tuple(children[nid]))
            for nid, level, _, series in records
        }
        return cls(nodes, roots[0])


def aggregate_children(h: MeterHierarchy, node_id: str) -> PowerSeries:
    """
    Pointwise sum of a node's metered children over their common time range.

    Missing child samples count as 0 W; the boolean mask of affected
    timestamps is stored in ``meta["filled_missing"]``.
    """
    kids = [h[c].series for c in h[node_id].children if h[c].series is not None]
    if not kids:
        raise NoData(f"node {node_id!r} has no metered children")
    kids = align_many(kids)
    total = np.zeros(len(kids[0]))
    filled = np.zeros(len(kids[0]), dtype=bool)
    for s in kids:
        miss = s.missing
        filled |= miss
        total = total + np.where(miss, 0.0, s.values)
    return PowerSeries(kids[0].start_time, kids[0].period, total, {"filled_missing": filled})


@dataclass(frozen=True)
class Violation:
    node_id: str
    timestamp: float
    parent_watts: float
    children_watts: float


def validate_hierarchy(h: MeterHierarchy, tolerance_fraction: float = 0.0) -> list[Violation]:
    """
    Report timestamps where a parent meter reads less than its metered
    children, beyond ``tolerance_fraction`` of the children's sum.
    """
    out: list[Violation] = []
    for nid in h.walk():
        node = h[nid]
        if node.series is None or not any(h[c].series is not None for c in node.children):
            continue
        try:
            parent, kids = align(node.series, aggregate_children(h, nid))
        except NoOverlap:
            continue
        p, c = parent.values, kids.values
        bad = ~np.isnan(p) & (p < (1.0 - tolerance_fraction) * c)
        ts = parent.timestamps
        out.extend(Violation(nid, float(ts[i]), float(p[i]), float(c[i])) for i in np.flatnonzero(bad))
    return out
