"""
Diagnostics: feed correlation, kNN differential entropy and hour-of-week
energy matrices.
"""

from __future__ import annotations

import warnings
import zlib
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from .core import (
    SECONDS_PER_HOUR,
    MeterHierarchy,
    PowerSeries,
    align,
    day_of_week,
)
from .errors import HnilmError, NoOverlap, TooShort, UndefinedCorrelation
from .io import csv_text, fmt_num

DAY_NAMES = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


@dataclass(frozen=True)
class CorrelationMatrix:
    labels: tuple[str, ...]
    values: np.ndarray

    def __getitem__(self, pair: tuple[str, str]) -> float:
        i, j = (self.labels.index(p) for p in pair)
        return float(self.values[i, j])

    def to_csv(self) -> str:
        rows = [(lab, *(fmt_num(v) for v in row)) for lab, row in zip(self.labels, self.values)]
        return csv_text(("", *self.labels), rows)


@dataclass(frozen=True)
class HourwiseMatrix:
    """
    Mean hourly energy per (local weekday, hour), scaled so the largest cell
    is 1. Cells never observed are NaN; ``counts`` holds observations per cell.
    """

    values: np.ndarray
    counts: np.ndarray

    def to_csv(self) -> str:
        rows = [(DAY_NAMES[d], *(fmt_num(v) for v in self.values[d])) for d in range(7)]
        return csv_text(("day", *(str(h) for h in range(24))), rows)


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc, yc = x - x.mean(), y - y.mean()
    r = float(np.dot(xc, yc) / np.sqrt(np.dot(xc, xc) * np.dot(yc, yc)))
    return min(1.0, max(-1.0, r))


def correlation_matrix(feeds: Mapping[str, PowerSeries]) -> CorrelationMatrix:
    """
    Pairwise Pearson correlation over aligned samples present in both feeds.

    Raises
    ------
    UndefinedCorrelation
        If a feed is constant over an overlap.
    NoOverlap
        If a pair shares fewer than two samples.
    """
    labels = tuple(feeds)
    if len(labels) < 2:
        raise ValueError("need at least two feeds")
    n = len(labels)
    out = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = align(feeds[labels[i]], feeds[labels[j]])
            keep = ~(a.missing | b.missing)
            x, y = a.values[keep], b.values[keep]
            if x.size < 2:
                raise NoOverlap(f"{labels[i]!r} and {labels[j]!r} share < 2 samples")
            for name, v in ((labels[i], x), (labels[j], y)):
                if np.all(v == v[0]):
                    raise UndefinedCorrelation(name)
            out[i, j] = out[j, i] = pearson(x, y)
    return CorrelationMatrix(labels, out)


def knn_entropy(data, k: int = 3, seed: int = 0, jitter: float = 1e-10) -> float:
    """
    Kozachenko-Leonenko differential entropy estimate of scalar data, in bits.

    ``H = (psi(n) - psi(k)) / ln 2 + mean(log2(2 * d_k))`` where ``d_k`` is
    each sample's distance to its k-th nearest neighbour. Seeded uniform
    noise of amplitude ``jitter * max(1, max|x|)`` is added first so ties do
    not produce zero distances; the scaling keeps the noise above float
    resolution for kilowatt-range data.

    Parameters
    ----------
    data : PowerSeries or array_like
        Missing samples (NaN) are dropped.
    """
    x = data.values if isinstance(data, PowerSeries) else np.asarray(data, dtype=float)
    x = x[~np.isnan(x)].ravel()
    if k < 1:
        raise ValueError("k must be >= 1")
    n = x.size
    if n < k + 1:
        raise TooShort(f"need at least {k + 1} samples, got {n}")
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.max(np.abs(x))))
    x = x + jitter * scale * rng.random(n)
    tree = cKDTree(x[:, None])
    dist = tree.query(x[:, None], k=k + 1)[0][:, k]
    return float((digamma(n) - digamma(k)) / np.log(2) + np.mean(np.log2(2 * dist)))


def node_seed(node_id: str) -> int:
    return zlib.crc32(node_id.encode("utf-8"))


def entropy_by_level(h: MeterHierarchy, k: int = 3, raise_errors: bool = False) -> dict[str, float]:
    """
    kNN entropy of every metered node.

    Jitter is seeded from the node id, so results do not depend on
    evaluation order. Nodes whose estimate fails are skipped with a warning
    unless ``raise_errors`` is set.
    """
    out = {}
    for nid in h.walk():
        s = h[nid].series
        if s is None:
            continue
        try:
            out[nid] = knn_entropy(s, k, seed=node_seed(nid))
        except HnilmError as exc:
            if raise_errors:
                raise
            warnings.warn(f"entropy skipped for {nid!r}: {exc}", stacklevel=2)
    return out


def entropy_csv(entropies: Mapping[str, float]) -> str:
    return csv_text(("node_id", "entropy_bits"), [(n, fmt_num(v)) for n, v in entropies.items()])


def hourwise_matrix(series: PowerSeries, utc_offset: float = 0) -> HourwiseMatrix:
    """
    Hour-of-week energy pattern normalised by its largest cell.

    Each local clock hour's energy is its mean present power times one hour;
    a cell is the mean over all occurrences of that (weekday, hour).
    """
    present = ~series.missing
    ts = series.timestamps[present]
    vals = series.values[present]
    hour_idx = np.floor((ts + utc_offset) / SECONDS_PER_HOUR).astype(np.int64)
    uniq, inv = np.unique(hour_idx, return_inverse=True)
    hourly_energy = np.bincount(inv, weights=vals) / np.bincount(inv)  # Wh in one hour
    start_of_hour = uniq * SECONDS_PER_HOUR - utc_offset
    dow = day_of_week(start_of_hour, utc_offset)
    hod = uniq % 24
    cell = dow * 24 + hod
    sums = np.bincount(cell, weights=hourly_energy, minlength=168)
    counts = np.bincount(cell, minlength=168)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    peak = np.nanmax(means) if np.any(counts) else 0.0
    if peak > 0:
        means = means / peak
    return HourwiseMatrix(means.reshape(7, 24), counts.reshape(7, 24))


def weekday_weekend_separation(m: HourwiseMatrix) -> float:
    """Relative gap between mean weekday and mean weekend cells, in [0, 1]."""
    wd = np.nanmean(m.values[:5])
    we = np.nanmean(m.values[5:])
    top = max(wd, we)
    return float(abs(wd - we) / top) if top > 0 else 0.0
