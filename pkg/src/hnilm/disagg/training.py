"""State-level training from sub-metered series with 1-D k-means."""

from __future__ import annotations

import warnings

import numpy as np

from ..core import PowerSeries
from ..errors import DegenerateTraining, EmptyInput, NoOnState
from .models import ApplianceModel

DEFAULT_SEED = 0


def kmeans_1d(
    values,
    k: int,
    seed: int = DEFAULT_SEED,
    max_iter: int = 100,
    tol: float = 0.1,
) -> np.ndarray:
    """
    Lloyd's k-means on scalar data with k-means++ seeding.

    Iterates until no centroid moves by ``tol`` or more, or ``max_iter``
    rounds. Empty clusters keep their previous centroid. Returns the
    centroids sorted ascending.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size < k:
        raise ValueError("fewer samples than clusters")
    rng = np.random.default_rng(seed)
    centroids = [x[rng.integers(x.size)]]
    for _ in range(1, k):
        d2 = np.min((x[:, None] - np.asarray(centroids)[None, :]) ** 2, axis=1)
        total = d2.sum()
        if total == 0:
            centroids.append(x[rng.integers(x.size)])
        else:
            centroids.append(x[rng.choice(x.size, p=d2 / total)])
    c = np.sort(np.asarray(centroids, dtype=float))
    for _ in range(max_iter):
        # sorted centroids: nearest is found via midpoints
        labels = np.searchsorted((c[1:] + c[:-1]) / 2, x)
        sums = np.bincount(labels, weights=x, minlength=k)
        counts = np.bincount(labels, minlength=k)
        new = np.where(counts > 0, sums / np.maximum(counts, 1), c)
        order = np.argsort(new, kind="stable")
        new = new[order]
        moved = np.max(np.abs(new - c))
        c = new
        if moved < tol:
            break
    return c


def train_states(
    submetered: PowerSeries,
    num_states: int = 2,
    on_threshold: float = 10.0,
    name: str = "appliance",
    seed: int = DEFAULT_SEED,
) -> ApplianceModel:
    """
    Learn an appliance's power states from its own sub-metered series.

    State 0 is fixed at 0 W. The other ``num_states - 1`` levels are k-means
    centroids over samples above ``on_threshold``. When there are fewer
    distinct ON values than requested levels, those distinct values are used
    and a :class:`DegenerateTraining` warning is emitted.

    Raises
    ------
    NoOnState
        If no sample exceeds ``on_threshold``.
    """
    if num_states < 2:
        raise ValueError("num_states must be >= 2")
    vals = submetered.values[~submetered.missing]
    if vals.size == 0:
        raise EmptyInput("series has no samples")
    on = vals[vals > on_threshold]
    if on.size == 0:
        raise NoOnState(f"{name}: no sample above {on_threshold} W")
    k = num_states - 1
    distinct = np.unique(on)
    if distinct.size < k:
        warnings.warn(
            f"{name}: only {distinct.size} distinct ON values for {k} levels",
            DegenerateTraining,
            stacklevel=2,
        )
        levels = distinct
    else:
        levels = np.unique(kmeans_1d(on, k, seed=seed))
        if levels.size < k:
            warnings.warn(f"{name}: k-means produced coincident levels", DegenerateTraining, stacklevel=2)
    return ApplianceModel(name, (0.0, *levels.tolist()))
