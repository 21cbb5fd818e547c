"""Combinatorial optimisation (CO) disaggregation."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..core import PowerSeries
from ..errors import NoData, TooManyCombinations
from .models import ApplianceModel, DisaggResult

DEFAULT_MAX_COMBINATIONS = 10**6


def state_combinations(models: Sequence[ApplianceModel]) -> tuple[np.ndarray, np.ndarray]:
    """
    All state tuples in lexicographic order (first model most significant)
    and their total power, summed in model order.
    """
    sizes = [len(m.states) for m in models]
    combos = np.indices(sizes).reshape(len(sizes), -1).T
    totals = np.zeros(combos.shape[0])
    for i, m in enumerate(models):
        totals = totals + np.asarray(m.states)[combos[:, i]]
    return combos, totals


def co_disaggregate(
    aggregate: PowerSeries,
    models: Sequence[ApplianceModel],
    max_combinations: int = DEFAULT_MAX_COMBINATIONS,
) -> DisaggResult:
    """
    Pick, independently at every timestamp, the state tuple whose total power
    is closest to the aggregate.

    Ties go to the lower total power, then to the lexicographically smaller
    state tuple. Missing aggregate samples give missing predictions and
    state index -1.

    Raises
    ------
    TooManyCombinations
        When the product of state counts exceeds ``max_combinations``.
    """
    if not models:
        raise ValueError("need at least one appliance model")
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise ValueError("appliance names must be unique")
    n_combos = math.prod(len(m.states) for m in models)
    if n_combos > max_combinations:
        raise TooManyCombinations(
            f"{n_combos} state combinations exceed the cap of {max_combinations}"
        )
    a = aggregate.values
    present = ~np.isnan(a)
    if not present.any():
        raise NoData("aggregate has no samples")

    combos, totals = state_combinations(models)
    # Sort by (total, lexicographic rank); the first of each run of equal
    # totals is then the lexicographically smallest tuple.
    order = np.lexsort((np.arange(n_combos), totals))
    uniq, first = np.unique(totals[order], return_index=True)
    best_combo = order[first]

    x = a[present]
    j = np.searchsorted(uniq, x, side="left")
    left = np.clip(j - 1, 0, uniq.size - 1)
    right = np.clip(j, 0, uniq.size - 1)
    d_left = np.where(j > 0, np.abs(x - uniq[left]), np.inf)
    d_right = np.where(j < uniq.size, np.abs(x - uniq[right]), np.inf)
    pick = np.where(d_right < d_left, right, left)
    d = np.minimum(d_left, d_right)
    # Rounding can make |x - t| equal for adjacent distinct totals; the
    # lower total wins, so walk left while the distance is unchanged.
    while True:
        step = (pick > 0) & (np.abs(x - uniq[np.maximum(pick - 1, 0)]) == d)
        if not step.any():
            break
        pick = pick - step

    chosen = best_combo[pick]
    n = len(aggregate)
    state_idx = np.full((n, len(models)), -1, dtype=np.int64)
    state_idx[present] = combos[chosen]
    residual = np.full(n, np.nan)
    residual[present] = x - totals[chosen]

    predictions, states = {}, {}
    for i, m in enumerate(models):
        p = np.full(n, np.nan)
        p[present] = np.asarray(m.states)[state_idx[present, i]]
        predictions[m.name] = aggregate.with_values(p)
        states[m.name] = state_idx[:, i].copy()
    signed = PowerSeries(aggregate.start_time, aggregate.period, residual, signed=True)
    return DisaggResult(tuple(names), predictions, states, signed)
