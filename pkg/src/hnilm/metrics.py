"""
Per-appliance F-score and normalised error in assigned power (NEP).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Mapping

import numpy as np

from .core import PowerSeries, align
from .disagg.models import DisaggResult
from .errors import MissingTruth, ZeroEnergy
from .io import csv_text, fmt_num

DEFAULT_ON_THRESHOLD = 10.0


@dataclass(frozen=True)
class OnOffCounts:
    tp: int
    fp: int
    fn: int
    tn: int


@dataclass(frozen=True)
class FScore:
    f: float
    precision: float
    recall: float
    counts: OnOffCounts


def _paired(truth: PowerSeries, predicted: PowerSeries) -> tuple[np.ndarray, np.ndarray]:
    t, p = align(truth, predicted)
    keep = ~(t.missing | p.missing)
    return t.values[keep], p.values[keep]


def f_score_from_states(truth_on, pred_on) -> FScore:
    """
    F-score from boolean ON arrays.

    Zero denominators give 0 for precision, recall and F.
    """
    truth_on = np.asarray(truth_on, dtype=bool)
    pred_on = np.asarray(pred_on, dtype=bool)
    tp = int(np.sum(truth_on & pred_on))
    fp = int(np.sum(~truth_on & pred_on))
    fn = int(np.sum(truth_on & ~pred_on))
    tn = int(np.sum(~truth_on & ~pred_on))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return FScore(f, precision, recall, OnOffCounts(tp, fp, fn, tn))


def f_score(
    truth: PowerSeries, predicted: PowerSeries, on_threshold: float = DEFAULT_ON_THRESHOLD
) -> FScore:
    """Per-timestamp ON/OFF F-score; a sample is ON when its power exceeds ``on_threshold``."""
    if not on_threshold > 0:
        raise ValueError("on_threshold must be > 0")
    t, p = _paired(truth, predicted)
    return f_score_from_states(t > on_threshold, p > on_threshold)


def nep(truth: PowerSeries, predicted: PowerSeries) -> float:
    """
    ``sum |predicted - truth| / sum truth`` over samples present in both.

    Raises
    ------
    ZeroEnergy
        If the truth sums to zero over the compared samples.
    """
    t, p = _paired(truth, predicted)
    total = t.sum()
    if total == 0:
        raise ZeroEnergy("truth has zero energy over the compared samples")
    return float(np.abs(p - t).sum() / total)


@dataclass(frozen=True)
class ApplianceScore:
    appliance: str
    f_score: float
    precision: float
    recall: float
    nep: float
    tp: int
    fp: int
    fn: int
    tn: int


@dataclass(frozen=True)
class MetricReport:
    scores: dict[str, ApplianceScore]

    def __getitem__(self, name: str) -> ApplianceScore:
        return self.scores[name]

    def to_csv(self) -> str:
        rows = [
            (s.appliance, fmt_num(s.f_score), fmt_num(s.nep), s.tp, s.fp, s.fn, s.tn)
            for s in self.scores.values()
        ]
        return csv_text(("appliance", "f_score", "nep", "tp", "fp", "fn", "tn"), rows)

    def to_json(self) -> str:
        return json.dumps({n: asdict(s) for n, s in self.scores.items()}, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MetricReport":
        doc = json.loads(text)
        return cls({n: ApplianceScore(**v) for n, v in doc.items()})


def evaluate(
    truth_set: Mapping[str, PowerSeries],
    result: DisaggResult,
    on_threshold: float = DEFAULT_ON_THRESHOLD,
    mode: str = "power",
) -> MetricReport:
    """
    Score every appliance in ``result`` against its ground truth.

    ``mode="power"`` thresholds both series at ``on_threshold``;
    ``mode="state"`` instead treats a predicted sample as ON when the chosen
    state index is non-zero.
    """
    if mode not in ("power", "state"):
        raise ValueError(f"unknown mode {mode!r}")
    scores = {}
    for name in result.appliances:
        if name not in truth_set:
            raise MissingTruth(name)
        truth, pred = truth_set[name], result.predictions[name]
        if mode == "power":
            fs = f_score(truth, pred, on_threshold)
        else:
            state_series = pred.with_values(
                np.where(result.states[name] < 0, np.nan, (result.states[name] > 0).astype(float))
            )
            t, s = _paired(truth, state_series)
            fs = f_score_from_states(t > on_threshold, s > 0)
        c = fs.counts
        scores[name] = ApplianceScore(
            name, fs.f, fs.precision, fs.recall, nep(truth, pred), c.tp, c.fp, c.fn, c.tn
        )
    return MetricReport(scores)
