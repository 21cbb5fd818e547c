from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..core import PowerSeries
from ..io import atomic_write_text, csv_text, fmt_num


@dataclass(frozen=True)
class ApplianceModel:
    """
    A named load with ordered power states in watts; state 0 is OFF (0 W).
    """

    name: str
    states: tuple[float, ...]

    def __post_init__(self):
        states = tuple(float(s) for s in self.states)
        if len(states) < 2:
            raise ValueError(f"{self.name}: need at least two states")
        if states[0] != 0.0:
            raise ValueError(f"{self.name}: state 0 must be 0 W")
        if not all(math.isfinite(s) for s in states):
            raise ValueError(f"{self.name}: states must be finite")
        if any(b <= a for a, b in zip(states, states[1:])):
            raise ValueError(f"{self.name}: states must be strictly increasing")
        object.__setattr__(self, "states", states)

    def to_json(self) -> str:
        return json.dumps({"name": self.name, "states": list(self.states)}) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ApplianceModel":
        doc = json.loads(text)
        return cls(str(doc["name"]), tuple(doc["states"]))

    def save(self, path) -> None:
        atomic_write_text(path, self.to_json())

    @classmethod
    def load(cls, path) -> "ApplianceModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class DisaggResult:
    """
    Per-appliance predictions, chosen state indices and the residual.

    ``states[name][t]`` is -1 where the aggregate sample was missing.
    """

    appliances: tuple[str, ...]
    predictions: dict[str, PowerSeries]
    states: dict[str, np.ndarray]
    residual: PowerSeries

    def appliance_csv(self, name: str) -> str:
        pred = self.predictions[name]
        rows = [
            (fmt_num(t), fmt_num(v), int(s))
            for t, v, s in zip(pred.timestamps, pred.values, self.states[name])
        ]
        return csv_text(("timestamp", "predicted_watts", "state_index"), rows)

    def residual_csv(self) -> str:
        r = self.residual
        rows = [(fmt_num(t), fmt_num(v)) for t, v in zip(r.timestamps, r.values)]
        return csv_text(("timestamp", "residual_watts"), rows)

    def write_csv(self, out_dir) -> list[Path]:
        """One CSV per appliance plus ``residual.csv``."""
        out_dir = Path(out_dir)
        written = []
        for name in self.appliances:
            p = out_dir / f"{name}.csv"
            atomic_write_text(p, self.appliance_csv(name))
            written.append(p)
        p = out_dir / "residual.csv"
        atomic_write_text(p, self.residual_csv())
        written.append(p)
        return written


def read_disagg_result(result_dir, appliances=None) -> DisaggResult:
    """
    Load a result written by :meth:`DisaggResult.write_csv`.

    Without ``appliances``, every ``*.csv`` in the directory except the
    residual and metric files is taken as an appliance.
    """
    result_dir = Path(result_dir)
    if appliances is None:
        skip = {"residual", "metrics"}
        appliances = sorted(p.stem for p in result_dir.glob("*.csv") if p.stem not in skip)
    preds, states = {}, {}
    for name in appliances:
        with open(result_dir / f"{name}.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        ts = np.array([float(r["timestamp"]) for r in rows])
        vals = np.array([float(r["predicted_watts"]) if r["predicted_watts"] else np.nan for r in rows])
        period = float(ts[1] - ts[0]) if ts.size > 1 else 1.0
        if period.is_integer():
            period = int(period)
        start = int(ts[0]) if float(ts[0]).is_integer() else float(ts[0])
        preds[name] = PowerSeries(start, period, vals)
        states[name] = np.array([int(r["state_index"]) for r in rows], dtype=np.int64)
    with open(result_dir / "residual.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    res = np.array([float(r["residual_watts"]) if r["residual_watts"] else np.nan for r in rows])
    first = preds[appliances[0]]
    residual = PowerSeries(first.start_time, first.period, res, signed=True)
    return DisaggResult(tuple(appliances), preds, states, residual)
