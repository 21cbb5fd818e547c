"""
COMBED-style CSV series and hierarchy JSON.

Series CSV: header ``timestamp,power``; one row per present sample, integer
epoch seconds, decimal watts. Hierarchy JSON:
``{"nodes": [{"id", "level", "parent", "csv_path"}]}`` with ``csv_path``
relative to the JSON file (or null for unmetered nodes).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import Level, MeterHierarchy, PowerSeries, regularize
from .errors import EmptyInput, InvalidHierarchy


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fmt_num(x) -> str:
    """Shortest round-tripping text for a number; empty for NaN."""
    x = float(x)
    if np.isnan(x):
        return ""
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def series_to_csv(series: PowerSeries) -> str:
    ts = series.timestamps
    rows = [
        (fmt_num(t), fmt_num(v)) for t, v in zip(ts, series.values) if not np.isnan(v)
    ]
    return csv_text(("timestamp", "power"), rows)


def write_series_csv(series: PowerSeries, path) -> None:
    atomic_write_text(path, series_to_csv(series))


def read_series_csv(path, period: float | None = None) -> PowerSeries:
    """
    Load a ``timestamp,power`` CSV and regularize it onto a uniform grid.

    If ``period`` is not given it is inferred as the smallest positive gap
    between consecutive timestamps.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        samples = [
            (float(row["timestamp"]), float(row["power"]))
            for row in reader
            if row.get("power") not in (None, "")
        ]
    if not samples:
        raise EmptyInput(f"{path}: no samples")
    if period is None:
        ts = np.unique([s[0] for s in samples])
        gaps = np.diff(ts)
        if gaps.size == 0:
            raise EmptyInput(f"{path}: cannot infer period from a single sample")
        period = float(gaps.min())
        if period.is_integer():
            period = int(period)
    return regularize(samples, period)


def hierarchy_to_dict(h: MeterHierarchy, csv_paths: dict[str, str | None]) -> dict:
    nodes = []
    for nid in h.walk():
        nodes.append(
            {
                "id": nid,
                "level": h[nid].level.label,
                "parent": h.parent(nid),
                "csv_path": csv_paths.get(nid),
            }
        )
    return {"nodes": nodes}


def save_hierarchy(h: MeterHierarchy, out_dir, json_name: str = "hierarchy.json") -> Path:
    """Write one CSV per metered node plus the hierarchy JSON; return the JSON path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, str | None] = {}
    for nid in h.walk():
        s = h[nid].series
        if s is None:
            paths[nid] = None
            continue
        rel = f"{nid}.csv"
        write_series_csv(s, out_dir / rel)
        paths[nid] = rel
    json_path = out_dir / json_name
    atomic_write_text(json_path, json.dumps(hierarchy_to_dict(h, paths), indent=2) + "\n")
    return json_path


def load_hierarchy(json_path, period: float | None = None) -> MeterHierarchy:
    json_path = Path(json_path)
    try:
        doc = json.loads(json_path.read_text(encoding="utf-8"))
        entries = doc["nodes"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InvalidHierarchy(f"{json_path}: {exc}") from exc
    records = []
    for e in entries:
        try:
            nid, level = str(e["id"]), Level.parse(e["level"])
        except KeyError as exc:
            raise InvalidHierarchy(f"{json_path}: node entry missing {exc}") from exc
        rel = e.get("csv_path")
        series = read_series_csv(json_path.parent / rel, period) if rel else None
        records.append((nid, level, e.get("parent"), series))
    return MeterHierarchy.from_parent_links(records)
