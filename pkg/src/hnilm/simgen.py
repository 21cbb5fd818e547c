"""
Synthetic commercial-building corpora with exact ground truth.

Load kinds
----------
TwoState
    ``on_power`` plus Gaussian noise while scheduled, 0 W otherwise.
MultiState
    While scheduled, dwells in levels drawn from ``powers`` with
    exponentially distributed dwell times (mean ``mean_dwell`` seconds).
VFD
    While scheduled, a random walk with per-step drift ``drift_sigma``
    reflected into ``[min_power, max_power]``, restarting at ``start_power``
    each time the load switches on.
Elevator
    ``base_power`` at all times plus short rectangular trips whose arrival
    rate follows a 24-entry per-hour profile (weekday and weekend profiles).
    The elevator ignores its schedule.

Schedules are tuples of ``(start, end)`` seconds since local Monday 00:00.
Every load gets its own RNG stream derived from the building seed and the
load id, so generation order does not matter.
"""

from __future__ import annotations

import enum
import json
import math
import zlib
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (
    SECONDS_PER_DAY,
    SECONDS_PER_HOUR,
    SECONDS_PER_WEEK,
    Level,
    MeterHierarchy,
    MeterNode,
    PowerSeries,
    aggregate_children,
    is_weekend,
    second_of_week,
)
from .errors import InvalidSpec

Interval = tuple[float, float]
Schedule = tuple[Interval, ...]

WEEKDAYS = (0, 1, 2, 3, 4)
WEEKEND = (5, 6)
ALL_DAYS = tuple(range(7))
IST_OFFSET = 5 * 3600 + 1800
# 2024-01-01 00:00 UTC, a Monday
_REFERENCE_MONDAY = 1704067200

DEFAULT_ELEVATOR_PROFILE = (
    (0,) * 8 + (6,) + (12,) * 8 + (6,) + (3, 3) + (0,) * 4
)


class LoadKind(str, enum.Enum):
    TWO_STATE = "TwoState"
    MULTI_STATE = "MultiState"
    VFD = "VFD"
    ELEVATOR = "Elevator"


def weekly(days: Iterable[int], start_hour: float, end_hour: float) -> Schedule:
    """Daily ``[start_hour, end_hour)`` window on each of ``days`` (Mon = 0)."""
    if not 0 <= start_hour < end_hour <= 24:
        raise InvalidSpec(f"bad hour window {start_hour}-{end_hour}")
    return tuple(
        (d * SECONDS_PER_DAY + start_hour * SECONDS_PER_HOUR, d * SECONDS_PER_DAY + end_hour * SECONDS_PER_HOUR)
        for d in sorted(set(days))
    )


def merge_schedules(*schedules: Schedule) -> Schedule:
    return tuple(sorted(iv for s in schedules for iv in s))


def _check_schedule(schedule: Schedule, owner: str) -> Schedule:
    out = tuple(sorted((float(a), float(b)) for a, b in schedule))
    for a, b in out:
        if not 0 <= a < b <= SECONDS_PER_WEEK:
            raise InvalidSpec(f"{owner}: interval ({a}, {b}) outside the week")
    for (_, e1), (s2, _) in zip(out, out[1:]):
        if s2 < e1:
            raise InvalidSpec(f"{owner}: schedule intervals overlap")
    return out


@dataclass(frozen=True)
class LoadSpec:
    id: str
    kind: LoadKind
    schedule: Schedule = ()
    noise_sigma: float = 0.0
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", LoadKind(self.kind))
        except ValueError:
            raise InvalidSpec(f"{self.id}: unknown load kind {self.kind!r}") from None
        object.__setattr__(self, "schedule", _check_schedule(self.schedule, self.id))
        object.__setattr__(self, "params", dict(self.params))
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise InvalidSpec(f"{self.id}: noise_sigma must be >= 0")

    def param(self, key, default=None):
        value = self.params.get(key, default)
        if value is None:
            raise InvalidSpec(f"{self.id}: missing parameter {key!r}")
        return value


@dataclass(frozen=True)
class Clock:
    start_time: float
    period: float
    n: int
    utc_offset: float = 0

    @property
    def timestamps(self) -> np.ndarray:
        return self.start_time + np.arange(self.n) * self.period

    def scheduled(self, schedule: Schedule) -> np.ndarray:
        sow = second_of_week(self.timestamps, self.utc_offset)
        on = np.zeros(self.n, dtype=bool)
        for a, b in schedule:
            on |= (sow >= a) & (sow < b)
        return on

    def series(self, values) -> PowerSeries:
        return PowerSeries(self.start_time, self.period, values)


def load_rng(seed: int, load_id: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(load_id.encode("utf-8"))])


def schedule_edges(schedule: Schedule, clock: Clock) -> np.ndarray:
    """Timestamps of samples where the scheduled state differs from the previous sample."""
    on = clock.scheduled(schedule)
    idx = np.flatnonzero(on[1:] != on[:-1]) + 1
    return clock.timestamps[idx]


def _segments(on: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start and end (exclusive) indices of runs of True."""
    padded = np.concatenate(([False], on, [False])).astype(np.int8)
    d = np.diff(padded)
    return np.flatnonzero(d == 1), np.flatnonzero(d == -1)


def _require_kind(spec: LoadSpec, kind: LoadKind) -> None:
    if spec.kind is not kind:
        raise InvalidSpec(f"{spec.id}: expected a {kind.value} load, got {spec.kind.value}")


def gen_two_state(spec: LoadSpec, clock: Clock, seed: int = 0) -> PowerSeries:
    _require_kind(spec, LoadKind.TWO_STATE)
    on_power = float(spec.param("on_power"))
    if not on_power > 0:
        raise InvalidSpec(f"{spec.id}: on_power must be > 0")
    rng = load_rng(seed, spec.id)
    on = clock.scheduled(spec.schedule)
    noise = rng.normal(0.0, spec.noise_sigma, clock.n) if spec.noise_sigma > 0 else 0.0
    return clock.series(np.where(on, np.maximum(on_power + noise, 0.0), 0.0))


def gen_multi_state(spec: LoadSpec, clock: Clock, seed: int = 0) -> PowerSeries:
    _require_kind(spec, LoadKind.MULTI_STATE)
    powers = np.asarray(spec.param("powers"), dtype=float)
    mean_dwell = float(spec.params.get("mean_dwell", 900.0))
    if powers.size < 1 or np.any(powers < 0) or not np.all(np.isfinite(powers)) or mean_dwell <= 0:
        raise InvalidSpec(f"{spec.id}: invalid multi-state parameters")
    rng = load_rng(seed, spec.id)
    on = clock.scheduled(spec.schedule)
    change = rng.random(clock.n) < min(1.0, clock.period / mean_dwell)
    starts, _ = _segments(on)
    change[starts] = True
    change[0] = True
    picks = rng.integers(powers.size, size=clock.n)
    # carry the last drawn level forward until the next change point
    last_change = np.maximum.accumulate(np.where(change, np.arange(clock.n), 0))
    level = powers[picks[last_change]]
    noise = rng.normal(0.0, spec.noise_sigma, clock.n) if spec.noise_sigma > 0 else 0.0
    vals = np.where(on & (level > 0), np.maximum(level + noise, 0.0), 0.0)
    return clock.series(vals)


def reflect_into(x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Fold values into ``[lo, hi]`` by mirror reflection at the bounds."""
    width = hi - lo
    y = np.mod(x - lo, 2 * width)
    return lo + np.where(y > width, 2 * width - y, y)


def gen_vfd(spec: LoadSpec, clock: Clock, seed: int = 0) -> PowerSeries:
    _require_kind(spec, LoadKind.VFD)
    lo = float(spec.param("min_power"))
    hi = float(spec.param("max_power"))
    if not 0 < lo < hi:
        raise InvalidSpec(f"{spec.id}: need 0 < min_power < max_power")
    sigma = float(spec.params.get("drift_sigma", 0.0))
    start = float(spec.params.get("start_power", (lo + hi) / 2))
    if sigma < 0 or not lo <= start <= hi:
        raise InvalidSpec(f"{spec.id}: invalid drift_sigma or start_power")
    rng = load_rng(seed, spec.id)
    on = clock.scheduled(spec.schedule)
    step_sd = math.hypot(sigma, spec.noise_sigma)
    steps = rng.normal(0.0, step_sd, clock.n) if step_sd > 0 else np.zeros(clock.n)
    starts, _ = _segments(on)
    steps[starts] = 0.0
    walk = np.cumsum(steps)
    seg_id = np.cumsum(np.isin(np.arange(clock.n), starts)) - 1
    base = walk[starts][np.maximum(seg_id, 0)] if starts.size else np.zeros(clock.n)
    free = start + (walk - base)
    vals = np.where(on, reflect_into(free, lo, hi), 0.0)
    return clock.series(vals)


def gen_elevator(spec: LoadSpec, clock: Clock, seed: int = 0) -> PowerSeries:
    _require_kind(spec, LoadKind.ELEVATOR)
    base = float(spec.params.get("base_power", 400.0))
    p_lo, p_hi = (float(v) for v in spec.params.get("trip_power_range", (2000.0, 6000.0)))
    d_lo, d_hi = (float(v) for v in spec.params.get("trip_duration_range", (20.0, 60.0)))
    weekday_profile = np.asarray(spec.params.get("trips_per_hour_profile", DEFAULT_ELEVATOR_PROFILE), float)
    weekend_profile = np.asarray(spec.params.get("weekend_trips_per_hour_profile", (0,) * 24), float)
    if (
        base < 0
        or not 0 <= p_lo <= p_hi
        or not 0 < d_lo <= d_hi
        or weekday_profile.shape != (24,)
        or weekend_profile.shape != (24,)
        or np.any(weekday_profile < 0)
        or np.any(weekend_profile < 0)
    ):
        raise InvalidSpec(f"{spec.id}: invalid elevator parameters")
    rng = load_rng(seed, spec.id)
    period = clock.period
    energy = np.zeros(clock.n)  # watt-seconds per sample
    t0 = clock.start_time
    t_end = t0 + clock.n * period
    first_hour = math.floor((t0 + clock.utc_offset) / SECONDS_PER_HOUR)
    last_hour = math.ceil((t_end + clock.utc_offset) / SECONDS_PER_HOUR)
    for hour in range(first_hour, last_hour):
        h_start = hour * SECONDS_PER_HOUR - clock.utc_offset
        profile = weekend_profile if is_weekend(h_start, clock.utc_offset) else weekday_profile
        n_trips = rng.poisson(profile[hour % 24])
        for _ in range(n_trips):
            s = h_start + rng.uniform(0, SECONDS_PER_HOUR)
            e = s + rng.uniform(d_lo, d_hi)
            p = rng.uniform(p_lo, p_hi)
            i0 = max(0, math.floor((s - t0) / period))
            i1 = min(clock.n, math.ceil((e - t0) / period))
            for i in range(i0, i1):
                a = t0 + i * period
                overlap = min(e, a + period) - max(s, a)
                if overlap > 0:
                    energy[i] += p * overlap
    vals = base + energy / period
    if spec.noise_sigma > 0:
        vals = np.maximum(vals + rng.normal(0.0, spec.noise_sigma, clock.n), 0.0)
    return clock.series(vals)


GENERATORS = {
    LoadKind.TWO_STATE: gen_two_state,
    LoadKind.MULTI_STATE: gen_multi_state,
    LoadKind.VFD: gen_vfd,
    LoadKind.ELEVATOR: gen_elevator,
}


def generate_load(spec: LoadSpec, clock: Clock, seed: int = 0) -> PowerSeries:
    return GENERATORS[spec.kind](spec, clock, seed)


@dataclass(frozen=True)
class BuildingSpec:
    """
    A building's floors, their loads and the shared HVAC schedule.

    Loads listed in ``hvac_sync_group`` follow ``master_schedule`` instead
    of their own. ``start_time`` defaults to local midnight on Monday
    2024-01-01.
    """

    floors: tuple[tuple[LoadSpec, ...], ...]
    hvac_sync_group: frozenset[str] = frozenset()
    master_schedule: Schedule = weekly(WEEKDAYS, 9, 17)
    seed: int = 0
    period: float = 30
    span_days: int = 28
    utc_offset: float = IST_OFFSET
    start_time: float | None = None
    building_id: str = "building"
    floor_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        floors = tuple(tuple(f) for f in self.floors)
        object.__setattr__(self, "floors", floors)
        object.__setattr__(self, "hvac_sync_group", frozenset(self.hvac_sync_group))
        object.__setattr__(self, "master_schedule", _check_schedule(self.master_schedule, "master_schedule"))
        if not floors or not all(floors):
            raise InvalidSpec("every building needs at least one floor with a load")
        if self.floor_ids is None:
            object.__setattr__(self, "floor_ids", tuple(f"floor_{i}" for i in range(len(floors))))
        else:
            object.__setattr__(self, "floor_ids", tuple(self.floor_ids))
        if len(self.floor_ids) != len(floors):
            raise InvalidSpec("floor_ids must match the number of floors")
        ids = [self.building_id, *self.floor_ids, *(l.id for f in floors for l in f)]
        if len(set(ids)) != len(ids):
            raise InvalidSpec("node ids must be unique")
        unknown = self.hvac_sync_group - {l.id for f in floors for l in f}
        if unknown:
            raise InvalidSpec(f"sync group ids not in the building: {sorted(unknown)}")
        if not (self.period > 0 and self.span_days >= 1):
            raise InvalidSpec("period must be > 0 and span at least one day")
        n = self.span_days * SECONDS_PER_DAY / self.period
        if abs(n - round(n)) > 1e-9:
            raise InvalidSpec("span must be a whole number of periods")

    @property
    def loads(self) -> list[LoadSpec]:
        return [l for f in self.floors for l in f]

    @property
    def clock(self) -> Clock:
        start = self.start_time
        if start is None:
            start = _REFERENCE_MONDAY - self.utc_offset
        n = int(round(self.span_days * SECONDS_PER_DAY / self.period))
        return Clock(start, self.period, n, self.utc_offset)

    def effective(self, load: LoadSpec) -> LoadSpec:
        if load.id in self.hvac_sync_group:
            return replace(load, schedule=self.master_schedule)
        return load


def simulate_building(spec: BuildingSpec) -> MeterHierarchy:
    """
    Generate every load, then floors as exact sums of their loads and the
    building as the exact sum of its floors.
    """
    clock = spec.clock
    nodes: dict[str, MeterNode] = {}
    for fid, loads in zip(spec.floor_ids, spec.floors):
        for load in loads:
            nodes[load.id] = MeterNode(load.id, Level.LOAD, generate_load(spec.effective(load), clock, spec.seed))
        nodes[fid] = MeterNode(fid, Level.FLOOR, None, tuple(l.id for l in loads))
    nodes[spec.building_id] = MeterNode(spec.building_id, Level.BUILDING, None, spec.floor_ids)
    h = MeterHierarchy(nodes, spec.building_id)
    for fid in spec.floor_ids:
        h = h.with_series(fid, aggregate_children(h, fid))
    return h.with_series(spec.building_id, aggregate_children(h, spec.building_id))


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------
def _two(id_, power, schedule, noise):
    return LoadSpec(id_, LoadKind.TWO_STATE, schedule, noise, {"on_power": power})


def _vfd(id_, lo, hi, drift, noise, schedule=()):
    return LoadSpec(id_, LoadKind.VFD, schedule, noise, {"min_power": lo, "max_power": hi, "drift_sigma": drift})


def campus_preset(
    seed: int = 0,
    *,
    two_state_only: bool = False,
    noiseless: bool = False,
    span_days: int = 28,
) -> BuildingSpec:
    """
    Three-floor academic block: a VFD AHU per floor on a shared weekday
    9-17 schedule, an elevator, lighting, lab and plug loads, and an
    always-on server room.

    ``two_state_only`` swaps the AHUs for fixed-power units, replaces the
    pantry by a two-state load and drops the elevator. Load ``i`` then gets
    an extra ``2**i / 1024`` W, so the fractional part of any total names
    the subset of loads that are on and all subset sums are distinct (and
    exact in binary floating point).
    """
    noise = 0.0 if noiseless else 1.0
    office = weekly(WEEKDAYS, 8, 20)
    if two_state_only:
        ahus = [_two("ahu_0", 6170, (), 0), _two("ahu_1", 5310, (), 0), _two("ahu_2", 4720, (), 0)]
        pantry = _two("pantry_1", 1490, weekly(WEEKDAYS, 8, 18), 8 * noise)
        elevator = []
    else:
        ahus = [
            _vfd("ahu_0", 4500, 8000, 150, 0),
            _vfd("ahu_1", 4000, 7000, 150, 0),
            _vfd("ahu_2", 3500, 6500, 150, 0),
        ]
        pantry = LoadSpec(
            "pantry_1", LoadKind.MULTI_STATE, weekly(WEEKDAYS, 8, 18), 8 * noise,
            {"powers": [0, 700, 1500], "mean_dwell": 900},
        )
        elevator = [LoadSpec("elevator", LoadKind.ELEVATOR, (), 0.0, {})]
    floors = (
        (
            ahus[0],
            *elevator,
            _two("lights_0", 1230, office, 10 * noise),
            _two("server_0", 2530, weekly(ALL_DAYS, 0, 24), 15 * noise),
        ),
        (
            ahus[1],
            _two("lab_1", 1870, weekly(WEEKDAYS, 10, 16), 12 * noise),
            pantry,
            _two("lights_1", 910, office, 8 * noise),
        ),
        (
            ahus[2],
            _two("lights_2", 820, office, 8 * noise),
            _two("printers_2", 430, weekly(WEEKDAYS, 9, 18), 5 * noise),
        ),
    )
    if two_state_only:
        floors, i = list(floors), 0
        for f, loads in enumerate(floors):
            tagged = []
            for load in loads:
                tagged.append(replace(load, params={"on_power": load.params["on_power"] + 2.0**i / 1024}))
                i += 1
            floors[f] = tuple(tagged)
        floors = tuple(floors)
    return BuildingSpec(
        floors,
        hvac_sync_group=frozenset({"ahu_0", "ahu_1", "ahu_2"}),
        master_schedule=weekly(WEEKDAYS, 9, 17),
        seed=seed,
        period=30,
        span_days=span_days,
        utc_offset=IST_OFFSET,
        building_id="academic_block",
        floor_ids=("ground_floor", "first_floor", "second_floor"),
    )


def residential_preset(seed: int = 0, *, span_days: int = 28) -> BuildingSpec:
    """A single-meter home whose loads follow the same routine every day."""
    every = ALL_DAYS
    loads = (
        _two("always_on", 90, weekly(every, 0, 24), 3),
        LoadSpec("fridge", LoadKind.MULTI_STATE, weekly(every, 0, 24), 2,
                 {"powers": [0, 140], "mean_dwell": 1200}),
        _two("kettle", 1900, weekly(every, 7, 7.25), 10),
        _two("cooking", 1400, weekly(every, 19, 20), 10),
        _two("lights", 260, weekly(every, 18, 23), 4),
        _two("tv", 180, weekly(every, 20, 23), 3),
    )
    return BuildingSpec(
        (loads,),
        seed=seed,
        period=60,
        span_days=span_days,
        utc_offset=-8 * 3600,
        building_id="home",
        floor_ids=("mains",),
    )


def ahu_scenario_preset(seed: int = 0, *, span_days: int = 28) -> BuildingSpec:
    """
    Four floors, each with a VFD AHU on the shared HVAC schedule, plus
    unmetered-at-appliance-level confounders whose power overlaps the AHU
    range. Floor 5 carries only small plug loads besides its AHU.
    """
    floors = (
        (_vfd("ahu_0", 3000, 8000, 250, 0), _two("kitchen_0", 5600, merge_schedules(
            weekly(WEEKDAYS, 12, 14), weekly(ALL_DAYS, 18, 22)), 20)),
        (
            _vfd("ahu_1", 2500, 7500, 250, 0),
            _two("pump_1", 6400, weekly(ALL_DAYS, 6, 22), 30),
            _two("dryer_1", 4900, weekly(WEEKEND, 9, 18), 20),
        ),
        (
            _vfd("ahu_2", 2000, 7000, 250, 0),
            _two("lab_2", 4300, weekly(WEEKDAYS, 7, 19), 20),
            _vfd("exhaust_2", 3000, 15000, 400, 0, merge_schedules(weekly(ALL_DAYS, 0, 7), weekly(ALL_DAYS, 17, 24))),
        ),
        (
            _vfd("ahu_5", 800, 10000, 500, 0),
            _two("plug_5", 310, weekly(WEEKDAYS, 8, 20), 5),
            _two("lights_5", 540, weekly(WEEKDAYS, 8, 19), 5),
        ),
    )
    return BuildingSpec(
        floors,
        hvac_sync_group=frozenset({"ahu_0", "ahu_1", "ahu_2", "ahu_5"}),
        master_schedule=weekly(WEEKDAYS, 9, 17),
        seed=seed,
        period=60,
        span_days=span_days,
        utc_offset=IST_OFFSET,
        building_id="academic_block",
        floor_ids=("floor_0", "floor_1", "floor_2", "floor_5"),
    )


PRESETS = {
    "campus": campus_preset,
    "residential": residential_preset,
    "ahu_scenario": ahu_scenario_preset,
}


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------
_DAY_SETS = {"weekdays": WEEKDAYS, "weekend": WEEKEND, "weekends": WEEKEND, "all": ALL_DAYS}


def _schedule_from_json(doc) -> Schedule:
    out: list[Interval] = []
    for item in doc or ():
        if isinstance(item, Mapping):
            days = item.get("days", "all")
            days = _DAY_SETS[days] if isinstance(days, str) else tuple(days)
            out.extend(weekly(days, float(item["start_hour"]), float(item["end_hour"])))
        else:
            a, b = item
            out.append((float(a), float(b)))
    return tuple(out)


def _plain(x):
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Mapping):
        return {k: _plain(v) for k, v in x.items()}
    return x


def load_spec_to_dict(load: LoadSpec) -> dict:
    return {
        "id": load.id,
        "kind": load.kind.value,
        "schedule": _plain(load.schedule),
        "noise_sigma": _plain(float(load.noise_sigma)),
        "params": _plain(dict(load.params)),
    }


def building_spec_to_dict(spec: BuildingSpec) -> dict:
    return {
        "building_id": spec.building_id,
        "seed": spec.seed,
        "period": _plain(spec.period),
        "span_days": spec.span_days,
        "utc_offset": _plain(spec.utc_offset),
        "start_time": spec.clock.start_time,
        "hvac_sync_group": sorted(spec.hvac_sync_group),
        "master_schedule": _plain(spec.master_schedule),
        "floors": [
            {"id": fid, "loads": [load_spec_to_dict(l) for l in loads]}
            for fid, loads in zip(spec.floor_ids, spec.floors)
        ],
    }


def building_spec_from_dict(doc: Mapping) -> BuildingSpec:
    """
    Parse a spec document. ``{"preset": name, ...}`` expands a packaged
    preset, passing remaining keys as keyword arguments.
    """
    if not isinstance(doc, Mapping):
        raise InvalidSpec("spec document must be a JSON object")
    try:
        if "preset" in doc:
            kwargs = {k: v for k, v in doc.items() if k != "preset"}
            factory = PRESETS[doc["preset"]]
            return factory(**kwargs)
        floors, floor_ids = [], []
        for f in doc["floors"]:
            floor_ids.append(str(f["id"]))
            floors.append(
                tuple(
                    LoadSpec(
                        str(l["id"]),
                        l["kind"],
                        _schedule_from_json(l.get("schedule")),
                        float(l.get("noise_sigma", 0.0)),
                        l.get("params", {}),
                    )
                    for l in f["loads"]
                )
            )
        kwargs = {}
        if "master_schedule" in doc:
            kwargs["master_schedule"] = _schedule_from_json(doc["master_schedule"])
        for key, cast in (("seed", int), ("period", float), ("span_days", int),
                          ("utc_offset", float), ("start_time", float), ("building_id", str)):
            if doc.get(key) is not None:
                kwargs[key] = cast(doc[key])
        return BuildingSpec(
            tuple(floors),
            hvac_sync_group=frozenset(doc.get("hvac_sync_group", ())),
            floor_ids=tuple(floor_ids),
            **kwargs,
        )
    except InvalidSpec:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed building spec: {exc!r}") from exc


def load_building_spec(path) -> BuildingSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise InvalidSpec(f"cannot read spec {path}: {exc}") from exc
    return building_spec_from_dict(doc)


def sync_group_edges(spec: BuildingSpec) -> np.ndarray:
    """Sample timestamps at which the master HVAC schedule switches."""
    return schedule_edges(spec.master_schedule, spec.clock)


def sum_load_energy(h: MeterHierarchy, load_ids: Sequence[str]) -> float:
    return float(sum(h.series(l).energy_wh() for l in load_ids))
