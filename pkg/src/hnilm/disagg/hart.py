"""Edge-matching disaggregation in the style of Hart's event-based method."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import PowerSeries
from ..events import Event, detect_events
from ..io import csv_text, fmt_num

DEFAULT_MAX_ON_DURATION = 12 * 3600


@dataclass(frozen=True)
class Activation:
    on_event: Event
    off_event: Event
    power: float

    @property
    def duration(self) -> float:
        return self.off_event.timestamp - self.on_event.timestamp


@dataclass(frozen=True)
class HartResult:
    activations: list[Activation] = field(default_factory=list)
    unmatched: list[Event] = field(default_factory=list)

    def activations_csv(self) -> str:
        rows = [
            (fmt_num(a.on_event.timestamp), fmt_num(a.off_event.timestamp), fmt_num(a.power))
            for a in self.activations
        ]
        return csv_text(("on_timestamp", "off_timestamp", "power_watts"), rows)

    def unmatched_csv(self) -> str:
        rows = [(e.index, fmt_num(e.timestamp), fmt_num(e.delta)) for e in self.unmatched]
        return csv_text(("index", "timestamp", "delta_watts"), rows)


def magnitudes_agree(rise: float, fall: float, tolerance_fraction: float) -> bool:
    """True when ``|rise|`` and ``|fall|`` differ by at most the given fraction of the larger."""
    a, b = abs(rise), abs(fall)
    return abs(a - b) <= tolerance_fraction * max(a, b)


def hart_disaggregate(
    aggregate: PowerSeries,
    threshold: float = 100.0,
    match_tolerance_fraction: float = 0.1,
    max_on_duration: float = DEFAULT_MAX_ON_DURATION,
) -> HartResult:
    """
    Pair rising and falling edges into appliance activations.

    Each falling edge is matched to the earliest still-unmatched rising edge
    that is no older than ``max_on_duration`` and whose magnitude agrees
    within ``match_tolerance_fraction``. A matched pair's power is the mean
    of the two magnitudes. Everything left over is returned in
    ``unmatched``, ordered by sample index.
    """
    if not 0 < match_tolerance_fraction < 1:
        raise ValueError("match_tolerance_fraction must be in (0, 1)")
    pending: list[Event] = []
    unmatched: list[Event] = []
    activations: list[Activation] = []
    for ev in detect_events(aggregate, threshold):
        if ev.delta > 0:
            pending.append(ev)
            continue
        for i, rise in enumerate(pending):
            if ev.timestamp - rise.timestamp > max_on_duration:
                continue
            if magnitudes_agree(rise.delta, ev.delta, match_tolerance_fraction):
                del pending[i]
                activations.append(Activation(rise, ev, (abs(rise.delta) + abs(ev.delta)) / 2))
                break
        else:
            unmatched.append(ev)
    unmatched.extend(pending)
    unmatched.sort(key=lambda e: e.index)
    return HartResult(activations, unmatched)
