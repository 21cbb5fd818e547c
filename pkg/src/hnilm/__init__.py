"""Load disaggregation and diagnostics for hierarchically metered buildings."""

from .core import (
    Level,
    MeterHierarchy,
    MeterNode,
    PowerSeries,
    aggregate_children,
    align,
    align_many,
    regularize,
    resample,
    validate_hierarchy,
)

__version__ = "0.1.0"

__all__ = [
    "Level",
    "MeterHierarchy",
    "MeterNode",
    "PowerSeries",
    "aggregate_children",
    "align",
    "align_many",
    "regularize",
    "resample",
    "validate_hierarchy",
]
