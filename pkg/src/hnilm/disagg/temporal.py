"""Calendar-based partitioning used for training and routing."""

from __future__ import annotations

import numpy as np

from ..core import PowerSeries, is_weekend


def temporal_split(series: PowerSeries, utc_offset: float = 0) -> tuple[PowerSeries, PowerSeries]:
    """
    Split into weekday and weekend parts on the original grid.

    Samples of the other day type become missing, so the two parts
    partition the original samples. Saturday and Sunday (local) are weekend.
    """
    weekend = is_weekend(series.timestamps, utc_offset)
    weekday_part = series.with_values(np.where(weekend, np.nan, series.values))
    weekend_part = series.with_values(np.where(weekend, series.values, np.nan))
    return weekday_part, weekend_part


def split_halves(series: PowerSeries) -> tuple[PowerSeries, PowerSeries]:
    """First half for training, second half for testing."""
    mid = len(series) // 2
    cut = series.start_time + mid * series.period
    return series.window(series.start_time, cut), series.window(cut, series.end_time)
