"""State training and the CO and edge-matching disaggregators."""

from .co import DEFAULT_MAX_COMBINATIONS, co_disaggregate, state_combinations
from .hart import Activation, HartResult, hart_disaggregate
from .models import ApplianceModel, DisaggResult, read_disagg_result
from .temporal import split_halves, temporal_split
from .training import kmeans_1d, train_states

__all__ = [
    "DEFAULT_MAX_COMBINATIONS",
    "Activation",
    "ApplianceModel",
    "DisaggResult",
    "HartResult",
    "co_disaggregate",
    "hart_disaggregate",
    "kmeans_1d",
    "read_disagg_result",
    "split_halves",
    "state_combinations",
    "temporal_split",
    "train_states",
]
