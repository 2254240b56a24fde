"""Memory package - per-arm reservoir sampling behind a pluggable store."""
from .ireservoir_store import IReservoirStore
from .models import (
    Reservoir,
    ReservoirPhase,
    fill_window,
    reservoir_capacity,
    reservoir_insert,
    schedule_reservoir_round,
)
from .providers.in_memory import InMemoryReservoirStore

__all__ = [
    "IReservoirStore",
    "InMemoryReservoirStore",
    "Reservoir",
    "ReservoirPhase",
    "fill_window",
    "reservoir_capacity",
    "reservoir_insert",
    "schedule_reservoir_round",
]
