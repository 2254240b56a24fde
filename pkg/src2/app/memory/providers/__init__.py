"""Reservoir store providers."""
from .in_memory import InMemoryReservoirStore

__all__ = ["InMemoryReservoirStore"]
