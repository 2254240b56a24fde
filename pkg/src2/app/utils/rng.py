"""
Seeded random streams for reproducible simulation.

Every replication draws from independent streams keyed by
(master seed, horizon, replication, purpose). Keys are fed to numpy's
SeedSequence as a spawn key, which is a splittable scheme: streams for
different keys never overlap, and adding a purpose never shifts existing
streams.

Streams use the counter-based Philox generator. Its state is a small set of
integers (counter, key, buffer position), which is what the checkpoint
documents store.
"""
from enum import IntEnum
from typing import Any

import numpy as np


class StreamPurpose(IntEnum):
    ENVIRONMENT = 0
    LEARNER = 1
    SAMPLING = 2
    ORACLE = 3


def make_stream(master_seed: int, horizon: int, replication: int, purpose: StreamPurpose) -> np.random.Generator:
    """Independent generator for one (horizon, replication, purpose) triple."""
    sequence = np.random.SeedSequence(
        entropy=int(master_seed),
        spawn_key=(int(horizon), int(replication), int(purpose)),
    )
    return np.random.Generator(np.random.Philox(sequence))


def trial_seeds(master_seed: int, count: int) -> list[np.random.SeedSequence]:
    """Per-trial child sequences for fanning independent trials out."""
    return np.random.SeedSequence(int(master_seed)).spawn(count)


def rng_state(rng: np.random.Generator) -> dict[str, Any]:
    """JSON-compatible snapshot of a generator's bit-generator state."""
    return _to_jsonable(rng.bit_generator.state)


def rng_from_state(state: dict[str, Any]) -> np.random.Generator:
    """Rebuild a generator at exactly the snapshot position."""
    name = state["bit_generator"]
    bit_generator = getattr(np.random, name)()
    restored = dict(state)
    if name == "Philox":
        restored["state"] = {
            "counter": np.array(state["state"]["counter"], dtype=np.uint64),
            "key": np.array(state["state"]["key"], dtype=np.uint64),
        }
        restored["buffer"] = np.array(state["buffer"], dtype=np.uint64)
    bit_generator.state = restored
    return np.random.Generator(bit_generator)


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _to_jsonable(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return [int(item) for item in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    return value
