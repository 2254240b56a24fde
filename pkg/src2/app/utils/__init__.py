"""
Utils package - seeded random streams.

Exports:
- StreamPurpose: which consumer a stream feeds (environment, learner, sampling, oracle)
- make_stream: independent Philox generator per (seed, T, replication, purpose)
- trial_seeds: child seed sequences for fanning out independent trials
- rng_state / rng_from_state: JSON snapshots of a generator for checkpoints
"""
from .rng import StreamPurpose, make_stream, rng_from_state, rng_state, trial_seeds

__all__ = ["StreamPurpose", "make_stream", "rng_from_state", "rng_state", "trial_seeds"]
