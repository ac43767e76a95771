"""Seeded random streams.

All randomness flows through numpy's PCG64 generator. A run is fully
determined by one 64-bit master seed; trial ``i`` draws from the stream
``SeedSequence(entropy=master, spawn_key=(i,))``, so trials can be
evaluated in any order (or in parallel) and still reproduce.
"""

import numpy as np

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed))))


def trial_rng(master: int, index: int) -> np.random.Generator:
    """Independent generator for trial ``index`` of a run seeded with ``master``."""
    ss = np.random.SeedSequence(entropy=check_seed(master), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def trial_seed(master: int, index: int) -> int:
    """64-bit seed for trial ``index``; ``make_rng(trial_seed(m, i))`` is a valid stream."""
    ss = np.random.SeedSequence(entropy=check_seed(master), spawn_key=(int(index),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)
