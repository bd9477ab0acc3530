"""Reproducible random streams.

Every replicate and trajectory owns an independent stream derived from the
master seed and its position in the task grid, so serial and pooled runs
draw identical numbers.
"""

import numpy as np

_SEED_MASK = (1 << 63) - 1


def _spawn_key(stream: tuple[int, ...]) -> tuple[int, ...]:
    for part in stream:
        if part < 0:
            raise ValueError(f"Stream identifiers must be non-negative, got {stream}")
    return tuple(int(p) for p in stream)


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Create the generator for one stream of a master seed.

    Args:
        seed: Master seed (non-negative, up to 64 bits)
        *stream: Stream identifiers, e.g. (grid_index, replicate)

    Returns:
        A PCG64-backed Generator
    """
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=_spawn_key(stream))
    return np.random.Generator(np.random.PCG64(seq))


def derive_seed(seed: int, *stream: int) -> int:
    """Derive a child 63-bit integer seed, used to build per-replicate DataConfigs."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=_spawn_key(stream))
    return int(seq.generate_state(1, dtype=np.uint64)[0]) & _SEED_MASK
