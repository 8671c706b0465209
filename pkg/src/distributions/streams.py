"""
Seeded random streams.

Every replication draws from its own Philox generator keyed by seed XOR index, so
results do not depend on which worker ran the replication.
"""

import numpy as np

MASK64 = (1 << 64) - 1
_GRID = 2.0 ** 53


def replication_generator(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for replication `index` of a run seeded with `seed`"""
    key = (int(seed) ^ int(index)) & MASK64
    return np.random.Generator(np.random.Philox(key=key))


def open_uniforms(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform draws on {1, ..., 2^53 - 1} / 2^53, never 0 or 1"""
    return rng.integers(1, 2 ** 53, size=size, dtype=np.int64) / _GRID
