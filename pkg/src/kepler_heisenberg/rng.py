"""Seeded, splittable random streams.

Every stream is ``numpy.random.Generator(PCG64(SeedSequence(seed, spawn_key)))``.  The
identifier below is written into every archive; changing how streams are derived
requires bumping it.
"""

from __future__ import annotations

import numpy as np

RNG_ALGORITHM = "numpy-PCG64-SeedSequence/v1"


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(spawn_key))))


# fixed substream tags so that the same seed feeds independent consumers
STREAM_INITIAL = 0
STREAM_OPTIMIZER = 1
STREAM_SCAN = 2
