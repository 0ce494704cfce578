"""Seeded, splittable random streams.

Every stochastic step draws from ``substream(seed, *keys)``: a PCG64 generator
whose SeedSequence entropy is the run seed plus a tuple of stage keys. Two calls
with the same arguments replay bit-exactly; different keys give independent
streams.
"""

from __future__ import annotations

import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _key(k: object) -> int:
    if isinstance(k, (int, np.integer)):
        return int(k) & _MASK64
    return zlib.crc32(str(k).encode("utf-8"))


def substream(seed: int, *keys: object) -> np.random.Generator:
    entropy = [int(seed) & _MASK64, *(_key(k) for k in keys)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def as_generator(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return substream(0 if rng is None else rng)
