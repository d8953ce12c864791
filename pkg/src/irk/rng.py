"""Explicitly seeded, splittable randomness (Philox via SeedSequence)."""

from __future__ import annotations

import numpy as np


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream named by ``path`` under ``seed``.

    Streams with different paths are statistically independent, so a
    criterion or worker can own one without coordinating with others.
    """
    ss = np.random.SeedSequence(seed & (2**64 - 1), spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(ss))


def spawn(seed: int, count: int, *path: int) -> list[np.random.Generator]:
    return [make_rng(seed, *path, i) for i in range(count)]
