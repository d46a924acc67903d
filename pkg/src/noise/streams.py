"""Splittable random streams for reproducible parallel sampling."""

import numpy as np


def substream(seed: int, index: int) -> np.random.Generator:
    """
    Independent generator for worker or block `index` under master `seed`.

    The stream depends only on (seed, index), never on scheduling.
    """
    if index < 0:
        raise ValueError(f"Stream index must be non-negative, got {index}")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample(dist, rng: np.random.Generator):
    """Draw one field from dist."""
    return dist.sample(rng)
