"""Seed-stream derivation.

Every experiment has one 64-bit root seed. Each random structure draws from
its own child stream, ``SeedSequence(root, spawn_key=(stream,))`` fed into
numpy's PCG64 generator, so regenerating one structure never shifts another.
"""

import numpy as np

WEIGHTS = 0
BIASES = 1
INPUT = 2
DATASET = 3
RESET = 4
SHUFFLE = 5

STREAMS = {
    "weights": WEIGHTS,
    "biases": BIASES,
    "input": INPUT,
    "dataset": DATASET,
    "reset": RESET,
    "shuffle": SHUFFLE,
}

SEED_MASK = (1 << 64) - 1


def stream(seed: int, name: str) -> np.random.Generator:
    """Return the generator for stream ``name`` under root ``seed``."""
    if name not in STREAMS:
        raise KeyError(f"unknown rng stream {name!r}")
    ss = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=(STREAMS[name],))
    return np.random.Generator(np.random.PCG64(ss))


def repeat_seed(seed: int, repeat: int) -> int:
    """Seed used for the ``repeat``-th run of a sweep point."""
    return (int(seed) + int(repeat)) & SEED_MASK
