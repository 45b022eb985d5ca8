"""Elementary cellular automata with fixed zero boundaries."""

import numpy as np

from ..errors import ConfigError


def _check_rule(rule: int) -> int:
    if int(rule) != rule or not 0 <= rule <= 255:
        raise ConfigError(f"Wolfram rule number must be an integer in 0..255, got {rule!r}")
    return int(rule)


def ca_step(cells, rule: int) -> np.ndarray:
    """Advance one or more CA states by one step.

    ``cells`` has shape ``(..., M)`` with 0/1 entries. Cell ``i`` becomes bit
    ``4*left + 2*self + right`` of ``rule``; neighbours outside the lattice
    count as 0.
    """
    rule = _check_rule(rule)
    c = np.asarray(cells).astype(np.uint8)
    padded = np.zeros(c.shape[:-1] + (c.shape[-1] + 2,), dtype=np.uint8)
    padded[..., 1:-1] = c
    idx = (padded[..., :-2] << 2) | (padded[..., 1:-1] << 1) | padded[..., 2:]
    return ((rule >> idx) & 1).astype(np.uint8)


def state_to_bits(index, M: int) -> np.ndarray:
    """Integer state(s) to cell arrays, most significant bit in cell 0."""
    index = np.asarray(index, dtype=np.int64)
    shifts = np.arange(M - 1, -1, -1)
    return ((index[..., None] >> shifts) & 1).astype(np.uint8)


def bits_to_state(cells) -> np.ndarray:
    cells = np.asarray(cells, dtype=np.int64)
    M = cells.shape[-1]
    return cells @ (1 << np.arange(M - 1, -1, -1))


def encode(cells) -> np.ndarray:
    """0/1 cells to -1/+1 values."""
    return 2.0 * np.asarray(cells, dtype=float) - 1.0


def decode(values) -> np.ndarray:
    return (np.asarray(values) > 0).astype(np.uint8)
