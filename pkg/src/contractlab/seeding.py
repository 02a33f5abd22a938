"""Deterministic stream derivation for replicated experiments.

Every Monte Carlo cell of a sweep gets its own PCG64 generator whose seed
is derived from (master seed, labels...) with splitmix64, so results do not
depend on execution order or worker count.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One splitmix64 step (Steele, Lea, Flood 2014); a 64-bit bijection."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def _fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK
    return h


def derive_seed(master: int, *keys: int | str) -> int:
    """Mix a master seed with integer or string labels into a child seed.

    Each key is folded in as ``state = splitmix64(state XOR key)``; strings
    are first hashed with FNV-1a (64 bit).
    """
    state = splitmix64(master & _MASK)
    for key in keys:
        k = _fnv1a64(key) if isinstance(key, str) else (key & _MASK)
        state = splitmix64(state ^ k)
    return state


def substream(master: int, *keys: int | str) -> np.random.Generator:
    """Independent generator for the cell labelled by ``keys``."""
    return np.random.Generator(np.random.PCG64(derive_seed(master, *keys)))
