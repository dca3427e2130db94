"""Deterministic seed derivation.

Every randomized operation takes an explicit 64-bit seed and is a pure
function of its arguments.  Parallel trials derive independent per-trial
seeds with :func:`derive_seed`, so results never depend on scheduling
order or thread count.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One output of the splitmix64 mixer for a given state."""
    z = (state + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def derive_seed(master_seed: int, index: int) -> int:
    """Derive the ``index``-th child seed of ``master_seed``.

    Children are the splitmix64 stream started at the master seed, so
    distinct indices give statistically independent seeds and the map is
    reproducible across platforms.
    """
    if index < 0:
        raise ValueError(f"index must be nonnegative, got {index}")
    return splitmix64((master_seed + index * _GOLDEN) & _MASK)


def rng_from(seed: int) -> np.random.Generator:
    """A fresh NumPy generator for a 64-bit seed."""
    return np.random.default_rng(seed & _MASK)
