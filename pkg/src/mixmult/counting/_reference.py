"""Reference counting backend: numpy rasterization of staircases.

Semantically identical to the compiled kernel; used as the import-time
fallback and as the comparison baseline in benchmarks and tests.
"""

from __future__ import annotations

import numpy as np


def _rasterize(gens: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    grid = np.zeros(shape, dtype=bool)
    for g in gens:
        if all(int(c) < b for c, b in zip(g, shape)):
            grid[tuple(slice(int(c), None) for c in g)] = True
    return grid


def count_difference(ugens: np.ndarray, vgens: np.ndarray, bounds: np.ndarray) -> int:
    shape = tuple(int(b) for b in bounds)
    if any(b <= 0 for b in shape) or len(ugens) == 0:
        return 0
    inside = _rasterize(ugens, shape)
    if len(vgens):
        inside &= ~_rasterize(vgens, shape)
    return int(inside.sum())


def complement_stats(gens: np.ndarray, bounds: np.ndarray) -> tuple[int, int]:
    shape = tuple(int(b) for b in bounds)
    if any(b <= 0 for b in shape):
        return 0, -1
    outside = ~_rasterize(gens, shape)
    count = int(outside.sum())
    if count == 0:
        return 0, -1
    norms = np.indices(shape, dtype=np.int64).sum(axis=0)
    return count, int(norms[outside].max())
