"""Staircase counting backend selection.

At import time we prefer the compiled Cython kernel and fall back to the
numpy reference implementation.  Set MIXMULT_PURE=1 to force the fallback
(used by tests and the benchmark to compare both paths).
"""

from __future__ import annotations

import os

import numpy as np

from mixmult.errors import CountingOverflow

# A box bigger than this many cells means something upstream went wrong
# (windows are small by design); fail loudly instead of thrashing memory.
MAX_BOX_CELLS = 1 << 28

if os.environ.get("MIXMULT_PURE") == "1":
    from mixmult.counting import _reference as _impl

    BACKEND = "reference"
else:
    try:
        from mixmult.counting import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from mixmult.counting import _reference as _impl  # type: ignore[no-redef]

        BACKEND = "reference"


def _as_array(vectors, dim: int) -> np.ndarray:
    if not vectors:
        return np.zeros((0, dim), dtype=np.int64)
    return np.ascontiguousarray(np.asarray(sorted(vectors), dtype=np.int64))


def _check_box(bounds) -> np.ndarray:
    arr = np.asarray(bounds, dtype=np.int64)
    vol = 1
    for b in arr:
        vol *= max(int(b), 0)
        if vol > MAX_BOX_CELLS:
            raise CountingOverflow(f"enumeration box of {vol}+ cells exceeds the safety cap")
    return np.ascontiguousarray(arr)


def count_staircase_difference(ugens, vgens, bounds) -> int:
    """Lattice points of box(bounds) inside up(ugens) but outside up(vgens)."""
    dim = len(bounds)
    return int(
        _impl.count_difference(_as_array(ugens, dim), _as_array(vgens, dim), _check_box(bounds))
    )


def staircase_complement(gens, bounds) -> tuple[int, int]:
    """(count, max coordinate-sum) of box points not in up(gens); max is -1 if none."""
    dim = len(bounds)
    count, norm = _impl.complement_stats(_as_array(gens, dim), _check_box(bounds))
    return int(count), int(norm)
