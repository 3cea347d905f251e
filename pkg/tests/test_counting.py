import random
from itertools import product as iproduct

import pytest

from mixmult.counting import _reference
from mixmult.errors import CountingOverflow

try:
    from mixmult.counting import _core
    BACKENDS = [("compiled", _core), ("reference", _reference)]
except ImportError:
    BACKENDS = [("reference", _reference)]


def naive_count(ugens, vgens, bounds):
    n = 0
    for pt in iproduct(*[range(b) for b in bounds]):
        in_u = any(all(g[i] <= pt[i] for i in range(len(pt))) for g in ugens)
        in_v = any(all(g[i] <= pt[i] for i in range(len(pt))) for g in vgens)
        if in_u and not in_v:
            n += 1
    return n


def naive_complement(gens, bounds):
    count, best = 0, -1
    for pt in iproduct(*[range(b) for b in bounds]):
        if not any(all(g[i] <= pt[i] for i in range(len(pt))) for g in gens):
            count += 1
            best = max(best, sum(pt))
    return count, best


def _arrays(vectors, dim):
    import numpy as np

    if not vectors:
        return np.zeros((0, dim), dtype=np.int64)
    return np.ascontiguousarray(np.asarray(vectors, dtype=np.int64))


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_count_difference_random(name, impl):
    import numpy as np

    rng = random.Random(31)
    for _ in range(80):
        dim = rng.randint(1, 4)
        bounds = [rng.randint(1, 7) for _ in range(dim)]
        ugens = [tuple(rng.randint(0, 6) for _ in range(dim)) for _ in range(rng.randint(0, 5))]
        vgens = [tuple(rng.randint(0, 6) for _ in range(dim)) for _ in range(rng.randint(0, 5))]
        got = impl.count_difference(
            _arrays(ugens, dim), _arrays(vgens, dim), np.asarray(bounds, dtype=np.int64)
        )
        assert got == naive_count(ugens, vgens, bounds), (name, ugens, vgens, bounds)


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_complement_stats_random(name, impl):
    import numpy as np

    rng = random.Random(37)
    for _ in range(80):
        dim = rng.randint(1, 4)
        bounds = [rng.randint(1, 6) for _ in range(dim)]
        gens = [tuple(rng.randint(0, 5) for _ in range(dim)) for _ in range(rng.randint(0, 4))]
        got = tuple(impl.complement_stats(_arrays(gens, dim), np.asarray(bounds, dtype=np.int64)))
        assert got == naive_complement(gens, bounds), (name, gens, bounds)


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_empty_box(name, impl):
    import numpy as np

    z = np.zeros((0, 2), dtype=np.int64)
    assert impl.count_difference(z, z, np.asarray([0, 3], dtype=np.int64)) == 0
    assert tuple(impl.complement_stats(z, np.asarray([0, 3], dtype=np.int64))) == (0, -1)


def test_backends_agree_on_larger_boxes():
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend unavailable")
    import numpy as np

    rng = random.Random(41)
    for _ in range(10):
        dim = rng.randint(2, 3)
        bounds = np.asarray([rng.randint(10, 25) for _ in range(dim)], dtype=np.int64)
        ugens = _arrays([tuple(rng.randint(0, 20) for _ in range(dim)) for _ in range(6)], dim)
        vgens = _arrays([tuple(rng.randint(0, 20) for _ in range(dim)) for _ in range(6)], dim)
        a = _core.count_difference(ugens, vgens, bounds)
        b = _reference.count_difference(ugens, vgens, bounds)
        assert a == b


def test_overflow_guard():
    from mixmult.counting import count_staircase_difference

    with pytest.raises(CountingOverflow):
        count_staircase_difference([(0, 0, 0)], [], (100000, 100000, 100000))
