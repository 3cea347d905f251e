# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled staircase-counting kernels.

Both functions rasterize up-sets (staircases) of integer generator vectors
into a byte grid over a finite box and reduce over it.  The box volumes are
checked by the Python wrapper before we get here.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

ctypedef long long i64


cdef inline i64 _volume(const i64[::1] bounds) noexcept nogil:
    cdef i64 v = 1
    cdef Py_ssize_t k
    for k in range(bounds.shape[0]):
        if bounds[k] <= 0:
            return 0
        v *= bounds[k]
    return v


cdef void _mark(unsigned char* grid, const i64[:, ::1] gens,
                const i64[::1] bounds, unsigned char bit) noexcept nogil:
    # OR `bit` into every cell of the box that lies above some generator.
    cdef Py_ssize_t dim = bounds.shape[0]
    cdef Py_ssize_t m = gens.shape[0]
    cdef Py_ssize_t gi, k
    cdef i64 off, run, j
    cdef i64 cur[64]
    cdef i64 stride[64]
    cdef bint clipped, done

    stride[dim - 1] = 1
    for k in range(dim - 2, -1, -1):
        stride[k] = stride[k + 1] * bounds[k + 1]

    for gi in range(m):
        clipped = False
        for k in range(dim):
            if gens[gi, k] >= bounds[k]:
                clipped = True
                break
        if clipped:
            continue
        for k in range(dim):
            cur[k] = gens[gi, k]
        run = bounds[dim - 1] - gens[gi, dim - 1]
        done = False
        while not done:
            off = 0
            for k in range(dim - 1):
                off += cur[k] * stride[k]
            off += gens[gi, dim - 1]
            for j in range(run):
                grid[off + j] |= bit
            # odometer over the outer dimensions
            done = True
            for k in range(dim - 2, -1, -1):
                cur[k] += 1
                if cur[k] < bounds[k]:
                    done = False
                    break
                cur[k] = gens[gi, k]


def count_difference(const i64[:, ::1] ugens, const i64[:, ::1] vgens,
                     const i64[::1] bounds):
    """Count box points that lie above some u-generator and above no v-generator."""
    cdef i64 vol = _volume(bounds)
    if vol == 0 or ugens.shape[0] == 0:
        return 0
    cdef unsigned char* grid = <unsigned char*> malloc(vol)
    if grid == NULL:
        raise MemoryError()
    cdef i64 n = 0
    cdef i64 i
    with nogil:
        memset(grid, 0, vol)
        _mark(grid, ugens, bounds, 1)
        if vgens.shape[0] > 0:
            _mark(grid, vgens, bounds, 2)
        for i in range(vol):
            if grid[i] == 1:
                n += 1
    free(grid)
    return n


def complement_stats(const i64[:, ::1] gens, const i64[::1] bounds):
    """Return (count, max coordinate-sum) over box points below every generator.

    The max norm is -1 when the box is fully covered by the up-set.
    """
    cdef i64 vol = _volume(bounds)
    if vol == 0:
        return 0, -1
    cdef Py_ssize_t dim = bounds.shape[0]
    cdef unsigned char* grid = <unsigned char*> malloc(vol)
    if grid == NULL:
        raise MemoryError()
    cdef i64 count = 0
    cdef i64 best = -1
    cdef i64 i, norm
    cdef Py_ssize_t k
    cdef i64 cur[64]
    cdef bint done
    with nogil:
        memset(grid, 0, vol)
        if gens.shape[0] > 0:
            _mark(grid, gens, bounds, 1)
        for k in range(dim):
            cur[k] = 0
        i = 0
        done = False
        while not done:
            if grid[i] == 0:
                count += 1
                norm = 0
                for k in range(dim):
                    norm += cur[k]
                if norm > best:
                    best = norm
            i += 1
            done = True
            for k in range(dim - 1, -1, -1):
                cur[k] += 1
                if cur[k] < bounds[k]:
                    done = False
                    break
                cur[k] = 0
    free(grid)
    return count, best
