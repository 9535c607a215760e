"""Boundary-matrix reduction over F2.

Three algorithms share one compiled column-reduction kernel:

* ``standard`` reduces columns left to right, adding an earlier column with
  the same low until every low is unique.
* ``twist`` visits dimensions from high to low; once column j gets low i,
  column i is known to reduce to zero and is skipped (clearing).
* ``dual`` reduces the anti-transpose (persistent cohomology) with the
  standard order and maps the pairs back to the original indices.

A column under reduction is accumulated in a binary max-heap; entries that
occur an even number of times cancel when popped.  Finished columns are
appended to one flat buffer and never modified again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numba import njit

from .barcode import Barcode
from .matrix import SparseF2Matrix

ALGORITHMS = ("standard", "twist", "dual")


# ------------------------------------------------------------------ heap

@njit(cache=True, inline="always")
def _sift_up(h, k):
    x = h[k]
    while k > 0:
        parent = (k - 1) >> 1
        if h[parent] >= x:
            break
        h[k] = h[parent]
        k = parent
    h[k] = x


@njit(cache=True, inline="always")
def _sift_down(h, size):
    x = h[0]
    k = 0
    while True:
        c = 2 * k + 1
        if c >= size:
            break
        if c + 1 < size and h[c + 1] > h[c]:
            c += 1
        if h[c] <= x:
            break
        h[k] = h[c]
        k = c
    h[k] = x


@njit(cache=True)
def _push(h, size, x):
    if size == h.shape[0]:
        bigger = np.empty(2 * h.shape[0], dtype=np.int64)
        bigger[:size] = h[:size]
        h = bigger
    h[size] = x
    _sift_up(h, size)
    return h, size + 1


@njit(cache=True)
def _pop(h, size):
    top = h[0]
    size -= 1
    if size > 0:
        h[0] = h[size]
        _sift_down(h, size)
    return top, size


@njit(cache=True)
def _pop_pivot(h, size):
    """Pop the largest entry with odd multiplicity; -1 if none is left."""
    while size > 0:
        x, size = _pop(h, size)
        if size > 0 and h[0] == x:
            _, size = _pop(h, size)
        else:
            return x, size
    return -1, size


@njit(cache=True)
def _reduce_kernel(indptr, indices, n, col_order, clearing):
    lows = np.full(n, -1, dtype=np.int64)
    pivot_col = np.full(n, -1, dtype=np.int64)
    cleared = np.zeros(n, dtype=np.bool_)
    done = np.zeros(n, dtype=np.bool_)
    start = np.zeros(n, dtype=np.int64)
    length = np.zeros(n, dtype=np.int64)
    store = np.empty(max(indices.shape[0], 16), dtype=np.int64)
    used = 0
    heap = np.empty(64, dtype=np.int64)
    tmp = np.empty(64, dtype=np.int64)
    additions = 0

    for t in range(col_order.shape[0]):
        j = col_order[t]
        done[j] = True
        a = indptr[j]
        b = indptr[j + 1]
        if cleared[j] or a == b:
            continue
        low = indices[b - 1]
        if pivot_col[low] == -1:
            # already reduced: copy verbatim
            m = b - a
            if used + m > store.shape[0]:
                bigger = np.empty(max(2 * store.shape[0], used + m), dtype=np.int64)
                bigger[:used] = store[:used]
                store = bigger
            store[used:used + m] = indices[a:b]
            start[j] = used
            length[j] = m
            used += m
        else:
            size = 0
            for k in range(a, b):
                heap, size = _push(heap, size, indices[k])
            limit = max(64, 4 * (b - a))
            while True:
                low, size = _pop_pivot(heap, size)
                if low == -1:
                    break
                heap, size = _push(heap, size, low)
                other = pivot_col[low]
                if other == -1:
                    break
                additions += 1
                s = start[other]
                for k in range(s, s + length[other]):
                    heap, size = _push(heap, size, store[k])
                if size > limit:
                    # drop cancelled pairs so the heap does not grow without bound
                    m = 0
                    while True:
                        x, size = _pop_pivot(heap, size)
                        if x == -1:
                            break
                        if m == tmp.shape[0]:
                            bigger = np.empty(2 * tmp.shape[0], dtype=np.int64)
                            bigger[:m] = tmp[:m]
                            tmp = bigger
                        tmp[m] = x
                        m += 1
                    for k in range(m):
                        heap, size = _push(heap, size, tmp[k])
                    limit = max(64, 4 * m)
            # drain into ascending storage
            m = 0
            while True:
                x, size = _pop_pivot(heap, size)
                if x == -1:
                    break
                if m == tmp.shape[0]:
                    bigger = np.empty(2 * tmp.shape[0], dtype=np.int64)
                    bigger[:m] = tmp[:m]
                    tmp = bigger
                tmp[m] = x
                m += 1
            if m == 0:
                continue
            if used + m > store.shape[0]:
                bigger = np.empty(max(2 * store.shape[0], used + m), dtype=np.int64)
                bigger[:used] = store[:used]
                store = bigger
            for k in range(m):
                store[used + k] = tmp[m - 1 - k]
            start[j] = used
            length[j] = m
            used += m
            low = tmp[0]
        lows[j] = low
        pivot_col[low] = j
        if clearing and not done[low]:
            cleared[low] = True
    return lows, start, length, store[:used], additions


@njit(cache=True)
def _gather(start, length, store):
    n = start.shape[0]
    indptr = np.zeros(n + 1, dtype=np.int64)
    for j in range(n):
        indptr[j + 1] = indptr[j] + length[j]
    out = np.empty(indptr[n], dtype=np.int64)
    for j in range(n):
        out[indptr[j]:indptr[j + 1]] = store[start[j]:start[j] + length[j]]
    return indptr, out


# ------------------------------------------------------------------ state

@dataclass
class ReductionState:
    """Outcome of a reduction.

    ``R`` is the reduced working matrix (the reduced anti-transpose for the
    dual algorithm).  ``lows[j] = i`` records the pair (i, j) on the original
    simplex indices, -1 otherwise.  ``pairs`` is an (m, 2) array of (i, j) with
    i < j, ``essentials`` the unpaired indices.
    """

    R: SparseF2Matrix
    lows: np.ndarray
    pairs: np.ndarray
    essentials: np.ndarray
    algorithm: str = "standard"
    column_additions: int = 0
    extra: dict = field(default_factory=dict)

    def pair_set(self) -> set[tuple[int, int]]:
        return set(map(tuple, self.pairs.tolist()))


def _finish(R_lows: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    j = np.flatnonzero(R_lows >= 0)
    pairs = np.column_stack([R_lows[j], j]).astype(np.int64) if len(j) else np.zeros((0, 2), np.int64)
    paired = np.zeros(n, dtype=bool)
    paired[pairs[:, 0]] = True
    paired[pairs[:, 1]] = True
    return pairs, np.flatnonzero(~paired)


def _run(B: SparseF2Matrix, col_order: np.ndarray, clearing: bool):
    lows, start, length, store, adds = _reduce_kernel(
        B.indptr, B.indices, B.n, np.ascontiguousarray(col_order, dtype=np.int64), clearing)
    indptr, idx = _gather(start, length, store)
    return SparseF2Matrix(indptr, idx, B.n), lows, adds


def reduce_standard(B: SparseF2Matrix) -> ReductionState:
    R, lows, adds = _run(B, np.arange(B.n), False)
    pairs, ess = _finish(lows, B.n)
    return ReductionState(R, lows, pairs, ess, "standard", adds)


def reduce_twist(B: SparseF2Matrix, dims) -> ReductionState:
    dims = np.asarray(dims, dtype=np.int64)
    if len(dims) != B.n:
        raise ValueError("one dimension per column is required")
    # high dimensions first, left to right inside a dimension
    order = np.lexsort((np.arange(B.n), -dims))
    R, lows, adds = _run(B, order, True)
    pairs, ess = _finish(lows, B.n)
    return ReductionState(R, lows, pairs, ess, "twist", adds)


def reduce_dual(B: SparseF2Matrix, dims=None) -> ReductionState:
    """``dims`` is accepted for interface symmetry; the dual pass does not need it."""
    n = B.n
    A = B.anti_transpose()
    R, lows_a, adds = _run(A, np.arange(n), False)
    ca = np.flatnonzero(lows_a >= 0)
    lows = np.full(n, -1, dtype=np.int64)
    # pair (r, c) in the anti-transpose is (n-1-c, n-1-r) in the original
    lows[n - 1 - lows_a[ca]] = n - 1 - ca
    pairs, ess = _finish(lows, n)
    return ReductionState(R, lows, pairs, ess, "dual", adds)


def reduce(B: SparseF2Matrix, dims=None, algorithm: str = "twist") -> ReductionState:
    if algorithm == "standard":
        return reduce_standard(B)
    if algorithm == "twist":
        if dims is None:
            raise ValueError("the twist algorithm needs column dimensions")
        return reduce_twist(B, dims)
    if algorithm == "dual":
        return reduce_dual(B, dims)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")


def is_reduced(R: SparseF2Matrix) -> bool:
    low = R.low()
    low = low[low >= 0]
    return len(np.unique(low)) == len(low)


# ------------------------------------------------------------------ read-off

class Filtered(Protocol):
    dims: np.ndarray
    values: np.ndarray


def extract_barcode(state: ReductionState, K: Filtered, drop_zero: bool = True) -> Barcode:
    """Pair (i, j) gives ``[value_i, value_j)`` in dimension ``dim_i``; an
    unpaired simplex k gives ``[value_k, inf)``."""
    i, j = state.pairs[:, 0], state.pairs[:, 1]
    e = state.essentials
    dims = np.concatenate([K.dims[i], K.dims[e]])
    births = np.concatenate([K.values[i], K.values[e]])
    deaths = np.concatenate([K.values[j], np.full(len(e), np.inf)])
    if drop_zero:
        keep = births < deaths
        dims, births, deaths = dims[keep], births[keep], deaths[keep]
    return Barcode(dims, births, deaths)


def compute_barcode(K, algorithm: str = "twist", drop_zero: bool = True) -> Barcode:
    """Reduce the boundary matrix of a filtered (simplicial or cubical) complex
    and read off its barcode."""
    B = K.boundary() if hasattr(K, "boundary") else _boundary_of(K)
    state = reduce(B, K.dims, algorithm)
    return extract_barcode(state, K, drop_zero)


def _boundary_of(K):
    from .complex import boundary_matrix
    return boundary_matrix(K)


def betti_numbers(K) -> list[int]:
    """Betti numbers of the whole complex (filtration values ignored)."""
    B = _boundary_of(K) if not hasattr(K, "boundary") else K.boundary()
    state = reduce_twist(B, K.dims)
    ess_dims = K.dims[state.essentials]
    top = int(K.dims.max())
    return np.bincount(ess_dims, minlength=top + 1).tolist()
