"""Column-major sparse matrices over F2.

A matrix is stored CSC-style: ``indptr`` (length n+1) and ``indices``, where
column ``j`` holds the strictly increasing row indices
``indices[indptr[j]:indptr[j+1]]``.  Only square n x n matrices are needed.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from numba import njit


class SparseF2Matrix:
    __slots__ = ("indptr", "indices", "n")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, n: int | None = None):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.n = len(self.indptr) - 1 if n is None else int(n)
        if len(self.indptr) != self.n + 1:
            raise ValueError("indptr length must be n + 1")

    @classmethod
    def from_columns(cls, columns: Sequence[Iterable[int]], n: int | None = None) -> "SparseF2Matrix":
        cols = [sorted(int(i) for i in c) for c in columns]
        n = len(cols) if n is None else n
        lengths = np.array([len(c) for c in cols], dtype=np.int64)
        indptr = np.zeros(len(cols) + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        flat = [i for c in cols for i in c]
        m = cls(indptr, np.array(flat, dtype=np.int64), n)
        m.check()
        return m

    @classmethod
    def from_dense(cls, a) -> "SparseF2Matrix":
        a = np.asarray(a) % 2
        return cls.from_columns([np.flatnonzero(a[:, j]) for j in range(a.shape[1])], a.shape[0])

    def __len__(self) -> int:
        return self.n

    def column(self, j: int) -> np.ndarray:
        return self.indices[self.indptr[j]:self.indptr[j + 1]]

    @property
    def columns(self) -> list[list[int]]:
        return [self.column(j).tolist() for j in range(self.n)]

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def column_sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    def low(self) -> np.ndarray:
        """Largest row index of each column, -1 for empty columns."""
        sizes = self.column_sizes()
        out = np.full(self.n, -1, dtype=np.int64)
        nz = sizes > 0
        out[nz] = self.indices[self.indptr[1:][nz] - 1]
        return out

    def check(self) -> None:
        """Raise ``ValueError`` unless every column is strictly increasing and in range."""
        if self.nnz == 0:
            return
        if self.indices.min() < 0 or self.indices.max() >= self.n:
            raise ValueError("row index out of range")
        inc = np.diff(self.indices) > 0
        # positions where a new column starts are exempt from the increasing test
        starts = self.indptr[1:-1]
        starts = starts[(starts > 0) & (starts < self.nnz)]
        inc[starts - 1] = True
        if not inc.all():
            raise ValueError("row indices within a column must be strictly increasing")

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        cols = np.repeat(np.arange(self.n), self.column_sizes())
        a[self.indices, cols] = 1
        return a

    def anti_transpose(self) -> "SparseF2Matrix":
        """Entry (i, j) moves to (n-1-j, n-1-i)."""
        indptr, indices = _anti_transpose(self.indptr, self.indices, self.n)
        return SparseF2Matrix(indptr, indices, self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseF2Matrix):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self) -> str:
        return f"SparseF2Matrix(n={self.n}, nnz={self.nnz})"


@njit(cache=True)
def _anti_transpose(indptr, indices, n):
    counts = np.zeros(n + 1, dtype=np.int64)
    for k in range(indices.shape[0]):
        counts[n - indices[k]] += 1
    out_ptr = np.cumsum(counts)
    fill = out_ptr[:-1].copy()
    out_idx = np.empty(indices.shape[0], dtype=np.int64)
    # visiting original columns from right to left yields increasing new rows
    for j in range(n - 1, -1, -1):
        row = n - 1 - j
        for k in range(indptr[j], indptr[j + 1]):
            c = n - 1 - indices[k]
            out_idx[fill[c]] = row
            fill[c] += 1
    return out_ptr, out_idx
