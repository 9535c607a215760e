"""Simplices, filtered simplicial complexes and their boundary matrices.

A :class:`FilteredComplex` keeps its simplices as flat numpy arrays already in
filtration order, so complexes with tens of millions of simplices stay cheap.
The total order sorts by filtration value, then dimension, then the vertex
tuple lexicographically; faces therefore always precede their cofaces.

Within one dimension a simplex ``v0 < v1 < ... < vp`` is addressed by its rank
in the combinatorial number system, ``sum_i C(v_i, i + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import MissingFace, NonMonotone, PHError
from .matrix import SparseF2Matrix

_CHUNK = 1 << 21


@dataclass(frozen=True, order=True)
class Simplex:
    vertices: tuple[int, ...]

    def __post_init__(self):
        v = tuple(int(x) for x in self.vertices)
        if not v:
            raise PHError("a simplex needs at least one vertex")
        if any(a >= b for a, b in zip(v, v[1:])) or v[0] < 0:
            raise PHError(f"vertices must be distinct, non-negative and increasing: {v}")
        object.__setattr__(self, "vertices", v)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "Simplex":
        return cls(tuple(sorted(int(v) for v in vertices)))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> list["Simplex"]:
        """Codimension-1 faces."""
        if self.dim == 0:
            return []
        return [Simplex(f) for f in combinations(self.vertices, self.dim)]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


# ---------------------------------------------------------------- ranking

def _binomial_table(max_vertex: int, width: int) -> np.ndarray | None:
    """``table[v, k] = C(v, k)`` for v <= max_vertex, k <= width, or None on int64 overflow."""
    if math.comb(max_vertex + 1, width) >= 2 ** 62:
        return None
    table = np.zeros((max_vertex + 1, width + 1), dtype=np.int64)
    for k in range(width + 1):
        table[:, k] = [math.comb(v, k) for v in range(max_vertex + 1)]
    return table


def simplex_rank(vertices: np.ndarray | Sequence[int]) -> np.ndarray | int:
    """Combinatorial-number-system rank of sorted vertex rows.

    Accepts one sorted vertex sequence (returns an int) or an ``(m, p+1)``
    array of sorted rows (returns an int64 array).

    >>> simplex_rank([0, 1, 2]), simplex_rank([0, 1, 3]), simplex_rank([2, 3])
    (0, 1, 5)
    """
    arr = np.asarray(vertices, dtype=np.int64)
    if arr.ndim == 1:
        return sum(math.comb(int(v), i + 1) for i, v in enumerate(arr))
    table = _binomial_table(int(arr.max(initial=0)), arr.shape[1])
    if table is None:
        raise OverflowError("simplex rank does not fit in int64")
    return _rank_rows(arr, table)


def _rank_rows(rows: np.ndarray, table: np.ndarray) -> np.ndarray:
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[1]):
        out += table[rows[:, i], i + 1]
    return out


class _DimIndex:
    """Lookup from vertex rows of one dimension to global positions."""

    def __init__(self, rows: np.ndarray, positions: np.ndarray, table: np.ndarray | None):
        self.table = table
        keys = self._keys(rows)
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.positions = positions[order]
        if len(self.keys) > 1 and np.any(self.keys[1:] == self.keys[:-1]):
            raise PHError("duplicate simplex in input")

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return _rank_rows(rows, self.table)
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        return rows.view(np.dtype((np.void, 8 * rows.shape[1]))).ravel()

    def find(self, rows: np.ndarray) -> np.ndarray:
        """Global positions of ``rows``; -1 where absent."""
        keys = self._keys(rows)
        if len(self.keys) == 0:
            return np.full(len(keys), -1, dtype=np.int64)
        at = np.searchsorted(self.keys, keys)
        at_c = np.minimum(at, len(self.keys) - 1)
        hit = self.keys[at_c] == keys
        return np.where(hit, self.positions[at_c], -1)


# ---------------------------------------------------------------- complex

class FilteredComplex:
    """A filtered simplicial complex in a compatible total order.

    Attributes
    ----------
    vertices : (n, w) int64 array, row k holds the sorted vertices of the k-th
        simplex padded with -1.
    dims : (n,) int64 array of simplex dimensions.
    values : (n,) float64 array of filtration values (non-decreasing).
    order : (n,) permutation; position k holds the input index of simplex k.
    """

    def __init__(self, vertices: np.ndarray, values: np.ndarray, *, validate: bool = True):
        vertices = np.asarray(vertices, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[0] == 0:
            raise PHError("a complex needs at least one simplex")
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (vertices.shape[0],):
            raise PHError("one filtration value per simplex is required")
        if not np.all(np.isfinite(values)):
            raise PHError("filtration values must be finite")
        dims = (vertices >= 0).sum(axis=1) - 1
        if np.any(dims < 0):
            raise PHError("empty simplex")
        # sort key: value, then dimension, then vertex tuple
        keys = [vertices[:, c] for c in range(vertices.shape[1] - 1, -1, -1)]
        order = np.lexsort(keys + [dims, values])
        self.vertices = vertices[order]
        self.dims = dims[order]
        self.values = values[order]
        self.order = order
        self._boundary: SparseF2Matrix | None = None
        if validate:
            self._check_rows()
            self._boundary = self._assemble_boundary()

    # construction helpers -------------------------------------------------
    @classmethod
    def from_simplices(cls, simplices: Iterable[tuple[Iterable[int], float]], **kw) -> "FilteredComplex":
        items = [(Simplex.of(v).vertices, float(val)) for v, val in simplices]
        if not items:
            raise PHError("a complex needs at least one simplex")
        width = max(len(v) for v, _ in items)
        rows = np.full((len(items), width), -1, dtype=np.int64)
        for k, (v, _) in enumerate(items):
            rows[k, :len(v)] = v
        return cls(rows, np.array([val for _, val in items]), **kw)

    def _check_rows(self) -> None:
        v = self.vertices
        valid = v >= 0
        # padding must be a suffix and vertices strictly increasing
        if np.any(valid[:, 1:] & ~valid[:, :-1]):
            raise PHError("vertex padding must trail the vertices")
        both = valid[:, 1:] & valid[:, :-1]
        if np.any(both & (v[:, 1:] <= v[:, :-1])):
            raise PHError("vertices of a simplex must be distinct and increasing")

    def _indices(self) -> list[_DimIndex]:
        max_v = int(self.vertices.max())
        table = _binomial_table(max_v, self.vertices.shape[1])
        out = []
        for p in range(self.max_dim + 1):
            pos = np.flatnonzero(self.dims == p)
            out.append(_DimIndex(self.vertices[pos, :p + 1], pos, table))
        return out

    def _assemble_boundary(self) -> SparseF2Matrix:
        n = len(self)
        sizes = np.where(self.dims > 0, self.dims + 1, 0)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(sizes, out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        index = self._indices()
        for p in range(1, self.max_dim + 1):
            pos_all = np.flatnonzero(self.dims == p)
            for lo in range(0, len(pos_all), _CHUNK):
                pos = pos_all[lo:lo + _CHUNK]
                rows = self.vertices[pos, :p + 1]
                faces = np.empty((len(pos), p + 1), dtype=np.int64)
                for r in range(p + 1):
                    sub = np.delete(rows, r, axis=1)
                    found = index[p - 1].find(sub)
                    if np.any(found < 0):
                        k = int(np.flatnonzero(found < 0)[0])
                        raise MissingFace(
                            f"face {tuple(sub[k].tolist())} of simplex {tuple(rows[k].tolist())} is missing")
                    faces[:, r] = found
                bad = self.values[faces].max(axis=1) > self.values[pos]
                if np.any(bad):
                    k = int(np.flatnonzero(bad)[0])
                    raise NonMonotone(
                        f"simplex {tuple(rows[k].tolist())} enters before one of its faces")
                faces.sort(axis=1)
                starts = indptr[pos]
                for r in range(p + 1):
                    indices[starts + r] = faces[:, r]
        return SparseF2Matrix(indptr, indices, n)

    # access -----------------------------------------------------------------
    def __len__(self) -> int:
        return self.vertices.shape[0]

    @property
    def max_dim(self) -> int:
        return int(self.dims.max())

    def simplex(self, k: int) -> Simplex:
        row = self.vertices[k]
        return Simplex(tuple(row[row >= 0].tolist()))

    def __getitem__(self, k: int) -> tuple[Simplex, float]:
        return self.simplex(k), float(self.values[k])

    def __iter__(self) -> Iterator[tuple[Simplex, float]]:
        for k in range(len(self)):
            yield self[k]

    @property
    def simplices(self) -> list[tuple[Simplex, float]]:
        return list(self)

    def counts(self) -> list[int]:
        """Number of simplices in each dimension."""
        return np.bincount(self.dims, minlength=self.max_dim + 1).tolist()

    def index_of(self, vertices: Iterable[int]) -> int:
        """Position of a simplex in the total order (``KeyError`` if absent)."""
        s = Simplex.of(vertices)
        row = np.full((1, self.vertices.shape[1]), -1, dtype=np.int64)
        if s.dim >= row.shape[1]:
            raise KeyError(s.vertices)
        row[0, :s.dim + 1] = s.vertices
        hit = np.flatnonzero(np.all(self.vertices == row, axis=1))
        if len(hit) == 0:
            raise KeyError(s.vertices)
        return int(hit[0])

    def value_of(self, vertices: Iterable[int]) -> float:
        return float(self.values[self.index_of(vertices)])

    def as_dict(self) -> dict[tuple[int, ...], float]:
        """``{vertex tuple: value}``; intended for small complexes."""
        return {s.vertices: v for s, v in self}

    def __repr__(self) -> str:
        return f"FilteredComplex(size={len(self)}, counts={self.counts()})"


def make_complex(simplices: Iterable[tuple[Iterable[int], float]]) -> FilteredComplex:
    """Validate a list of ``(vertices, value)`` pairs and order it.

    Raises :class:`MissingFace` if a face is absent and :class:`NonMonotone`
    if a face enters after one of its cofaces.
    """
    return FilteredComplex.from_simplices(simplices)


def close(simplices: Iterable[tuple[Iterable[int], float]]) -> FilteredComplex:
    """Like :func:`make_complex`, but first adds any missing faces.

    An added face gets the smallest value among its cofaces, the largest value
    that keeps the filtration monotone.
    """
    values: dict[tuple[int, ...], float] = {}
    for v, val in simplices:
        values[Simplex.of(v).vertices] = float(val)
    given = set(values)
    top = max((len(s) for s in values), default=0)
    # descending size, so faces added at one level are themselves closed next
    for size in range(top, 1, -1):
        for s in [s for s in values if len(s) == size]:
            for f in combinations(s, size - 1):
                if f not in given:
                    values[f] = min(values.get(f, math.inf), values[s])
    return FilteredComplex.from_simplices(values.items())


def boundary_matrix(K: FilteredComplex) -> SparseF2Matrix:
    """Column j lists the positions of the codimension-1 faces of simplex j."""
    if K._boundary is None:
        K._boundary = K._assemble_boundary()
    return K._boundary


def euler_characteristic(K: FilteredComplex) -> int:
    return int(sum((-1) ** p * c for p, c in enumerate(K.counts())))


# ---------------------------------------------------------------- text format

def _data_lines(text: str) -> Iterator[list[str]]:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line.split()


def parse_complex(text: str) -> FilteredComplex:
    """Parse lines ``dim v0 ... vdim value`` (order irrelevant, ``#`` comments)."""
    items = []
    for toks in _data_lines(text):
        try:
            dim = int(toks[0])
            verts = [int(t) for t in toks[1:-1]]
            value = float(toks[-1])
        except (ValueError, IndexError):
            raise PHError(f"malformed complex line: {' '.join(toks)}") from None
        if len(verts) != dim + 1:
            raise PHError(f"dimension {dim} needs {dim + 1} vertices: {' '.join(toks)}")
        items.append((verts, value))
    return make_complex(items)


def format_complex(K: FilteredComplex) -> str:
    lines = []
    for k in range(len(K)):
        s = K.simplex(k)
        lines.append(" ".join([str(s.dim), *map(str, s.vertices), repr(float(K.values[k]))]))
    return "\n".join(lines) + "\n"


def read_complex(path: str | Path) -> FilteredComplex:
    return parse_complex(Path(path).read_text())


def write_complex(K: FilteredComplex, path: str | Path) -> None:
    Path(path).write_text(format_complex(K))
