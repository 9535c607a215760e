"""Filtered cubical complexes of grey-scale images (vertices = pixels).

Cells live on the doubled grid of shape ``2 n - 1`` per axis: a cell with
doubled coordinate ``c`` has anchor ``c // 2`` and extends along the axes where
``c`` is odd, so its dimension is the number of odd coordinates.  Its value is
the largest grey value among its vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .barcode import Barcode
from .errors import PHError, UnsupportedDim
from .matrix import SparseF2Matrix


@dataclass
class ImageGrid:
    dims: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        self.dims = tuple(int(x) for x in self.dims)
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if any(x < 1 for x in self.dims):
            raise PHError("image extents must be positive")
        if v.size != int(np.prod(self.dims)):
            raise PHError(f"{v.size} values do not fill a grid of shape {self.dims}")
        if not np.all(np.isfinite(v)):
            raise PHError("grey values must be finite")
        self.values = v

    @classmethod
    def from_array(cls, a) -> "ImageGrid":
        a = np.asarray(a, dtype=np.float64)
        return cls(a.shape, a.ravel())

    def array(self) -> np.ndarray:
        return self.values.reshape(self.dims)


class CubicalCell(NamedTuple):
    anchor: tuple[int, ...]
    extent: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.extent)


class CubicalComplex:
    """All cells of an image in filtration order: value, dimension, anchor
    (lexicographic), then extent."""

    def __init__(self, img: ImageGrid):
        d = len(img.dims)
        if d not in (2, 3):
            raise UnsupportedDim(f"only 2- and 3-dimensional images are supported, got {d}")
        self.shape = img.dims
        a = img.array()
        full = tuple(2 * n - 1 for n in self.shape)
        V = np.full(full, -np.inf)
        V[tuple(slice(None, None, 2) for _ in range(d))] = a
        for ax in range(d):
            lo = [slice(None)] * d
            hi = [slice(None)] * d
            mid = [slice(None)] * d
            lo[ax], hi[ax], mid[ax] = slice(0, -1, 2), slice(2, None, 2), slice(1, None, 2)
            V[tuple(mid)] = np.maximum(V[tuple(lo)], V[tuple(hi)])
        coords = np.indices(full).reshape(d, -1).T
        odd = coords & 1
        dims = odd.sum(axis=1)
        vals = V.ravel()
        anchor = coords >> 1
        keys = [odd[:, ax] for ax in reversed(range(d))] + \
               [anchor[:, ax] for ax in reversed(range(d))] + [dims, vals]
        self.order = np.lexsort(keys)
        self.full_shape = full
        self.coords = coords[self.order]
        self.dims = dims[self.order].astype(np.int64)
        self.values = vals[self.order]
        # position in filtration order of each doubled-grid cell
        self.position = np.empty(len(vals), dtype=np.int64)
        self.position[self.order] = np.arange(len(vals))

    def __len__(self) -> int:
        return len(self.values)

    def counts(self) -> list[int]:
        return np.bincount(self.dims).tolist()

    def cell(self, k: int) -> CubicalCell:
        c = self.coords[k]
        return CubicalCell(tuple((c >> 1).tolist()), tuple(np.flatnonzero(c & 1).tolist()),
                           float(self.values[k]))

    def __iter__(self) -> Iterator[CubicalCell]:
        for k in range(len(self)):
            yield self.cell(k)

    @cached_property
    def _boundary(self) -> SparseF2Matrix:
        d = len(self.shape)
        n = len(self)
        strides = np.array([int(np.prod(self.full_shape[ax + 1:])) for ax in range(d)], dtype=np.int64)
        flat = self.coords @ strides
        sizes = 2 * self.dims
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(sizes, out=indptr[1:])
        rows = np.empty(indptr[-1], dtype=np.int64)
        fill = indptr[:-1].copy()
        for ax in range(d):
            has = np.flatnonzero(self.coords[:, ax] & 1)
            for sign in (-1, 1):
                rows[fill[has]] = self.position[flat[has] + sign * strides[ax]]
                fill[has] += 1
        # sort each column's rows
        col = np.repeat(np.arange(n), sizes)
        rows = rows[np.lexsort((rows, col))]
        return SparseF2Matrix(indptr, rows, n)

    def boundary(self) -> SparseF2Matrix:
        return self._boundary


def build_cubical(img: ImageGrid) -> CubicalComplex:
    return CubicalComplex(img)


def cubical_boundary(K: CubicalComplex) -> SparseF2Matrix:
    """Column of a k-cell lists its 2k codimension-1 faces."""
    return K.boundary()


def image_barcode(img: ImageGrid, max_dim: int | None = None, algorithm: str = "twist",
                  drop_zero: bool = True) -> Barcode:
    from .reduction import compute_barcode
    b = compute_barcode(build_cubical(img), algorithm, drop_zero)
    if max_dim is not None:
        keep = b.dims <= max_dim
        b = Barcode(b.dims[keep], b.births[keep], b.deaths[keep])
    return b


# ------------------------------------------------------------------ files

def parse_image(text: str) -> ImageGrid:
    toks = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            toks.extend(line.split())
    try:
        d = int(toks[0])
        dims = [int(t) for t in toks[1:1 + d]]
        vals = [float(t) for t in toks[1 + d:]]
    except (IndexError, ValueError):
        raise PHError("malformed image file") from None
    if len(dims) != d:
        raise PHError("image file is missing extents")
    return ImageGrid(tuple(dims), np.array(vals))


def format_image(img: ImageGrid) -> str:
    a = img.array()
    lines = [str(len(img.dims)), " ".join(map(str, img.dims))]
    for row in a.reshape(-1, img.dims[-1]):
        lines.append(" ".join("%.17g" % x for x in row))
    return "\n".join(lines) + "\n"


def read_image(path) -> ImageGrid:
    return parse_image(Path(path).read_text())


def write_image(img: ImageGrid, path) -> None:
    Path(path).write_text(format_image(img))
