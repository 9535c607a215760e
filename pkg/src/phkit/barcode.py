"""Barcodes: multisets of ``(dim, birth, death)`` intervals.

Intervals are held in three parallel arrays sorted by (dim, birth, death);
``death`` is ``inf`` for essential classes.  The text format is one interval
per line, ``dim birth death``, with 17 significant digits so that a round trip
through text is exact.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import PHError


class Interval(NamedTuple):
    dim: int
    birth: float
    death: float

    @property
    def persistence(self) -> float:
        return self.death - self.birth


class Barcode:
    __slots__ = ("dims", "births", "deaths")

    def __init__(self, dims=(), births=(), deaths=()):
        dims = np.asarray(dims, dtype=np.int64).ravel()
        births = np.asarray(births, dtype=np.float64).ravel()
        deaths = np.asarray(deaths, dtype=np.float64).ravel()
        if not (len(dims) == len(births) == len(deaths)):
            raise PHError("dims, births and deaths must have equal length")
        if len(dims):
            if np.any(dims < 0):
                raise PHError("interval dimensions must be non-negative")
            if not np.all(np.isfinite(births)):
                raise PHError("births must be finite")
            if np.any(births > deaths):
                raise PHError("birth must not exceed death")
        order = np.lexsort((deaths, births, dims))
        self.dims = dims[order]
        self.births = births[order]
        self.deaths = deaths[order]

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[int, float, float]]) -> "Barcode":
        items = list(intervals)
        if not items:
            return cls()
        d, b, e = zip(*items)
        return cls(d, b, e)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[Interval]:
        for d, b, e in zip(self.dims.tolist(), self.births.tolist(), self.deaths.tolist()):
            yield Interval(d, b, e)

    @property
    def intervals(self) -> list[Interval]:
        return list(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Barcode):
            return NotImplemented
        return (np.array_equal(self.dims, other.dims) and np.array_equal(self.births, other.births)
                and np.array_equal(self.deaths, other.deaths))

    def __repr__(self) -> str:
        if len(self) > 12:
            return f"Barcode({len(self)} intervals)"
        return "Barcode([" + ", ".join(f"({d}, {b:g}, {e:g})" for d, b, e in self) + "])"

    def in_dim(self, dim: int) -> list[tuple[float, float]]:
        m = self.dims == dim
        return list(zip(self.births[m].tolist(), self.deaths[m].tolist()))

    def restrict(self, dim: int) -> "Barcode":
        m = self.dims == dim
        return Barcode(self.dims[m], self.births[m], self.deaths[m])

    def max_dim(self) -> int:
        return int(self.dims.max()) if len(self) else -1

    def persistence(self) -> np.ndarray:
        return self.deaths - self.births

    def count_infinite(self, dim: int) -> int:
        return int(np.sum((self.dims == dim) & np.isinf(self.deaths)))

    def betti(self) -> list[int]:
        """Essential-interval counts per dimension."""
        return [self.count_infinite(p) for p in range(self.max_dim() + 1)]

    def drop_zero(self) -> "Barcode":
        m = self.births < self.deaths
        return Barcode(self.dims[m], self.births[m], self.deaths[m])


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def format_barcode(b: Barcode) -> str:
    return "".join(f"{d} {_fmt(x)} {_fmt(y)}\n" for d, x, y in b)


def parse_barcode(text: str) -> Barcode:
    items = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise PHError(f"expected 'dim birth death', got: {line}")
        try:
            items.append((int(toks[0]), float(toks[1]), float(toks[2])))
        except ValueError:
            raise PHError(f"malformed interval line: {line}") from None
    return Barcode.from_intervals(items)


def read_barcode(path: str | Path) -> Barcode:
    return parse_barcode(Path(path).read_text())


def write_barcode(b: Barcode, path: str | Path) -> None:
    Path(path).write_text(format_barcode(b))
