"""Persistence diagrams, bottleneck and Wasserstein distances, SVG figures.

Both distances use the usual finite reduction: every off-diagonal point may be
matched to its own projection on the diagonal, and diagonal points match each
other at no cost.  Essential points (infinite death) can only match essential
points, at a cost of the birth difference; unequal essential counts give an
infinite distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .barcode import Barcode, parse_barcode
from .errors import BadP, PHError


@dataclass
class PersistenceDiagram:
    births: np.ndarray
    deaths: np.ndarray
    dim: int = 0

    def __post_init__(self):
        self.births = np.asarray(self.births, dtype=np.float64).ravel()
        self.deaths = np.asarray(self.deaths, dtype=np.float64).ravel()
        if len(self.births) != len(self.deaths):
            raise PHError("births and deaths must have equal length")
        if np.any(~np.isfinite(self.births)) or np.any(self.births > self.deaths):
            raise PHError("diagram points need finite birth <= death")
        order = np.lexsort((self.deaths, self.births))
        self.births, self.deaths = self.births[order], self.deaths[order]

    @classmethod
    def from_points(cls, points, dim: int = 0) -> "PersistenceDiagram":
        pts = np.asarray(list(points), dtype=np.float64).reshape(-1, 2)
        return cls(pts[:, 0], pts[:, 1], dim)

    def __len__(self) -> int:
        return len(self.births)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.births.tolist(), self.deaths.tolist()))

    def finite(self) -> tuple[np.ndarray, np.ndarray]:
        m = np.isfinite(self.deaths)
        return self.births[m], self.deaths[m]

    def essential_births(self) -> np.ndarray:
        return np.sort(self.births[np.isinf(self.deaths)])


def from_barcode(b: Barcode, dim: int) -> PersistenceDiagram:
    m = b.dims == dim
    return PersistenceDiagram(b.births[m], b.deaths[m], dim)


def read_diagram(path, dim: int) -> PersistenceDiagram:
    return from_barcode(parse_barcode(Path(path).read_text()), dim)


def _as_diagram(x) -> PersistenceDiagram:
    return x if isinstance(x, PersistenceDiagram) else PersistenceDiagram.from_points(x)


def _canonical(X: PersistenceDiagram, Y: PersistenceDiagram):
    # a fixed argument order makes d(X, Y) and d(Y, X) bit-identical
    kx = (len(X), X.births.tolist(), X.deaths.tolist())
    ky = (len(Y), Y.births.tolist(), Y.deaths.tolist())
    return (Y, X) if ky < kx else (X, Y)


def _diag_factor(q: float) -> float:
    # L_q distance from (b, d) to its nearest diagonal point is (d - b) / 2 * 2^(1/q)
    return 0.5 if math.isinf(q) else 0.5 * 2.0 ** (1.0 / q)


def _pair_costs(bx, dx, by, dy, q: float) -> np.ndarray:
    db = np.abs(bx[:, None] - by[None, :])
    dd = np.abs(dx[:, None] - dy[None, :])
    if math.isinf(q):
        return np.maximum(db, dd)
    return (db ** q + dd ** q) ** (1.0 / q)


def _augmented(X: PersistenceDiagram, Y: PersistenceDiagram, q: float) -> np.ndarray:
    """Cost matrix on (X points + Y's diagonal slots) x (Y points + X's diagonal
    slots); ``inf`` marks a forbidden match."""
    bx, dx = X.finite()
    by, dy = Y.finite()
    m, k = len(bx), len(by)
    f = _diag_factor(q)
    C = np.full((m + k, k + m), np.inf)
    C[:m, :k] = _pair_costs(bx, dx, by, dy, q)
    C[np.arange(m), k + np.arange(m)] = (dx - bx) * f
    C[m + np.arange(k), np.arange(k)] = (dy - by) * f
    C[m:, k:] = 0.0
    return C


def _essential_gaps(X: PersistenceDiagram, Y: PersistenceDiagram) -> np.ndarray | None:
    ex, ey = X.essential_births(), Y.essential_births()
    if len(ex) != len(ey):
        return None
    return np.abs(ex - ey)


def _perfect_at(C: np.ndarray, t: float) -> bool:
    A = csr_matrix(C <= t)
    match = maximum_bipartite_matching(A, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck(X, Y, q: float = math.inf) -> float:
    """Exact bottleneck distance (L_inf ground metric by default).

    The optimum is one of the finitely many matching costs, so a binary search
    over the sorted candidates with a perfect-matching test finds it exactly.
    """
    X, Y = _canonical(_as_diagram(X), _as_diagram(Y))
    gaps = _essential_gaps(X, Y)
    if gaps is None:
        return math.inf
    ess = float(gaps.max()) if len(gaps) else 0.0
    C = _augmented(X, Y, q)
    if C.size == 0:
        return ess
    cand = np.unique(C[np.isfinite(C)])
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_at(C, cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(ess, float(cand[lo]))


def wasserstein(X, Y, p: float = 1.0, q: float = math.inf) -> float:
    """p-Wasserstein distance with an L_q ground metric; ``p = inf`` is the
    bottleneck distance."""
    if not p >= 1:
        raise BadP(f"p must be at least 1, got {p}")
    if math.isinf(p):
        return bottleneck(X, Y, q)
    X, Y = _canonical(_as_diagram(X), _as_diagram(Y))
    gaps = _essential_gaps(X, Y)
    if gaps is None:
        return math.inf
    terms = (gaps ** p).tolist()
    C = _augmented(X, Y, q)
    if C.size:
        P = C ** p
        rows, cols = linear_sum_assignment(P)
        terms += P[rows, cols].tolist()
    return math.fsum(terms) ** (1.0 / p)


# ------------------------------------------------------------------ figures

_W, _H, _PAD = 480.0, 320.0, 40.0


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _range(lo_vals, hi_vals) -> tuple[float, float]:
    vals = np.concatenate([np.asarray(lo_vals, float), np.asarray(hi_vals, float)])
    vals = vals[np.isfinite(vals)]
    if len(vals) == 0:
        return 0.0, 1.0
    lo, hi = float(vals.min()), float(vals.max())
    if hi == lo:
        hi = lo + 1.0
    return lo, hi + 0.1 * (hi - lo)


def _axes(title: str) -> list[str]:
    x0, y0, x1 = _PAD, _H - _PAD, _W - _PAD
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W:.0f}" height="{_H:.0f}" '
        f'viewBox="0 0 {_W:.0f} {_H:.0f}">',
        f"<title>{title}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line class="axis" x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y0)}" stroke="black"/>',
        f'<line class="axis" x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" y2="{_fmt(_PAD)}" stroke="black"/>',
    ]


def barcode_svg(b: Barcode) -> str:
    out = _axes("barcode")
    lo, hi = _range(b.births, b.deaths)
    sx = lambda v: _PAD + (v - lo) / (hi - lo) * (_W - 2 * _PAD)
    n = max(len(b), 1)
    step = (_H - 2 * _PAD) / (n + b.max_dim() + 2)
    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    row = 0
    for dim in range(b.max_dim() + 1):
        row += 1
        for birth, death in b.in_dim(dim):
            y = _PAD + row * step
            end = sx(death) if math.isfinite(death) else _W - _PAD
            c = colours[dim % len(colours)]
            out.append(f'<line class="bar" data-dim="{dim}" x1="{_fmt(sx(birth))}" y1="{_fmt(y)}" '
                       f'x2="{_fmt(end)}" y2="{_fmt(y)}" stroke="{c}" stroke-width="2"/>')
            if not math.isfinite(death):
                out.append(f'<polygon class="arrow" points="{_fmt(end)},{_fmt(y)} {_fmt(end - 8)},{_fmt(y - 4)} '
                           f'{_fmt(end - 8)},{_fmt(y + 4)}" fill="{c}"/>')
            row += 1
    out.append("</svg>")
    return "\n".join(out) + "\n"


def diagram_svg(D: PersistenceDiagram) -> str:
    out = _axes(f"persistence diagram, dimension {D.dim}")
    lo, hi = _range(D.births, D.deaths)
    span = _W - 2 * _PAD
    sx = lambda v: _PAD + (v - lo) / (hi - lo) * span
    sy = lambda v: _H - _PAD - (v - lo) / (hi - lo) * (_H - 2 * _PAD)
    out.append(f'<line class="diagonal" x1="{_fmt(sx(lo))}" y1="{_fmt(sy(lo))}" '
               f'x2="{_fmt(sx(hi))}" y2="{_fmt(sy(hi))}" stroke="grey" stroke-dasharray="4"/>')
    for b, d in D.points:
        y = sy(d) if math.isfinite(d) else _PAD
        cls = "point" if math.isfinite(d) else "point essential"
        out.append(f'<circle class="{cls}" cx="{_fmt(sx(b))}" cy="{_fmt(y)}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(obj, path) -> None:
    """Write a barcode (stacked segments, arrowheads on infinite bars) or a
    diagram (scatter above the diagonal) as SVG."""
    if isinstance(obj, Barcode):
        text = barcode_svg(obj)
    elif isinstance(obj, PersistenceDiagram):
        text = diagram_svg(obj)
    else:
        raise PHError("emit_svg expects a Barcode or a PersistenceDiagram")
    Path(path).write_text(text)
