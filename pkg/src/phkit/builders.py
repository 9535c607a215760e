"""Filtered complexes from metric data and weighted networks.

Filtration values use the *diameter* convention: a Vietoris-Rips simplex
enters at its largest pairwise distance, which is twice the radius parameter
of ``VR_eps = {sigma : d(x, y) <= 2 eps}``.  Cech values are twice the radius
of the minimal enclosing ball so that both live on one axis and
``Cech_t <= VR_t <= Cech_{sqrt(2) t}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Literal

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial.distance import pdist, squareform

from .complex import FilteredComplex
from .errors import (BadCount, BadNu, BadScale, Disconnected, EmptyGraph, EmptyLandmarks,
                     NeedsCoordinates, PHError)
from .meb import minimal_enclosing_ball
from .rng import SplitMix64

# boolean work arrays in clique expansion are chunked to about this many cells
_WORK_CELLS = 1 << 25


# ------------------------------------------------------------------ inputs

@dataclass
class MetricInput:
    """A finite metric space: a symmetric distance matrix, plus the Euclidean
    coordinates when the input was a point cloud."""

    dist: np.ndarray
    points: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise PHError("distance matrix must be square")
        if not np.all(np.isfinite(d)):
            raise PHError("distances must be finite")
        if np.any(np.diag(d) != 0):
            raise PHError("distance matrix needs a zero diagonal")
        if np.any(d < 0):
            raise PHError("distances must be non-negative")
        if np.any(np.abs(d - d.T) > 1e-12):
            raise PHError("distance matrix must be symmetric")
        self.dist = np.minimum(d, d.T)

    @classmethod
    def from_points(cls, points) -> "MetricInput":
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if not np.all(np.isfinite(pts)):
            raise PHError("coordinates must be finite")
        d = squareform(pdist(pts)) if len(pts) > 1 else np.zeros((len(pts), len(pts)))
        return cls(d, pts)

    @classmethod
    def from_distance(cls, dist) -> "MetricInput":
        return cls(np.asarray(dist, dtype=np.float64))

    @property
    def n(self) -> int:
        return self.dist.shape[0]


def as_metric(m) -> MetricInput:
    return m if isinstance(m, MetricInput) else MetricInput.from_points(m)


@dataclass
class WeightedGraph:
    n: int
    edges: list[tuple[int, int, float]]

    def __post_init__(self):
        seen = set()
        clean = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise PHError(f"self-loop at node {u}")
            if u > v:
                u, v = v, u
            if not (0 <= u and v < self.n):
                raise PHError(f"edge ({u}, {v}) outside node range")
            if not (w > 0 and math.isfinite(w)):
                raise PHError(f"edge ({u}, {v}) needs a positive finite weight")
            if (u, v) in seen:
                raise PHError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            clean.append((u, v, w))
        self.edges = clean

    def arrays(self):
        if not self.edges:
            return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0)
        u, v, w = zip(*self.edges)
        return np.array(u), np.array(v), np.array(w, dtype=np.float64)

    def degrees(self) -> np.ndarray:
        u, v, _ = self.arrays()
        return np.bincount(np.concatenate([u, v]), minlength=self.n)


@dataclass
class LandmarkSet:
    """Landmark indices into a witness set, with the sorted landmark distances
    of every witness cached for the m_nu lookups."""

    indices: np.ndarray
    sorted_dist: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        if len(idx) == 0:
            raise EmptyLandmarks("landmark set is empty")
        if len(np.unique(idx)) != len(idx):
            raise PHError("landmarks must be distinct")
        self.indices = idx

    def __len__(self) -> int:
        return len(self.indices)

    def attach(self, m: MetricInput) -> "LandmarkSet":
        if self.indices.max() >= m.n or self.indices.min() < 0:
            raise PHError("landmark index outside the point set")
        self.sorted_dist = np.sort(m.dist[:, self.indices], axis=1)
        return self

    def m_nu(self, m: MetricInput, nu: int) -> np.ndarray:
        """Distance of every witness to its nu-th closest landmark (m_0 = 0)."""
        if self.sorted_dist is None or self.sorted_dist.shape[0] != m.n:
            self.attach(m)
        if nu == 0:
            return np.zeros(m.n)
        return self.sorted_dist[:, nu - 1]


# ------------------------------------------------------------------ cliques

def _clique_complex(E: np.ndarray, max_dim: int, max_scale: float,
                    labels: np.ndarray | None = None,
                    vertex_values: np.ndarray | None = None,
                    cap: int | None = None) -> FilteredComplex:
    """Clique complex of the graph ``E <= max_scale`` (E symmetric, inf marks a
    non-edge); a simplex enters at its largest edge value.

    Cliques are grown one vertex at a time, appending only vertices larger
    than the current last vertex, so each clique is produced exactly once and
    in lexicographic order.
    """
    n = E.shape[0]
    labels = np.arange(n, dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
    vval = np.zeros(n) if vertex_values is None else np.asarray(vertex_values, dtype=np.float64)
    adj = (E <= max_scale) & np.isfinite(E)
    np.fill_diagonal(adj, False)
    levels_v = [np.arange(n, dtype=np.int64)[:, None]]
    levels_f = [vval]
    total = n
    cur_v, cur_f = levels_v[0], levels_f[0]
    ar = np.arange(n)
    for _ in range(max_dim):
        if len(cur_v) == 0:
            break
        chunk = max(1, _WORK_CELLS // max(n, 1))
        out_v, out_f = [], []
        for lo in range(0, len(cur_v), chunk):
            C = cur_v[lo:lo + chunk]
            F = cur_f[lo:lo + chunk]
            mask = ar[None, :] > C[:, -1:]
            for t in range(C.shape[1]):
                mask &= adj[C[:, t]]
            row, v = np.nonzero(mask)
            if len(row) == 0:
                continue
            newf = np.maximum(F[row], vval[v])
            for t in range(C.shape[1]):
                newf = np.maximum(newf, E[C[row, t], v])
            out_v.append(np.column_stack([C[row], v]))
            out_f.append(newf)
        if not out_v:
            break
        cur_v = np.concatenate(out_v)
        cur_f = np.concatenate(out_f)
        total += len(cur_v)
        if cap is not None and total > cap:
            from .errors import SizeCapExceeded
            raise SizeCapExceeded(f"complex exceeds the cap of {cap} simplices", total)
        levels_v.append(cur_v)
        levels_f.append(cur_f)
    width = len(levels_v)
    rows = np.full((total, width), -1, dtype=np.int64)
    vals = np.empty(total)
    at = 0
    for V, F in zip(levels_v, levels_f):
        rows[at:at + len(V), :V.shape[1]] = np.sort(labels[V], axis=1)
        vals[at:at + len(V)] = F
        at += len(V)
    del levels_v, levels_f, cur_v, cur_f
    return FilteredComplex(rows, vals)


def _check_dim_scale(max_dim: int, max_scale: float) -> None:
    if max_dim < 0:
        raise PHError("max_dim must be non-negative")
    if not max_scale > 0:
        raise BadScale(f"max_scale must be positive, got {max_scale}")


def build_rips(m, max_dim: int, max_scale: float = math.inf, cap: int | None = None) -> FilteredComplex:
    """Vietoris-Rips filtration: every clique of at most ``max_dim + 1``
    vertices with diameter ``<= max_scale``, entering at its diameter."""
    _check_dim_scale(max_dim, max_scale)
    m = as_metric(m)
    return _clique_complex(m.dist, max_dim, max_scale, cap=cap)


def build_cech(m, max_dim: int, max_scale: float = math.inf) -> FilteredComplex:
    """Cech filtration on a Euclidean point cloud; a simplex enters at twice
    the radius of the minimal enclosing ball of its vertices."""
    _check_dim_scale(max_dim, max_scale)
    if not isinstance(m, MetricInput):
        m = MetricInput.from_points(m)
    if m.points is None:
        raise NeedsCoordinates("the Cech complex needs point coordinates, not only distances")
    # the Cech value is at least the diameter, so VR at the same scale holds every candidate
    vr = _clique_complex(m.dist, max_dim, max_scale)
    value: dict[tuple[int, ...], float] = {}
    for k in np.argsort(vr.dims, kind="stable"):
        s = vr.simplex(int(k)).vertices
        if len(s) == 1:
            val = 0.0
        elif len(s) == 2:
            val = float(m.dist[s[0], s[1]])
        else:
            val = 2.0 * minimal_enclosing_ball(m.points[list(s)])[1]
            # guard against round-off breaking face monotonicity
            val = max([val] + [value[f] for f in combinations(s, len(s) - 1)])
        value[s] = val
    kept = [(s, v) for s, v in value.items() if v <= max_scale]
    return FilteredComplex.from_simplices(kept)


def cech_value(points) -> float:
    """Filtration value of one simplex in the Cech convention (2 x MEB radius)."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if len(pts) == 1:
        return 0.0
    return 2.0 * minimal_enclosing_ball(pts)[1]


# ------------------------------------------------------------------ witnesses

def _landmarks_for(m: MetricInput, L) -> LandmarkSet:
    if not isinstance(L, LandmarkSet):
        L = LandmarkSet(np.asarray(L))
    L.attach(m)
    sub = m.dist[np.ix_(L.indices, L.indices)]
    if len(L) > 1 and np.any(sub[~np.eye(len(L), dtype=bool)] == 0):
        raise PHError("landmark points must be pairwise distinct")
    return L


def weak_witness_values(m: MetricInput, L: LandmarkSet, max_dim: int) -> dict[tuple[int, ...], float]:
    """Smallest eps at which each landmark subset (up to ``max_dim + 1``
    vertices) has a weak eps-witness, before face-monotonisation.  Keys are
    tuples of positions within ``L.indices``."""
    W = m.dist[:, L.indices]
    nl = W.shape[1]
    nearest = np.argsort(W, axis=1, kind="stable")
    out: dict[tuple[int, ...], float] = {}
    for k in range(1, min(max_dim + 1, nl) + 1):
        near = nearest[:, :k + 1]
        combos_all = np.array(list(combinations(range(nl), k)), dtype=np.int64)
        per = max(1, _WORK_CELLS // max(1, W.shape[0] * (k + 1)))
        for lo in range(0, len(combos_all), per):
            combos = combos_all[lo:lo + per]
            far = W[:, combos].max(axis=2)  # (witness, combo)
            in_sig = (near[None, :, :, None] == combos[:, None, None, :]).any(axis=3)
            outside = ~in_sig
            has = outside.any(axis=2)
            first = np.argmax(outside, axis=2)
            b = np.take_along_axis(np.broadcast_to(near, (len(combos),) + near.shape),
                                   first[:, :, None], axis=2)[:, :, 0]
            closest_out = np.where(has, np.take_along_axis(W, b.T, axis=1).T, np.inf)
            eps = np.maximum(far.T - closest_out, 0.0).min(axis=1)
            for c, e in zip(combos.tolist(), eps.tolist()):
                out[tuple(c)] = e
    return out


def build_weak_witness(m, L, max_dim: int, max_scale: float = math.inf) -> FilteredComplex:
    """Weak witness filtration on the landmarks.  Vertex ids are the landmark
    indices into the witness set."""
    _check_dim_scale(max_dim, max_scale)
    m = as_metric(m)
    L = _landmarks_for(m, L)
    raw = weak_witness_values(m, L, max_dim)
    value: dict[tuple[int, ...], float] = {}
    for s in sorted(raw, key=len):
        v = raw[s]
        if len(s) > 1:
            v = max([v] + [value[f] for f in combinations(s, len(s) - 1)])
        value[s] = v
    lab = L.indices
    kept = [(tuple(sorted(int(lab[i]) for i in s)), v) for s, v in value.items() if v <= max_scale]
    return FilteredComplex.from_simplices(kept)


def witness_edge_values(m: MetricInput, L: LandmarkSet, nu: int) -> np.ndarray:
    """``E[a, b] = min_s max(0, max(d(a, s), d(b, s)) - m_nu(s))`` over all witnesses s."""
    W = m.dist[:, L.indices]
    mn = L.m_nu(m, nu)
    nl = W.shape[1]
    E = np.zeros((nl, nl))
    for a in range(nl):
        far = np.maximum(W[:, a:a + 1], W[:, a + 1:]) - mn[:, None]
        E[a, a + 1:] = np.maximum(far, 0.0).min(axis=0)
    return np.maximum(E, E.T)


def build_parametrized_witness(m, L, nu: int, max_dim: int, max_scale: float = math.inf) -> FilteredComplex:
    """Parametrized witness filtration W_nu (a clique complex).  ``nu = 2``
    gives the lazy witness complex."""
    _check_dim_scale(max_dim, max_scale)
    if nu < 0:
        raise BadNu("nu must be non-negative")
    m = as_metric(m)
    L = _landmarks_for(m, L)
    if nu > len(L):
        raise BadNu(f"m_{nu} needs at least {nu} landmarks, only {len(L)} given")
    E = witness_edge_values(m, L, nu)
    return _clique_complex(E, max_dim, max_scale, labels=L.indices)


def build_lazy_witness(m, L, max_dim: int, max_scale: float = math.inf) -> FilteredComplex:
    return build_parametrized_witness(m, L, 2, max_dim, max_scale)


def maxmin_landmarks(m, count: int, seed: int = 0) -> LandmarkSet:
    """Greedy maxmin selection; the first landmark is drawn from the seeded
    stream, each next one maximises the distance to those already chosen
    (ties go to the smallest index)."""
    m = as_metric(m)
    if not 1 <= count <= m.n:
        raise BadCount(f"landmark count must lie in [1, {m.n}], got {count}")
    first = SplitMix64(seed).randbelow(m.n)
    chosen = [first]
    gap = m.dist[first].copy()
    for _ in range(count - 1):
        gap[chosen] = -1.0
        nxt = int(np.argmax(gap))
        chosen.append(nxt)
        gap = np.minimum(gap, m.dist[nxt])
    return LandmarkSet(np.array(chosen)).attach(m)


# ------------------------------------------------------------------ networks

def build_wrcf(g: WeightedGraph, max_dim: int) -> FilteredComplex:
    """Weight rank clique filtration.

    Distinct weights ``w_1 > w_2 > ...`` define steps; step t keeps the edges
    of weight ``>= w_t`` and takes their clique complex.  Simplices carry the
    step index at which they appear; nodes are present from step 0.
    """
    if max_dim < 0:
        raise PHError("max_dim must be non-negative")
    if g.n == 0 or not g.edges:
        raise EmptyGraph("the weighted graph has no edges")
    u, v, w = g.arrays()
    distinct = np.unique(w)[::-1]
    step = np.searchsorted(-distinct, -w) + 1.0
    E = np.full((g.n, g.n), np.inf)
    E[u, v] = step
    E[v, u] = step
    return _clique_complex(E, max_dim, math.inf)


def graph_to_metric(g: WeightedGraph, mode: Literal["inverse", "raw", "one_minus"] = "inverse") -> MetricInput:
    """All-pairs shortest-path distances with edge lengths 1/w, w or 1-w."""
    if g.n == 0:
        raise EmptyGraph("the graph has no nodes")
    u, v, w = g.arrays()
    if mode == "inverse":
        length = 1.0 / w
    elif mode == "raw":
        length = w
    elif mode == "one_minus":
        length = 1.0 - w
        if np.any(length < 0):
            raise PHError("one_minus mode needs weights in (0, 1]")
    else:
        raise PHError(f"unknown mode {mode!r}")
    # explicit zeros stay stored, so zero-length edges still count as edges
    A = csr_matrix((length, (u, v)), shape=(g.n, g.n))
    ncomp, comp = connected_components(A, directed=False)
    if ncomp > 1:
        stray = np.flatnonzero(comp != comp[0])
        other = np.flatnonzero(comp == comp[stray[0]]).tolist()
        raise Disconnected(f"graph has {ncomp} components; nodes {other} are cut off from node 0",
                           component=other)
    D = dijkstra(A, directed=False)
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    return MetricInput(D)


# ------------------------------------------------------------------ files

def _rows(path_or_text) -> list[list[float]]:
    text = Path(path_or_text).read_text() if isinstance(path_or_text, Path) else path_or_text
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append([float(t) for t in line.split()])
    return out


def read_points(path) -> MetricInput:
    rows = _rows(Path(path))
    if not rows or len({len(r) for r in rows}) != 1:
        raise PHError("point cloud rows must be non-empty and of equal length")
    return MetricInput.from_points(np.array(rows))


def read_distance_matrix(path) -> MetricInput:
    rows = _rows(Path(path))
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise PHError("distance matrix file must hold n lines of n values")
    return MetricInput.from_distance(np.array(rows))


def read_edge_list(path, n: int | None = None) -> WeightedGraph:
    rows = _rows(Path(path))
    if any(len(r) != 3 for r in rows):
        raise PHError("edge-list lines must be 'u v w'")
    edges = [(int(a), int(b), w) for a, b, w in rows]
    if n is None:
        n = 1 + max((max(a, b) for a, b, _ in edges), default=-1)
    return WeightedGraph(n, edges)


def write_points(points, path) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    Path(path).write_text("".join(" ".join(repr(float(x)) for x in row) + "\n" for row in pts))


def write_edge_list(g: WeightedGraph, path) -> None:
    Path(path).write_text("".join(f"{u} {v} {w!r}\n" for u, v, w in g.edges))
