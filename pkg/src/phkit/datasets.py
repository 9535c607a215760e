"""Seeded synthetic data: Klein bottle samples, uniform clouds, Vicsek flocks,
and hierarchical (fractal) networks.

Every generator draws from one :class:`~phkit.rng.SplitMix64` stream in a
documented order, so a seed determines the output bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .builders import WeightedGraph
from .errors import BadCount, BadFrame, BadParams
from .rng import SplitMix64

TWO_PI = 2.0 * math.pi


# ------------------------------------------------------------------ Klein bottle

def klein_point(u, v, a: float = 2.0) -> np.ndarray:
    """Figure-8 immersion of the Klein bottle in R^3."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    r = a + np.cos(u / 2) * np.sin(v) - np.sin(u / 2) * np.sin(2 * v)
    return np.stack([r * np.cos(u), r * np.sin(u),
                     np.sin(u / 2) * np.sin(v) + np.cos(u / 2) * np.sin(2 * v)], axis=-1)


def generate_klein(n: int, mode: Literal["grid", "random"] = "grid", seed: int = 0,
                   a: float = 2.0, return_params: bool = False):
    """``n`` points on the figure-8 Klein bottle.

    ``grid`` samples ``(u, v)`` on a ``sqrt(n) x sqrt(n)`` lattice over
    ``[0, 2 pi)^2`` (u varies slowest) and ignores the seed; ``random`` draws
    ``u`` then ``v`` for each point from the stream.
    """
    if n < 1:
        raise BadCount("n must be positive")
    if mode == "grid":
        s = math.isqrt(n)
        if s * s != n:
            raise BadCount(f"grid mode needs a perfect square, got {n}")
        t = TWO_PI * np.arange(s) / s
        u, v = (g.ravel() for g in np.meshgrid(t, t, indexing="ij"))
    elif mode == "random":
        uv = SplitMix64(seed).random(2 * n).reshape(n, 2) * TWO_PI
        u, v = uv[:, 0], uv[:, 1]
    else:
        raise BadParams(f"unknown sampling mode {mode!r}")
    pts = klein_point(u, v, a)
    return (pts, np.column_stack([u, v])) if return_params else pts


# ------------------------------------------------------------------ uniform cube

def generate_uniform(N: int, d: int, seed: int = 0) -> np.ndarray:
    """``N`` points uniform in ``[0, 1)^d``, drawn row by row."""
    if N < 1 or d < 1:
        raise BadCount("N and d must be positive")
    return SplitMix64(seed).random(N * d).reshape(N, d)


# ------------------------------------------------------------------ Vicsek

@dataclass
class VicsekParams:
    l: float = 10.0
    v0: float = 0.03
    N: int = 300
    eta: float = 0.1
    T: int = 100
    r: float = 1.0
    init: Literal["random", "constant"] = "random"
    theta0: float = 0.0

    def check(self) -> None:
        if not (self.l > 0 and self.v0 > 0 and self.N > 0 and self.r > 0 and self.T >= 0):
            raise BadParams("l, v0, N and r must be positive and T non-negative")
        if not self.eta >= 0:
            raise BadParams("eta must be non-negative")
        if self.init not in ("random", "constant"):
            raise BadParams(f"unknown init mode {self.init!r}")


def _vicsek_step(pos, theta, p: VicsekParams, noise):
    diff = pos[:, None, :] - pos[None, :, :]
    diff -= p.l * np.round(diff / p.l)
    near = (diff ** 2).sum(axis=2) <= p.r ** 2
    s = near @ np.sin(theta)
    c = near @ np.cos(theta)
    theta = np.arctan2(s, c) + noise
    pos = pos + p.v0 * np.column_stack([np.cos(theta), np.sin(theta)])
    return np.mod(pos, p.l), theta


def generate_vicsek(p: VicsekParams, seed: int = 0, frames: Sequence[int] | None = None) -> list[np.ndarray]:
    """Snapshots ``(x, y, theta)`` of a Vicsek flock at the requested steps
    (step 0 is the initial state).

    Draw order: N positions (x then y per particle), N angles when ``init`` is
    random, then N noise values per step.
    """
    p.check()
    frames = [p.T] if frames is None else [int(f) for f in frames]
    if any(f < 0 or f > p.T for f in frames):
        raise BadFrame(f"frame indices must lie in [0, {p.T}]")
    rng = SplitMix64(seed)
    pos = rng.random(2 * p.N).reshape(p.N, 2) * p.l
    if p.init == "random":
        theta = rng.uniform(-math.pi, math.pi, p.N)
    else:
        theta = np.full(p.N, float(p.theta0))
    wanted = set(frames)
    snaps = {}
    last = max(frames, default=0)
    for t in range(last + 1):
        if t in wanted:
            snaps[t] = np.column_stack([pos, theta])
        if t == last:
            break
        noise = rng.uniform(-p.eta / 2, p.eta / 2, p.N)
        pos, theta = _vicsek_step(pos, theta, p, noise)
    return [snaps[f].copy() for f in frames]


# ------------------------------------------------------------------ fractal networks

@dataclass
class FractalParams:
    b: int = 5
    n: int = 9
    k: int = 2
    weighting: Literal["random", "linear", "unit"] = "random"

    def check(self) -> None:
        if min(self.b, self.n, self.k) < 1 or self.n < self.b:
            raise BadParams("need positive b, n, k with n >= b")
        if self.k < 2:
            raise BadParams("k must be at least 2")
        if self.weighting not in ("random", "linear", "unit"):
            raise BadParams(f"unknown weighting {self.weighting!r}")


def inter_edge_count(b: int, j: int, k: int) -> int:
    """Edges joining the two copies at doubling step j, rounded half up and
    kept at least 1 so the network stays connected."""
    exact = 4.0 ** (b + j - 1) / float(k) ** j
    return max(1, int(math.floor(exact + 0.5)))


def generate_fractal(p: FractalParams, seed: int = 0) -> WeightedGraph:
    """Hierarchical network doubled from ``2^b`` to ``2^n`` nodes.

    Each step copies the current network and joins the copies by edges drawn
    without replacement from all cross pairs, with density ``k^-j``.  Weights
    (read as distances) are drawn last, in sorted edge order.
    """
    p.check()
    rng = SplitMix64(seed)
    size = 2 ** p.b
    iu, iv = np.triu_indices(size, 1)
    u, v = iu.astype(np.int64), iv.astype(np.int64)
    for j in range(1, p.n - p.b + 1):
        pick = rng.sample_without_replacement(size * size, inter_edge_count(p.b, j, p.k))
        cu, cv = pick // size, size + pick % size
        u = np.concatenate([u, u + size, cu])
        v = np.concatenate([v, v + size, cv])
        size *= 2
    order = np.lexsort((v, u))
    u, v = u[order], v[order]
    m = len(u)
    if p.weighting == "unit":
        w = np.ones(m)
    else:
        w = 1.0 - rng.random(m)  # uniform on (0, 1]
        if p.weighting == "linear":
            deg = np.bincount(np.concatenate([u, v]), minlength=size)
            w = deg[u] * deg[v] * w
    return WeightedGraph(size, list(zip(u.tolist(), v.tolist(), w.tolist())))
