"""Minimal enclosing balls by Welzl's algorithm, in any ambient dimension."""

from __future__ import annotations

import numpy as np


def circumsphere(support: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest sphere through all rows of ``support``; its centre lies in
    their affine hull.  Affinely dependent rows are handled by least squares."""
    p0 = support[0]
    if len(support) == 1:
        return p0.copy(), 0.0
    A = support[1:] - p0
    G = A @ A.T
    lam = np.linalg.lstsq(G, 0.5 * np.diag(G), rcond=None)[0]
    center = p0 + lam @ A
    radius = float(np.sqrt(np.max(((support - center) ** 2).sum(axis=1))))
    return center, radius


def _inside(p, center, radius, tol):
    return center is not None and float(np.sqrt(((p - center) ** 2).sum())) <= radius + tol


def _ball(points, n, support, ambient, tol):
    if support:
        center, radius = circumsphere(points[support])
    else:
        center, radius = None, -np.inf
    if len(support) == ambient + 1:
        return center, radius
    for i in range(n):
        if not _inside(points[i], center, radius, tol):
            center, radius = _ball(points, i, support + [i], ambient, tol)
    return center, radius


def minimal_enclosing_ball(points) -> tuple[np.ndarray, float]:
    """Centre and radius of the smallest closed ball containing ``points``.

    >>> c, r = minimal_enclosing_ball([[0, 0], [2, 0]])
    >>> c.tolist(), r
    ([1.0, 0.0], 1.0)
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[0] == 0:
        raise ValueError("need at least one point")
    scale = float(np.abs(pts).max()) or 1.0
    return _ball(pts, len(pts), [], pts.shape[1], 1e-12 * scale)
