"""K-Means and SOM baselines over binary pattern matrices.

Both work on the raw 0/1 vectors with Euclidean distance and report real-valued
prototypes through the common :class:`Clustering` type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import Clustering
from .features import PatternMatrix


@dataclass(frozen=True)
class KMeansParams:
    k: int
    max_iters: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass(frozen=True)
class SomParams:
    grid_w: int = 2
    grid_h: int = 2
    iters: int | None = None  # None -> 10 * number of patterns
    initial_lr: float = 0.5
    initial_radius: float | None = None  # None -> max(grid_w, grid_h) / 2, at least 1
    seed: int = 0

    def __post_init__(self):
        if self.grid_w < 1 or self.grid_h < 1:
            raise ValueError("grid dimensions must be positive")
        if self.iters is not None and self.iters < 0:
            raise ValueError("iters must be >= 0")
        if not 0.0 < self.initial_lr <= 1.0:
            raise ValueError("initial_lr must lie in (0, 1]")
        if self.initial_radius is not None and self.initial_radius <= 0:
            raise ValueError("initial_radius must be positive")


def _sq_dists(X, C):
    # |x|^2 - 2 x.c + |c|^2, clipped against cancellation below zero
    d = (X * X).sum(1)[:, None] - 2.0 * X @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def kmeans_train(matrix: PatternMatrix, params: KMeansParams, history: list | None = None) -> Clustering:
    """Lloyd's algorithm seeded with ``k`` distinct random patterns.

    An emptied cluster is re-seeded at the point farthest from its current
    centroid. If ``history`` is given, the objective (sum of squared distances
    to the assigned centroid) is appended after every assignment step.
    """
    X = matrix.bits.astype(np.float64)
    N = len(X)
    k = params.k
    if k > N:
        raise ValueError(f"k={k} exceeds the number of patterns ({N})")
    rng = np.random.default_rng(params.seed)
    C = X[rng.choice(N, size=k, replace=False)].copy()

    labels = None
    for it in range(params.max_iters):
        D = _sq_dists(X, C)
        new = D.argmin(axis=1)
        if history is not None:
            history.append(float(D[np.arange(N), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(C)
        np.add.at(sums, labels, X)
        filled = counts > 0
        C[filled] = sums[filled] / counts[filled, None]
        if not filled.all():
            own = ((X - C[labels]) ** 2).sum(1)
            for j in np.flatnonzero(~filled):
                far = int(own.argmax())
                if own[far] <= 0.0:
                    break
                C[j] = X[far]
                own[far] = 0.0
    return Clustering.from_labels(
        matrix.hosts, labels, C, "kmeans", {"k": k, "seed": params.seed, "iters": it + 1}
    )


def som_grid(grid_w: int, grid_h: int) -> np.ndarray:
    """(grid_w*grid_h, 2) node coordinates, row-major."""
    yy, xx = np.mgrid[0:grid_h, 0:grid_w]
    return np.column_stack([xx.ravel(), yy.ravel()]).astype(np.float64)


def som_train(matrix: PatternMatrix, params: SomParams) -> Clustering:
    """Online Kohonen map on a rectangular grid.

    Each step draws a random pattern, finds its best-matching unit and pulls
    every node towards the pattern by ``lr(t) * exp(-g^2 / (2 r(t)^2))`` where
    ``g`` is the grid distance to the BMU. ``lr`` decays exponentially from
    ``initial_lr`` to 1% of it; ``r`` decays from ``initial_radius`` to 1.
    """
    X = matrix.bits.astype(np.float64)
    N, n = X.shape
    rng = np.random.default_rng(params.seed)
    grid = som_grid(params.grid_w, params.grid_h)
    W = rng.random((len(grid), n))
    iters = 10 * N if params.iters is None else params.iters
    r0 = params.initial_radius or max(1.0, max(params.grid_w, params.grid_h) / 2.0)
    lr0 = params.initial_lr

    picks = rng.integers(N, size=iters)
    for t, idx in enumerate(picks):
        frac = t / iters
        lr = lr0 * 0.01 ** frac
        radius = r0 * (1.0 / r0) ** frac
        x = X[idx]
        bmu = int(((W - x) ** 2).sum(1).argmin())
        g2 = ((grid - grid[bmu]) ** 2).sum(1)
        h = np.exp(-g2 / (2.0 * radius * radius))
        W += (lr * h)[:, None] * (x - W)

    labels = _sq_dists(X, W).argmin(axis=1)
    return Clustering.from_labels(
        matrix.hosts, labels, W, "som",
        {"grid": f"{params.grid_w}x{params.grid_h}", "iters": iters, "seed": params.seed},
    )
