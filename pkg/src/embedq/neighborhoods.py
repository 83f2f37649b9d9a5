"""Exact k-nearest-neighbour search, neighbourhood matrices and rank tables.

Everything here is brute force on purpose: the datasets of interest have a
few thousand points, and exact distances with a fixed tie-break (smaller
point index first) make every downstream metric bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True, eq=False)
class NeighborhoodIndex:
    """Per-point lists of the k nearest neighbours, self excluded.

    ``neighbors[i]`` holds k point indices in ascending distance from point
    i, ties broken by the smaller index.
    """

    k: int
    neighbors: np.ndarray


def _validate_points(points) -> np.ndarray:
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError(f"expected an (n, d) point matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("point matrix contains non-finite entries")
    return x


def _sq_distances(x: np.ndarray) -> np.ndarray:
    # cdist sums per-pair differences directly, so duplicates give exact
    # zeros and the matrix is deterministic.
    return cdist(x, x, "sqeuclidean")


def knn_index(points, k: int) -> NeighborhoodIndex:
    """Exact Euclidean k-NN over all points, self excluded."""
    x = _validate_points(points)
    n = x.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    d2 = _sq_distances(x)
    np.fill_diagonal(d2, np.inf)
    order = np.argsort(d2, axis=1, kind="stable")
    return NeighborhoodIndex(k=k, neighbors=np.ascontiguousarray(order[:, :k]))


def neighborhood_matrix(points, index: NeighborhoodIndex, i: int) -> np.ndarray:
    """The (d, k) matrix whose columns are the neighbours of point i."""
    x = _validate_points(points)
    if not 0 <= i < x.shape[0]:
        raise ValueError(f"point index {i} out of range [0, {x.shape[0]})")
    return np.ascontiguousarray(x[index.neighbors[i]].T)


def center_columns(m) -> np.ndarray:
    """Subtract the column mean: ``M - (1/k) M 1 1^T``.

    Every row of the result sums to zero; constant columns are annihilated.
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[1] < 1:
        raise ValueError(f"expected a (d, k) matrix, got shape {a.shape}")
    return a - a.mean(axis=1, keepdims=True)


def rank_table(points) -> np.ndarray:
    """Pairwise distance ranks: ``ranks[i, j]`` is the 1-based position of
    j in the ascending distance ordering from i, self excluded.

    Each row is a permutation of 1..n-1; the diagonal is left at 0.  Ties
    are broken by the smaller point index, matching :func:`knn_index`.
    """
    x = _validate_points(points)
    n = x.shape[0]
    if n < 2:
        raise ValueError("rank table needs at least two points")
    d2 = _sq_distances(x)
    np.fill_diagonal(d2, np.inf)
    order = np.argsort(d2, axis=1, kind="stable")
    ranks = np.zeros((n, n), dtype=np.int64)
    rows = np.arange(n)[:, None]
    ranks[rows, order[:, : n - 1]] = np.arange(1, n)[None, :]
    return ranks
