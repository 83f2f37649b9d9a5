"""Dimensionality-reduction methods with deterministic outputs.

PCA, kernel PCA with a quadratic kernel, LLE (Roweis & Saul 2000), Hessian
eigenmaps (Donoho & Grimes 2003), Isomap (Tenenbaum et al. 2000) and an
optional variant of LLE whose neighbourhoods come from a symmetrised
KL divergence between per-point coordinate distributions.

Eigenvector signs are fixed by making the largest-magnitude entry of each
output direction positive, so repeated runs produce identical embeddings.
Dense symmetric eigensolvers are used throughout; the intended scale is a
few thousand points.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .neighborhoods import knn_index

REDUCER_METHODS = ("pca", "kpca2", "lle", "hlle", "isomap", "info-lle", "identity")


class DisconnectedGraphError(RuntimeError):
    """The symmetrised k-NN graph splits into several components."""

    def __init__(self, component_sizes: list[int]):
        self.component_sizes = component_sizes
        sizes = ", ".join(str(s) for s in component_sizes)
        super().__init__(
            f"neighbourhood graph is disconnected ({len(component_sizes)} components of sizes {sizes}); "
            "increase k or remove isolated points"
        )


@dataclass(frozen=True)
class ReducerSpec:
    """Configuration of one reduction method.

    ``k`` may be left unset for methods that ignore it (pca, kpca2) or to
    let the harness substitute its sweep upper bound.
    """

    method: str
    target_dim: int = 2
    k: int | None = None
    regularization: float = 1e-3

    def __post_init__(self) -> None:
        if self.method not in REDUCER_METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {REDUCER_METHODS}")
        if self.target_dim < 1:
            raise ValueError(f"target_dim must be positive, got {self.target_dim}")
        if self.regularization < 0:
            raise ValueError(f"regularization must be nonnegative, got {self.regularization}")


def _validate(X) -> np.ndarray:
    x = np.asarray(X, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError(f"expected an (n, d) matrix with n >= 2, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("data matrix contains non-finite entries")
    return x


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # Flip each column so its largest-magnitude entry is positive.
    v = np.array(vectors, copy=True)
    if v.size == 0:
        return v
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def pca(X, d: int) -> np.ndarray:
    """Projection onto the top-d principal directions of the centred data.

    When d exceeds the data rank the trailing coordinates carry (numerically)
    zero variance and a warning is issued.
    """
    x = _validate(X)
    n, dim = x.shape
    if not 1 <= d <= dim:
        raise ValueError(f"d must be in [1, {dim}], got {d}")
    xc = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(xc, full_matrices=False)
    rank = int(np.sum(s > s[0] * 1e-12)) if s.size and s[0] > 0 else 0
    if d > rank:
        warnings.warn(f"requested {d} components but the data rank is {rank}; trailing coordinates have zero variance")
    take = min(d, s.size)
    components = _fix_signs(vt[:take].T).T
    out = xc @ components.T
    if take < d:
        out = np.hstack([out, np.zeros((n, d - take))])
    return out


def kpca(X, d: int) -> np.ndarray:
    """Kernel PCA with the quadratic kernel ``k(x, y) = (x.y + 1)^2``.

    The Gram matrix is double-centred and the embedding columns are the
    top-d eigenvectors scaled to the usual feature-space projections
    ``sqrt(lambda) * u``.  Non-positive eigenvalues among the top d are
    dropped (their coordinates are zero) with a warning.
    """
    x = _validate(X)
    n = x.shape[0]
    if not 1 <= d <= n:
        raise ValueError(f"d must be in [1, {n}], got {d}")
    g = (x @ x.T + 1.0) ** 2
    row = g.mean(axis=0, keepdims=True)
    gc = g - row - row.T + g.mean()
    gc = (gc + gc.T) / 2.0
    evals, evecs = np.linalg.eigh(gc)
    evals = evals[::-1][:d]
    evecs = evecs[:, ::-1][:, :d]
    floor = max(evals[0], 0.0) * 1e-12
    pos = evals > floor
    if not np.all(pos):
        warnings.warn(f"{int((~pos).sum())} of the top {d} kernel eigenvalues are not positive; those coordinates are dropped")
    out = np.zeros((n, d))
    if np.any(pos):
        out[:, pos] = _fix_signs(evecs[:, pos]) * np.sqrt(evals[pos])
    return out


def _reconstruction_weights(x: np.ndarray, nbrs: np.ndarray, regularization: float, d: int) -> np.ndarray:
    n, k = nbrs.shape
    w = np.empty((n, k))
    ones = np.ones(k)
    for i in range(n):
        z = x[nbrs[i]] - x[i]
        c = z @ z.T
        if k > d:
            trace = float(np.trace(c))
            c = c + np.eye(k) * (regularization * trace / k if trace > 0 else regularization)
        try:
            sol = np.linalg.solve(c, ones)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(c, ones, rcond=None)[0]
        total = sol.sum()
        w[i] = sol / total if total != 0 else ones / k
    return w


def lle(X, d: int, k: int, regularization: float = 1e-3) -> np.ndarray:
    """Locally linear embedding.

    Per-point weights reconstruct each point from its k neighbours under a
    sum-to-one constraint (local Gram system, diagonal-regularised by
    ``regularization * trace / k``); the embedding is the bottom of the
    spectrum of ``(I - W)^T (I - W)`` with the constant eigenvector
    discarded, scaled to unit covariance.
    """
    x = _validate(X)
    n = x.shape[0]
    if k < d + 1:
        raise ValueError(f"lle needs k >= d + 1 = {d + 1}, got {k}")
    if k >= n:
        raise ValueError(f"k must be smaller than the number of points {n}, got {k}")
    nbrs = knn_index(x, k).neighbors
    w = _reconstruction_weights(x, nbrs, regularization, d)
    iw = np.eye(n)
    for i in range(n):
        iw[i, nbrs[i]] -= w[i]
    m = iw.T @ iw
    _, evecs = np.linalg.eigh(m)
    return _fix_signs(evecs[:, 1 : d + 1]) * math.sqrt(n)


def _hessian_alignment(x: np.ndarray, d: int, k: int, hessian_tol: float) -> np.ndarray:
    n = x.shape[0]
    dp = d * (d + 1) // 2
    nbrs = knn_index(x, k).neighbors
    m = np.zeros((n, n))
    yi = np.empty((k, 1 + d + dp))
    yi[:, 0] = 1.0
    for i in range(n):
        gi = x[nbrs[i]]
        gi = gi - gi.mean(axis=0)
        u = np.linalg.svd(gi, full_matrices=False)[0]
        yi[:, 1 : 1 + d] = u[:, :d]
        col = 1 + d
        for a in range(d):
            yi[:, col : col + d - a] = u[:, a : a + 1] * u[:, a:d]
            col += d - a
        q, _ = np.linalg.qr(yi)
        w = q[:, 1 + d :]
        sums = w.sum(axis=0)
        sums[np.abs(sums) < hessian_tol] = 1.0
        w = w / sums
        m[np.ix_(nbrs[i], nbrs[i])] += w @ w.T
    return m


def hlle(X, d: int, k: int, hessian_tol: float = 1e-4, null_space_tol: float = 1e-3) -> np.ndarray:
    """Hessian eigenmaps.

    Estimates local tangent coordinates by SVD of each centred
    neighbourhood, builds the discrete Hessian functional per neighbourhood
    and embeds via the null space of the assembled alignment matrix.
    Needs ``k >= 1 + d + d(d+1)/2`` to fit the quadratic form.

    ``hessian_tol`` guards the normalisation of near-zero Hessian columns;
    ``null_space_tol`` is the relative energy (against the largest
    alignment eigenvalue) above which the supposed null space is reported
    as suspect.  Clean d-manifolds land around 1e-6..1e-4, non-manifold
    data an order of magnitude above the default.
    """
    x = _validate(X)
    n = x.shape[0]
    k_min = 1 + d + d * (d + 1) // 2
    if k < k_min:
        raise ValueError(f"hlle needs k >= 1 + d + d(d+1)/2 = {k_min} for target_dim {d}, got {k}")
    if k >= n:
        raise ValueError(f"k must be smaller than the number of points {n}, got {k}")
    m = _hessian_alignment(x, d, k, hessian_tol)
    evals, evecs = np.linalg.eigh(m)
    if evals[d] > null_space_tol * abs(evals[-1]):
        warnings.warn("hlle null space carries significant energy; the manifold assumption may be violated")
    return _fix_signs(evecs[:, 1 : d + 1]) * math.sqrt(n)


def geodesic_distances(X, k: int) -> np.ndarray:
    """All-pairs shortest-path distances over the symmetrised k-NN graph
    with Euclidean edge weights (Dijkstra from every source).

    Raises :class:`DisconnectedGraphError` (listing component sizes) when
    the graph is not connected.
    """
    x = _validate(X)
    n = x.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    nbrs = knn_index(x, k).neighbors
    rows = np.repeat(np.arange(n), k)
    cols = nbrs.ravel()
    vals = np.sqrt(((x[rows] - x[cols]) ** 2).sum(axis=1))
    # shortest_path ignores stored zeros, so coincident points keep a
    # vanishingly small positive edge instead.
    vals = np.maximum(vals, 1e-300)
    graph = csr_matrix((vals, (rows, cols)), shape=(n, n))
    graph = graph.maximum(graph.T)

    n_components, labels = connected_components(graph, directed=False)
    if n_components > 1:
        sizes = sorted(np.bincount(labels).tolist(), reverse=True)
        raise DisconnectedGraphError(sizes)
    return shortest_path(graph, method="D", directed=False)


def isomap(X, d: int, k: int) -> np.ndarray:
    """Isomap: geodesic distances on the symmetrised k-NN graph followed by
    classical MDS."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    return classical_mds(geodesic_distances(X, k), d)


def classical_mds(distances, d: int) -> np.ndarray:
    """Classical (Torgerson) MDS of a symmetric distance matrix.

    Coordinates come from the top-d eigenpairs of the double-centred
    squared-distance matrix; directions with non-positive eigenvalues are
    zeroed with a warning.
    """
    dist = np.asarray(distances, dtype=float)
    n = dist.shape[0]
    if dist.ndim != 2 or dist.shape[1] != n:
        raise ValueError(f"distance matrix must be square, got shape {dist.shape}")
    sq = dist**2
    b = sq - sq.mean(axis=0, keepdims=True) - sq.mean(axis=1, keepdims=True) + sq.mean()
    b *= -0.5
    b = (b + b.T) / 2.0
    evals, evecs = np.linalg.eigh(b)
    evals = evals[::-1][:d]
    evecs = evecs[:, ::-1][:, :d]
    floor = max(evals[0], 0.0) * 1e-12
    pos = evals > floor
    if not np.all(pos):
        warnings.warn(f"{int((~pos).sum())} of the top {d} MDS eigenvalues are not positive; those coordinates are dropped")
    out = np.zeros((n, d))
    if np.any(pos):
        out[:, pos] = _fix_signs(evecs[:, pos]) * np.sqrt(evals[pos])
    return out


def coordinate_distributions(X, floor: float = 1e-12) -> np.ndarray:
    """Per-point discrete distributions over the coordinates of each row.

    Each row is summarised by a Gaussian kernel density over its own
    coordinate values (Silverman bandwidth), evaluated back at those
    coordinates, floored and normalised to sum to one.  Constant rows get
    the uniform distribution.
    """
    x = _validate(X)
    n, m = x.shape
    out = np.empty((n, m))
    for i in range(n):
        v = x[i]
        std = float(v.std(ddof=1)) if m > 1 else 0.0
        q75, q25 = np.percentile(v, [75, 25])
        iqr = float(q75 - q25)
        spread = min(std, iqr / 1.34) if iqr > 0 else std
        h = 0.9 * spread * m ** (-0.2)
        if h <= 0:
            out[i] = 1.0 / m
            continue
        diff = (v[:, None] - v[None, :]) / h
        dens = np.exp(-0.5 * diff**2).sum(axis=1) / (m * h * math.sqrt(2 * math.pi))
        dens = np.maximum(dens, floor)
        total = dens.sum()
        if not np.isfinite(total) or total <= 0:
            raise ValueError(f"row {i} admits no valid probability representation")
        out[i] = dens / total
    return out


def symmetric_kl(p, q) -> float:
    """Symmetrised KL divergence between two strictly positive discrete
    distributions over the same support."""
    pa = np.asarray(p, dtype=float)
    qa = np.asarray(q, dtype=float)
    lg = np.log(pa / qa)
    return float((pa * lg).sum() - (qa * lg).sum())


def info_lle(X, d: int, k: int) -> np.ndarray:
    """LLE-style embedding whose neighbourhoods and weights come from the
    symmetrised KL divergence between per-point coordinate distributions
    instead of Euclidean distances.

    Each point keeps its k smallest-divergence neighbours; the divergences
    are row-normalised to sum to one and the embedding is read off the
    bottom eigenvectors of ``(I - H)^T (I - H)``.
    """
    x = _validate(X)
    n = x.shape[0]
    if k < d + 1:
        raise ValueError(f"info-lle needs k >= d + 1 = {d + 1}, got {k}")
    if k >= n:
        raise ValueError(f"k must be smaller than the number of points {n}, got {k}")
    p = coordinate_distributions(x)
    logp = np.log(p)
    # h(i, j) = sum_t (p_i - p_j) * (log p_i - log p_j), evaluated row-wise
    div = np.empty((n, n))
    for i in range(n):
        diff = logp[i][None, :] - logp
        div[i] = (p[i][None, :] * diff).sum(axis=1) - (p * diff).sum(axis=1)
    np.fill_diagonal(div, np.inf)
    order = np.argsort(div, axis=1, kind="stable")[:, :k]
    h = np.zeros((n, n))
    for i in range(n):
        w = div[i, order[i]]
        total = w.sum()
        h[i, order[i]] = w / total if total > 0 else 1.0 / k
    ih = np.eye(n) - h
    m = ih.T @ ih
    _, evecs = np.linalg.eigh(m)
    return _fix_signs(evecs[:, 1 : d + 1]) * math.sqrt(n)


def make_embedding(X, spec: ReducerSpec, default_k: int | None = None) -> np.ndarray:
    """Run the reducer described by ``spec`` on an (n, d) data matrix.

    ``default_k`` fills in the neighbour count for specs that leave it
    unset (the harness passes its sweep upper bound).  The ``identity``
    method returns X unchanged and exists for pipeline validation.
    """
    x = _validate(X)
    if spec.method == "identity":
        return x.copy()
    d = spec.target_dim
    if d >= x.shape[1] and spec.method != "kpca2":
        raise ValueError(f"target_dim {d} must be smaller than the ambient dimension {x.shape[1]}")
    if spec.method == "pca":
        return pca(x, d)
    if spec.method == "kpca2":
        return kpca(x, d)
    k = spec.k if spec.k is not None else default_k
    if k is None:
        raise ValueError(f"method {spec.method!r} needs a neighbour count k")
    if spec.method == "lle":
        return lle(x, d, k, regularization=spec.regularization)
    if spec.method == "hlle":
        return hlle(x, d, k)
    if spec.method == "isomap":
        return isomap(x, d, k)
    if spec.method == "info-lle":
        return info_lle(x, d, k)
    raise ValueError(f"unknown method {spec.method!r}")
