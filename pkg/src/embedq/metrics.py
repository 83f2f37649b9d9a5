"""Embedding-quality metrics over shared high-dimensional neighbourhoods.

Three complementary views of a reduction ``X -> Y``:

* delta-entropy: the change in Shannon entropy of each neighbourhood's
  singular-value spectrum, i.e. how much informational spread the
  projection gains or (usually) loses;
* local Procrustes: the normalised residual after conformally aligning
  each reduced neighbourhood to its original (Goldberg & Ritov 2009);
* MRRE: mean relative rank errors computed from the co-ranking matrix
  (Lee & Verleysen 2009).

Neighbourhoods are always built in the high-dimensional space and carried
to the embedding by index, so all three metrics look at the same pairs of
point sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .neighborhoods import center_columns, knn_index, rank_table
from .spectral import DegenerateSpectrumError, singular_values, spectral_entropy


@dataclass(frozen=True)
class LocalMetricRecord:
    """Per-neighbourhood metric values for one point.

    ``delta_h`` is NaN when either centred neighbourhood has an all-zero
    spectrum (the ``degenerate`` flag is set); ``procrustes_local`` is NaN
    only when the original-space side is all zero.
    """

    point_index: int
    delta_h: float
    procrustes_local: float
    degenerate: bool


@dataclass(frozen=True, eq=False)
class MetricReport:
    """Local records plus global aggregates for one (X, Y, k) evaluation."""

    records: list[LocalMetricRecord]
    r_delta_h: float
    r_procrustes: float
    w_n: float
    w_v: float
    k: int
    n: int
    degenerate_count: int

    def globals_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "w_n": self.w_n,
            "w_v": self.w_v,
            "r_procrustes": self.r_procrustes,
            "r_delta_h": self.r_delta_h,
            "degenerate_count": self.degenerate_count,
        }


def delta_entropy(xc, yc) -> float:
    """Spectral-entropy change ``H(yc) - H(xc)`` between centred
    neighbourhood matrices (columns are neighbours).

    Zero means the projection kept the neighbourhood's spectral spread;
    negative values mean variance became more concentrated.  Returns NaN
    when either spectrum is all zero (coincident neighbours).
    """
    sx = singular_values(xc)
    sy = singular_values(yc)
    if sx.algebraic_rank == 0 or sy.algebraic_rank == 0:
        return math.nan
    return spectral_entropy(sy).entropy - spectral_entropy(sx).entropy


def mean_delta_entropy(values) -> tuple[float, int]:
    """Mean of the finite delta-entropy values and the count of excluded
    (degenerate) ones.  Raises if every value is degenerate."""
    vals = np.asarray(values, dtype=float)
    good = vals[np.isfinite(vals)]
    if good.size == 0:
        raise DegenerateSpectrumError("every neighbourhood is degenerate")
    return float(good.mean()), int(vals.size - good.size)


def procrustes_local(xc, yc) -> float:
    """Normalised conformal Procrustes residual between centred
    neighbourhoods ``xc`` (d, k) and ``yc`` (l, k).

    The optimal rotation is ``A = U V^T`` from the SVD of ``xc yc^T`` and
    the optimal positive scale is ``c = tr(S) / ||yc||_F^2``; the returned
    statistic is ``||xc - c A yc||_F^2 / ||xc||_F^2``.  When the row counts
    differ, the lower-dimensional matrix is zero-padded so A is square.

    Returns NaN when ``xc`` is all zero, and 1.0 when only ``yc`` is all
    zero (the aligned term vanishes entirely).
    """
    x = np.asarray(xc, dtype=float)
    y = np.asarray(yc, dtype=float)
    if x.ndim != 2 or y.ndim != 2 or x.shape[1] != y.shape[1]:
        raise ValueError(f"neighbourhoods must share k, got shapes {x.shape} and {y.shape}")
    nx2 = float((x * x).sum())
    if nx2 == 0.0:
        return math.nan
    ny2 = float((y * y).sum())
    if ny2 == 0.0:
        return 1.0
    if y.shape[0] < x.shape[0]:
        y = np.vstack([y, np.zeros((x.shape[0] - y.shape[0], y.shape[1]))])
    elif x.shape[0] < y.shape[0]:
        x = np.vstack([x, np.zeros((y.shape[0] - x.shape[0], x.shape[1]))])
    u, s, vt = np.linalg.svd(x @ y.T)
    a = u @ vt
    c = float(s.sum()) / ny2
    resid = x - c * (a @ y)
    return float((resid * resid).sum() / nx2)


def coranking_matrix(rank_high, rank_low) -> np.ndarray:
    """Joint histogram of pairwise distance ranks before and after
    reduction: ``q[k-1, l-1]`` counts the ordered pairs (i, j) with high
    rank k and low rank l.

    Every row and column sums to n; the total mass is n(n-1).
    """
    rh = np.asarray(rank_high)
    rl = np.asarray(rank_low)
    if rh.shape != rl.shape or rh.ndim != 2 or rh.shape[0] != rh.shape[1]:
        raise ValueError(f"rank tables must be square with equal shapes, got {rh.shape} and {rl.shape}")
    n = rh.shape[0]
    off = ~np.eye(n, dtype=bool)
    k = rh[off].astype(np.int64) - 1
    l = rl[off].astype(np.int64) - 1
    q = np.bincount(k * (n - 1) + l, minlength=(n - 1) * (n - 1))
    return q.reshape(n - 1, n - 1)


def mrre(q, K: int) -> tuple[float, float]:
    """Mean relative rank errors from a co-ranking matrix.

    ``w_n`` penalises intrusions (pairs whose rank in the embedding is at
    most K) with weight ``|k-l| / l``; ``w_v`` penalises extrusions (pairs
    whose rank in the original space is at most K) with weight
    ``|k-l| / k``.  Both are divided by the normalisation
    ``H_K = n * sum_{k<=K} |n - 2k + 1| / k`` and land in [0, 1].
    """
    qa = np.asarray(q)
    if qa.ndim != 2 or qa.shape[0] != qa.shape[1]:
        raise ValueError(f"co-ranking matrix must be square, got shape {qa.shape}")
    n = qa.shape[0] + 1
    if not 1 <= K <= n - 1:
        raise ValueError(f"K must be in [1, {n - 1}], got {K}")

    # Exact integer arithmetic with a common denominator: a single final
    # division then yields the correctly rounded value of the underlying
    # rational, independent of summation order.
    scale = math.lcm(*range(1, K + 1))
    norm = n * sum(abs(n - 2 * kk + 1) * (scale // kk) for kk in range(1, K + 1))

    rows, cols = np.nonzero(qa[:, :K])
    num_n = 0
    for a, b in zip(rows.tolist(), cols.tolist()):
        num_n += int(qa[a, b]) * abs(a - b) * (scale // (b + 1))

    rows, cols = np.nonzero(qa[:K, :])
    num_v = 0
    for a, b in zip(rows.tolist(), cols.tolist()):
        num_v += int(qa[a, b]) * abs(a - b) * (scale // (a + 1))

    return num_n / norm, num_v / norm


def local_records(X, Y, neighbors: np.ndarray) -> list[LocalMetricRecord]:
    """Delta-entropy and local Procrustes for every point, given a shared
    (n, k) table of high-dimensional neighbour indices."""
    x = np.asarray(X, dtype=float)
    y = np.asarray(Y, dtype=float)
    records = []
    for i in range(x.shape[0]):
        idx = neighbors[i]
        xc = center_columns(x[idx].T)
        yc = center_columns(y[idx].T)
        dh = delta_entropy(xc, yc)
        records.append(
            LocalMetricRecord(
                point_index=i,
                delta_h=dh,
                procrustes_local=procrustes_local(xc, yc),
                degenerate=not math.isfinite(dh),
            )
        )
    return records


def evaluate(X, Y, k: int) -> MetricReport:
    """Evaluate an embedding against its original at neighbourhood size k.

    Neighbour indices are computed once from X and reused for Y; MRRE is
    evaluated at K = k.  Degenerate neighbourhoods are flagged and left out
    of the global means (their count is reported); an all-degenerate input
    raises :class:`DegenerateSpectrumError`.
    """
    x = np.asarray(X, dtype=float)
    y = np.asarray(Y, dtype=float)
    if x.ndim != 2 or y.ndim != 2 or x.shape[0] != y.shape[0]:
        raise ValueError(f"X and Y must hold the same number of points, got shapes {x.shape} and {y.shape}")
    n = x.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")

    records = local_records(x, y, knn_index(x, k).neighbors)
    r_delta_h, degenerate_count = mean_delta_entropy([r.delta_h for r in records])
    proc = np.asarray([r.procrustes_local for r in records], dtype=float)
    good = proc[np.isfinite(proc)]
    if good.size == 0:
        raise DegenerateSpectrumError("every neighbourhood is degenerate")
    r_procrustes = float(good.mean())

    q = coranking_matrix(rank_table(x), rank_table(y))
    w_n, w_v = mrre(q, k)
    return MetricReport(
        records=records,
        r_delta_h=r_delta_h,
        r_procrustes=r_procrustes,
        w_n=w_n,
        w_v=w_v,
        k=k,
        n=n,
        degenerate_count=degenerate_count,
    )
