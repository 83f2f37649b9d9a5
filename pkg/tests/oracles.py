"""Independent reference implementations used to cross-check the library.

Everything here deliberately avoids the library's code paths: neighbour
search is a Python sort, rank errors are summed as exact fractions,
entropies are direct Shannon sums and the conformal alignment is found by
a hierarchical grid search over explicit rotation and scale parameters.
"""

import math
from fractions import Fraction

import numpy as np


def sorted_ranks(points):
    """Rank table by full per-point distance sort, ties by index."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    ranks = np.zeros((n, n), dtype=int)
    for i in range(n):
        order = sorted((float(np.sum((pts[i] - pts[j]) ** 2)), j) for j in range(n) if j != i)
        for rank, (_, j) in enumerate(order, start=1):
            ranks[i, j] = rank
    return ranks


def knn_by_sort(points, k):
    ranks = sorted_ranks(points)
    n = len(points)
    out = np.empty((n, k), dtype=int)
    for i in range(n):
        row = [(ranks[i, j], j) for j in range(n) if j != i]
        row.sort()
        out[i] = [j for _, j in row[:k]]
    return out


def coranking_by_double_loop(rank_high, rank_low):
    n = rank_high.shape[0]
    q = np.zeros((n - 1, n - 1), dtype=int)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            q[rank_high[i, j] - 1, rank_low[i, j] - 1] += 1
    return q


def mrre_rank_sum(X, Y, K):
    """MRRE straight from the neighbour-set definition, in exact rational
    arithmetic: intrusions sum |rho - r| / r over low-space K-neighbourhoods
    and extrusions sum |rho - r| / rho over high-space ones."""
    rh = sorted_ranks(X)
    rl = sorted_ranks(Y)
    n = len(rh)
    num_n = Fraction(0)
    num_v = Fraction(0)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rho, r = int(rh[i, j]), int(rl[i, j])
            if r <= K:
                num_n += Fraction(abs(rho - r), r)
            if rho <= K:
                num_v += Fraction(abs(rho - r), rho)
    h_k = n * sum(Fraction(abs(n - 2 * kk + 1), kk) for kk in range(1, K + 1))
    return float(num_n / h_k), float(num_v / h_k)


def shannon_entropy_of_matrix(m, tol=1e-12):
    """Direct -sum(p log p) over the normalised squared singular values."""
    s = np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)
    if s[0] <= 0.0:
        return math.nan
    s = s[s > tol * s[0]]
    p = s**2 / np.sum(s**2)
    return float(-np.sum(p * np.log(p)))


def procrustes_closed_form(xc, yc):
    """Alignment residual via the trace identity: the minimum over
    rotations and positive scale is  ||X||^2 - tr(S)^2 / ||Y||^2,  with
    tr(S) the nuclear norm of X Y^T obtained from a Gram eigensolve."""
    x = np.asarray(xc, dtype=float)
    y = np.asarray(yc, dtype=float)
    nx2 = float(np.sum(x * x))
    ny2 = float(np.sum(y * y))
    if nx2 == 0.0:
        return math.nan
    if ny2 == 0.0:
        return 1.0
    m = x @ y.T
    nuclear = float(np.sqrt(np.maximum(np.linalg.eigvalsh(m @ m.T), 0.0)).sum())
    return (nx2 - nuclear**2 / ny2) / nx2


def _frames(theta, phi, psi):
    """All (3, 2) orthonormal frames for the given angle grids."""
    t, f, p = np.meshgrid(theta, phi, psi, indexing="ij")
    ct, st = np.cos(t), np.sin(t)
    cf, sf = np.cos(f), np.sin(f)
    cp, sp = np.cos(p), np.sin(p)
    a1 = np.stack([ct * cf, ct * sf, st], axis=-1)
    u = np.stack([-sf, cf, np.zeros_like(sf)], axis=-1)
    v = np.stack([-st * cf, -st * sf, ct], axis=-1)
    a2 = cp[..., None] * u + sp[..., None] * v
    frames = np.stack([a1, a2], axis=-1)  # (..., 3, 2)
    return frames.reshape(-1, 3, 2)


def procrustes_grid_search(xc, yc, final_step=1e-3, coarse=24, refine_points=9):
    """Minimum alignment residual by dense search over rotation angles and
    scale, refined until every grid step is below ``final_step``.

    The map applied to the 2-row ``yc`` is ``c * [a1 a2]`` with a1, a2 an
    orthonormal pair in R^3 parametrised by three angles; the objective is
    evaluated as an explicit Frobenius residual.
    """
    x = np.asarray(xc, dtype=float)
    y = np.asarray(yc, dtype=float)
    assert x.shape[0] == 3 and y.shape[0] == 2, "search is parametrised for d=3, l=2"
    nx2 = float(np.sum(x * x))
    ny2 = float(np.sum(y * y))
    c_hi = 2.0 * math.sqrt(nx2 / ny2)

    def evaluate(theta, phi, psi, scales):
        frames = _frames(theta, phi, psi)  # (f, 3, 2)
        mapped = np.einsum("fij,jk->fik", frames, y)  # (f, 3, k)
        best = np.inf
        best_idx = None
        for ci, c in enumerate(scales):
            resid = x[None] - c * mapped
            vals = np.einsum("fik,fik->f", resid, resid)
            fi = int(np.argmin(vals))
            if vals[fi] < best:
                best = vals[fi]
                best_idx = (fi, ci)
        return best, best_idx

    theta = np.linspace(-np.pi / 2, np.pi / 2, coarse + 1)
    phi = np.linspace(0.0, 2 * np.pi, 2 * coarse, endpoint=False)
    psi = np.linspace(0.0, 2 * np.pi, 2 * coarse, endpoint=False)
    scales = np.linspace(0.0, c_hi, 2 * coarse + 1)

    # Keep several coarse candidates to dodge local minima, refine each.
    frames_count = (len(theta), len(phi), len(psi))
    frames = _frames(theta, phi, psi)
    mapped = np.einsum("fij,jk->fik", frames, y)
    candidates = []
    for c in scales:
        resid = x[None] - c * mapped
        vals = np.einsum("fik,fik->f", resid, resid)
        order = np.argsort(vals)[:3]
        for fi in order:
            ti, rem = divmod(int(fi), frames_count[1] * frames_count[2])
            pi, si = divmod(rem, frames_count[2])
            candidates.append((float(vals[fi]), float(theta[ti]), float(phi[pi]), float(psi[si]), float(c)))
    candidates.sort()
    candidates = candidates[:6]

    best_val = math.inf
    for _, t0, p0, s0, c0 in candidates:
        spans = [np.pi / coarse, np.pi / coarse, np.pi / coarse, c_hi / (2 * coarse)]
        centre = [t0, p0, s0, c0]
        while True:
            axes = [
                np.linspace(centre[a] - spans[a], centre[a] + spans[a], refine_points)
                for a in range(4)
            ]
            val, (fi, ci) = evaluate(axes[0], axes[1], axes[2], axes[3])
            ti, rem = divmod(fi, refine_points * refine_points)
            pi, si = divmod(rem, refine_points)
            centre = [float(axes[0][ti]), float(axes[1][pi]), float(axes[2][si]), float(axes[3][ci])]
            spans = [2.0 * s / (refine_points - 1) for s in spans]
            if max(spans) < final_step:
                break
        best_val = min(best_val, val)
    return best_val / nx2
