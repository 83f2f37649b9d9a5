"""Phase-space reconstruction of scalar time series.

Delay vectors ``(x_t, x_{t-tau}, ..., x_{t-(m-1)tau})`` per Takens (1981),
with the delay chosen at the first minimum of the auto mutual information
(Fraser & Swinney 1986) and the dimension by Cao's method (Cao 1997).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A scalar series with a free-text label (e.g. the CSV column)."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("time series must be 1-D with at least two samples")
        if not np.all(np.isfinite(vals)):
            raise ValueError("time series contains non-finite samples")
        object.__setattr__(self, "values", vals)


class EmbeddingParameters(NamedTuple):
    """Delay (samples) and dimension of a phase-space reconstruction."""

    tau: int
    m: int


class FirstMinimum(NamedTuple):
    lag: int
    is_local: bool


class CaoResult(NamedTuple):
    dimension: int
    saturated: bool
    e1: np.ndarray


def _validate_series(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("time series must be 1-D with at least two samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("time series contains non-finite samples")
    return x


def default_bin_count(n: int) -> int:
    """Histogram width used when none is given: ceil(sqrt(n / 5))."""
    return max(2, math.ceil(math.sqrt(n / 5)))


def _bin_indices(x: np.ndarray, bins: int) -> np.ndarray:
    lo = x.min()
    hi = x.max()
    if hi == lo:
        return np.zeros(x.shape, dtype=np.int64)
    idx = np.floor((x - lo) / (hi - lo) * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def auto_mutual_information(series, max_lag: int, bins: int | None = None) -> np.ndarray:
    """Mutual information (nats) between the series and its lagged copy,
    for every lag 1..max_lag.

    Uses an equal-width 2-D histogram over the overlapping sample pairs,
    with per-lag bin edges spanning each marginal's range.  A constant
    series yields all zeros with a warning.
    """
    x = _validate_series(series)
    n = x.size
    if not 1 <= max_lag <= n - 2:
        raise ValueError(f"max_lag must be in [1, {n - 2}], got {max_lag}")
    if bins is None:
        bins = default_bin_count(n)
    if bins < 2:
        raise ValueError(f"bins must be at least 2, got {bins}")
    if x.max() == x.min():
        warnings.warn("constant series: auto mutual information is identically zero")
        return np.zeros(max_lag)

    out = np.empty(max_lag)
    for lag in range(1, max_lag + 1):
        a = x[: n - lag]
        b = x[lag:]
        ia = _bin_indices(a, bins)
        ib = _bin_indices(b, bins)
        joint = np.bincount(ia * bins + ib, minlength=bins * bins).astype(float)
        joint = joint.reshape(bins, bins) / a.size
        pa = joint.sum(axis=1)
        pb = joint.sum(axis=0)
        nz = joint > 0
        mi = float(np.sum(joint[nz] * np.log(joint[nz] / np.outer(pa, pb)[nz])))
        out[lag - 1] = max(mi, 0.0)
    return out


def first_minimum(values) -> FirstMinimum:
    """First local minimum of a curve, as a 1-based lag.

    The minimum at position i requires ``v[i] < v[i-1]`` and
    ``v[i] <= v[i+1]``.  If no interior minimum exists, the global minimum
    is returned with ``is_local=False``.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 3:
        raise ValueError("need at least three values to find a first minimum")
    for i in range(1, v.size - 1):
        if v[i] < v[i - 1] and v[i] <= v[i + 1]:
            return FirstMinimum(lag=i + 1, is_local=True)
    return FirstMinimum(lag=int(np.argmin(v)) + 1, is_local=False)


def delay_embed(series, tau: int, m: int) -> np.ndarray:
    """Delay-vector matrix with rows ``(x_t, x_{t-tau}, ..., x_{t-(m-1)tau})``.

    The first usable t is ``(m-1)*tau``, so the output has
    ``len(series) - (m-1)*tau`` rows and m columns.
    """
    x = _validate_series(series)
    if tau < 1:
        raise ValueError(f"tau must be a positive integer, got {tau}")
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    n_rows = x.size - (m - 1) * tau
    if n_rows <= 0:
        raise ValueError(f"(m-1)*tau = {(m - 1) * tau} must be smaller than the series length {x.size}")
    cols = [x[(m - 1 - j) * tau : (m - 1 - j) * tau + n_rows] for j in range(m)]
    return np.column_stack(cols)


def _expansion_mean(a: np.ndarray, b: np.ndarray, block: int = 512) -> float:
    # Mean ratio of max-norm nearest-neighbour distances when one more
    # delay coordinate is appended.  Neighbours are found at the lower
    # dimension; coincident vectors are skipped per Cao's prescription.
    n = a.shape[0]
    ratios = []
    for start in range(0, n, block):
        stop = min(start + block, n)
        d = cdist(a[start:stop], a, "chebyshev")
        for r in range(stop - start):
            d[r, start + r] = np.inf
        d[d == 0.0] = np.inf
        j = np.argmin(d, axis=1)
        dmin = d[np.arange(stop - start), j]
        valid = np.isfinite(dmin)
        if not np.any(valid):
            continue
        rows = np.arange(start, stop)[valid]
        num = np.abs(b[rows] - b[j[valid]]).max(axis=1)
        ratios.append(num / dmin[valid])
    if not ratios:
        raise ValueError("all delay vectors coincide; cannot estimate expansion ratios")
    return float(np.concatenate(ratios).mean())


def cao_dimension(series, tau: int, m_max: int, threshold: float = 0.05) -> CaoResult:
    """Embedding dimension by Cao's E1 saturation criterion.

    ``E1(m) = E(m+1) / E(m)`` where E(m) averages the max-norm expansion of
    nearest-neighbour distances from dimension m to m+1.  Saturation is
    declared at the smallest m with ``|E1(m) - 1| < threshold`` for two
    consecutive m; a series that never saturates (noise) returns m_max with
    ``saturated=False``.
    """
    x = _validate_series(series)
    if tau < 1:
        raise ValueError(f"tau must be a positive integer, got {tau}")
    if m_max < 2:
        raise ValueError(f"m_max must be at least 2, got {m_max}")
    if m_max * tau >= x.size:
        raise ValueError(f"m_max * tau = {m_max * tau} must be smaller than the series length {x.size}")

    e = np.empty(m_max)
    for m in range(1, m_max + 1):
        # Align rows so the (m+1)-vector extends the m-vector by the next
        # future sample, as the expansion criterion requires.
        a = delay_embed(x, tau, m)[: x.size - m * tau]
        b = delay_embed(x, tau, m + 1)
        e[m - 1] = _expansion_mean(a, b)
    e1 = e[1:] / e[:-1]

    for m in range(1, m_max - 1):
        if abs(e1[m - 1] - 1.0) < threshold and abs(e1[m] - 1.0) < threshold:
            return CaoResult(dimension=m, saturated=True, e1=e1)
    return CaoResult(dimension=m_max, saturated=False, e1=e1)


def select_parameters(
    series,
    max_lag: int = 100,
    m_max: int = 10,
    bins: int | None = None,
    threshold: float = 0.05,
) -> EmbeddingParameters:
    """Pick (tau, m): tau at the first AMI minimum, m by Cao's method.

    ``m_max`` is reduced when the series is too short for the chosen tau.
    """
    x = _validate_series(series)
    max_lag = min(max_lag, x.size - 2)
    ami = auto_mutual_information(x, max_lag, bins=bins)
    tau = first_minimum(ami).lag
    m_cap = (x.size - 1) // tau
    if m_cap < 2:
        raise ValueError(f"series too short for tau={tau}: cannot probe dimensions beyond 1")
    result = cao_dimension(x, tau, min(m_max, m_cap), threshold=threshold)
    return EmbeddingParameters(tau=tau, m=result.dimension)
