"""Singular-spectrum summaries: stable rank and spectral entropy.

The singular values of a matrix describe how variance is spread across
orthogonal directions.  Normalising the squared values gives a probability
distribution whose Shannon entropy (in nats) measures that spread, and the
stable rank ``||M||_F^2 / ||M||_2^2`` is the matching continuous surrogate
for the algebraic rank.  The two are tied together by the identity

    H = log r - eps,    eps = (1/r) * sum_j alpha_j * log(alpha_j),

with ``alpha_j = (sigma_j / sigma_1)^2`` and ``r = sum_j alpha_j``.  This
module keeps the identity exact by evaluating both sides from the same
truncated set of singular values.

All quantities are invariant under rescaling of the spectrum, so no
covariance-style ``1/(k-1)`` normalisation is applied anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative cutoff below which singular values are treated as zero.  The
# algebraic rank is not a continuous function of the matrix entries, so a
# hard threshold keeps it stable against floating-point noise.
TOL_RANK = 1e-12


class DegenerateSpectrumError(ValueError):
    """An all-zero spectrum admits neither a stable rank nor an entropy."""


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """Descending, nonnegative singular values of a matrix."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("spectrum must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(vals)):
            raise ValueError("spectrum contains non-finite values")
        if np.any(vals < 0):
            raise ValueError("singular values must be nonnegative")
        if np.any(np.diff(vals) > 0):
            raise ValueError("singular values must be sorted descending")
        object.__setattr__(self, "values", vals)

    @property
    def algebraic_rank(self) -> int:
        """Number of values above ``TOL_RANK`` relative to the largest."""
        if self.values[0] == 0.0:
            return 0
        return int(np.sum(self.values > TOL_RANK * self.values[0]))

    def truncated(self) -> np.ndarray:
        """The values above the truncation cutoff (possibly empty)."""
        return self.values[: self.algebraic_rank]


def _as_spectrum(s) -> SingularSpectrum:
    if isinstance(s, SingularSpectrum):
        return s
    vals = np.sort(np.asarray(s, dtype=float))[::-1]
    return SingularSpectrum(vals)


def singular_values(matrix) -> SingularSpectrum:
    """Full singular spectrum of a dense real matrix, descending.

    Returns min(rows, cols) values.  Raises ``ValueError`` on empty or
    non-finite input.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a 2-D matrix with at least one row and column, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return SingularSpectrum(np.linalg.svd(m, compute_uv=False))


def stable_rank(s) -> float:
    """Stable rank ``sum(sigma_j^2) / sigma_1^2`` of a spectrum.

    Values below the truncation cutoff are ignored, which keeps the result
    within ``[1, algebraic_rank]``.  Accepts a :class:`SingularSpectrum` or
    any nonnegative sequence.
    """
    top = _as_spectrum(s).truncated()
    if top.size == 0:
        raise DegenerateSpectrumError("all-zero spectrum has no stable rank")
    alpha = (top / top[0]) ** 2
    return float(alpha.sum())


@dataclass(frozen=True)
class EntropyDecomposition:
    """Spectral entropy split into its stable-rank and shape terms.

    ``entropy == log(stable_rank) - epsilon_term`` holds exactly by
    construction; ``epsilon_term`` reflects how unevenly the spectrum is
    distributed below its leading value.
    """

    stable_rank: float
    epsilon_term: float
    entropy: float


def spectral_entropy(s) -> EntropyDecomposition:
    """Shannon entropy (nats) of the normalised squared spectrum.

    The probabilities are ``p_j = sigma_j^2 / sum(sigma_m^2)`` over the
    values above the truncation cutoff; entries below it follow the
    ``0 * log 0 = 0`` convention and drop out.
    """
    top = _as_spectrum(s).truncated()
    if top.size == 0:
        raise DegenerateSpectrumError("all-zero spectrum has no entropy")
    alpha = (top / top[0]) ** 2
    r = float(alpha.sum())
    eps = float((alpha * np.log(alpha)).sum() / r)
    return EntropyDecomposition(stable_rank=r, epsilon_term=eps, entropy=float(np.log(r)) - eps)
