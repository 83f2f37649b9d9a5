"""Tests for the singular-spectrum machinery."""

import math

import numpy as np
import pytest

from embedq.spectral import (
    DegenerateSpectrumError,
    SingularSpectrum,
    singular_values,
    spectral_entropy,
    stable_rank,
)


def random_spectrum(rng, size=None):
    size = size or rng.integers(1, 12)
    return np.sort(rng.uniform(0.0, 10.0, size=size))[::-1]


class TestSingularValues:
    def test_identity(self):
        s = singular_values(np.eye(3))
        assert np.allclose(s.values, [1.0, 1.0, 1.0])
        assert s.algebraic_rank == 3

    def test_rank_one_outer_product(self):
        rng = np.random.default_rng(0)
        u = rng.standard_normal(4)
        v = rng.standard_normal(5)
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        s = singular_values(np.outer(u, v))
        assert abs(s.values[0] - 1.0) < 1e-12
        assert np.all(s.values[1:] < 1e-12)
        assert s.algebraic_rank == 1

    def test_matches_gram_eigensolve_oracle(self):
        """Spectrum equals the square roots of the Gram matrix eigenvalues."""
        rng = np.random.default_rng(1)
        m = rng.standard_normal((5, 4))
        expected = np.sqrt(np.maximum(np.linalg.eigvalsh(m.T @ m)[::-1], 0.0))
        got = singular_values(m).values
        assert np.allclose(got, expected, atol=1e-10)

    def test_reconstruction(self):
        rng = np.random.default_rng(2)
        m = rng.standard_normal((6, 3))
        u, s, vt = np.linalg.svd(m, compute_uv=True)
        assert np.allclose(singular_values(m).values, s, atol=1e-12)
        assert np.allclose(u[:, :3] * s @ vt, m, atol=1e-10)

    def test_orthogonal_invariance(self):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((4, 7))
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        assert np.allclose(singular_values(q @ m).values, singular_values(m).values, atol=1e-10)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            singular_values(np.array([[1.0, np.nan]]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            singular_values(np.empty((0, 3)))


class TestSingularSpectrum:
    def test_rejects_ascending(self):
        with pytest.raises(ValueError, match="descending"):
            SingularSpectrum(np.array([1.0, 2.0]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="nonnegative"):
            SingularSpectrum(np.array([1.0, -0.5]))

    def test_truncation_rank(self):
        s = SingularSpectrum(np.array([1.0, 1e-13, 0.0]))
        assert s.algebraic_rank == 1
        assert s.truncated().tolist() == [1.0]


class TestStableRank:
    def test_uniform(self):
        assert stable_rank([1.0, 1.0, 1.0]) == pytest.approx(3.0, abs=1e-15)

    def test_rank_one(self):
        assert stable_rank([5.0, 0.0, 0.0]) == pytest.approx(1.0, abs=1e-15)

    def test_direct_formula(self):
        # (4 + 1 + 1) / 4
        assert stable_rank([2.0, 1.0, 1.0]) == pytest.approx(1.5, abs=1e-15)

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrumError):
            stable_rank([0.0, 0.0])

    def test_scale_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            vals = random_spectrum(rng)
            c = rng.uniform(1e-6, 1e6)
            assert abs(stable_rank(c * vals) - stable_rank(vals)) < 1e-12 * max(1.0, stable_rank(vals))


class TestSpectralEntropy:
    def test_uniform_maximises(self):
        dec = spectral_entropy([1.0, 1.0, 1.0])
        assert dec.entropy == pytest.approx(math.log(3.0), abs=1e-14)
        assert dec.stable_rank == pytest.approx(3.0, abs=1e-14)
        assert dec.epsilon_term == pytest.approx(0.0, abs=1e-14)

    def test_single_direction(self):
        assert spectral_entropy([5.0, 0.0, 0.0]).entropy == pytest.approx(0.0, abs=1e-15)

    def test_direct_shannon_evaluation(self):
        """Hand evaluation on p = (2/3, 1/6, 1/6)."""
        expected = -(2 / 3) * math.log(2 / 3) - 2 * (1 / 6) * math.log(1 / 6)
        assert spectral_entropy([2.0, 1.0, 1.0]).entropy == pytest.approx(expected, abs=1e-14)

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrumError):
            spectral_entropy(np.zeros(4))

    def test_scale_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            vals = random_spectrum(rng)
            c = rng.uniform(1e-6, 1e6)
            assert abs(spectral_entropy(c * vals).entropy - spectral_entropy(vals).entropy) < 1e-12

    def test_decomposition_identity(self):
        """H = log r - eps holds to 1e-12 on 1000 random spectra."""
        rng = np.random.default_rng(6)
        for _ in range(1000):
            vals = random_spectrum(rng)
            dec = spectral_entropy(vals)
            assert abs(dec.entropy - (math.log(dec.stable_rank) - dec.epsilon_term)) < 1e-12

    def test_bounds(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            vals = random_spectrum(rng)
            spec = SingularSpectrum(vals)
            dec = spectral_entropy(spec)
            assert -1e-12 <= dec.entropy <= math.log(spec.algebraic_rank) + 1e-12
            assert 1.0 <= dec.stable_rank <= spec.algebraic_rank + 1e-12

    def test_shannon_oracle_on_random_spectra(self):
        """Decomposition form agrees with a direct -sum(p log p) oracle."""
        rng = np.random.default_rng(8)
        for _ in range(200):
            vals = random_spectrum(rng)
            p = vals**2 / np.sum(vals**2)
            oracle = -np.sum(p * np.log(p))
            assert abs(spectral_entropy(vals).entropy - oracle) < 1e-12
