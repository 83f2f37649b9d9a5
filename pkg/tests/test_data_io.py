"""Tests for dataset generation and CSV ingestion."""

import numpy as np
import pytest

from embedq.data_io import (
    CsvFormatError,
    DatasetSpec,
    format_float,
    load_matrix_csv,
    load_series_csv,
    s_curve,
    swiss_roll,
    write_matrix_csv,
)


class TestSCurve:
    def test_points_lie_on_surface(self):
        """Noise-free points satisfy the parametrisation exactly."""
        pts, truth = s_curve(2000, 0.0, 0)
        t, u = truth[:, 0], truth[:, 1]
        expected = np.column_stack([np.sin(t), u, np.sign(t) * (np.cos(t) - 1.0)])
        assert np.all(np.abs(pts - expected) < 1e-12)

    def test_parameter_ranges(self):
        _, truth = s_curve(5000, 0.0, 1)
        assert truth[:, 0].min() >= -1.5 * np.pi and truth[:, 0].max() <= 1.5 * np.pi
        assert truth[:, 1].min() >= 0.0 and truth[:, 1].max() <= 2.0

    def test_origin_parameter(self):
        """At t = 0 the point is (0, u, 0)."""
        pts, truth = s_curve(50, 0.0, 2)
        i = int(np.argmin(np.abs(truth[:, 0])))
        t, u = truth[i]
        assert abs(pts[i, 0] - np.sin(t)) < 1e-12
        assert pts[i, 1] == u

    def test_seed_determinism(self):
        a, ta = s_curve(100, 0.05, 7)
        b, tb = s_curve(100, 0.05, 7)
        assert np.array_equal(a, b)
        assert np.array_equal(ta, tb)

    def test_noise_validation(self):
        with pytest.raises(ValueError):
            s_curve(10, -0.1, 0)
        with pytest.raises(ValueError):
            s_curve(0, 0.0, 0)


class TestSwissRoll:
    def test_points_lie_on_surface(self):
        pts, truth = swiss_roll(500, 0.0, 3)
        t, u = truth[:, 0], truth[:, 1]
        expected = np.column_stack([t * np.cos(t), u, t * np.sin(t)])
        assert np.all(np.abs(pts - expected) < 1e-12)

    def test_seed_determinism(self):
        a, _ = swiss_roll(60, 0.0, 4)
        b, _ = swiss_roll(60, 0.0, 4)
        assert np.array_equal(a, b)


class TestDatasetSpec:
    def test_valid(self):
        spec = DatasetSpec(kind="s-curve", n=100, noise=0.0, seed=1)
        assert spec.kind == "s-curve"

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown dataset kind"):
            DatasetSpec(kind="torus")

    def test_csv_needs_path(self):
        with pytest.raises(ValueError, match="requires a path"):
            DatasetSpec(kind="csv-series")


class TestLoadSeriesCsv:
    def test_named_column(self, tmp_path):
        p = tmp_path / "series.csv"
        p.write_text("date,close\n2001-01-01,1\n2001-01-02,2\n2001-01-03,3\n")
        ts = load_series_csv(p, column="close")
        assert ts.values.tolist() == [1.0, 2.0, 3.0]
        assert ts.label == "close"

    def test_headerless_index(self, tmp_path):
        p = tmp_path / "series.csv"
        p.write_text("1.5\n2.5\n-3.5\n")
        ts = load_series_csv(p)
        assert ts.values.tolist() == [1.5, 2.5, -3.5]

    def test_blank_cell_names_row(self, tmp_path):
        p = tmp_path / "series.csv"
        p.write_text("close\n1\n\n3\n")
        # blank line is skipped entirely; a blank cell inside a row errors
        p.write_text("close,other\n1,a\n,b\n3,c\n")
        with pytest.raises(CsvFormatError, match="row 3"):
            load_series_csv(p, column="close")

    def test_non_numeric_cell_names_row(self, tmp_path):
        p = tmp_path / "series.csv"
        p.write_text("close\n1\noops\n3\n")
        with pytest.raises(CsvFormatError, match="row 3"):
            load_series_csv(p, column="close")

    def test_missing_column(self, tmp_path):
        p = tmp_path / "series.csv"
        p.write_text("close\n1\n2\n")
        with pytest.raises(CsvFormatError, match="not found"):
            load_series_csv(p, column="open")

    def test_missing_file(self, tmp_path):
        with pytest.raises(CsvFormatError, match="not found"):
            load_series_csv(tmp_path / "nope.csv")

    def test_row_count_oracle(self, tmp_path):
        """Length and order survive a large file round trip."""
        rng = np.random.default_rng(5)
        values = rng.uniform(1.0, 100.0, size=6300)
        p = tmp_path / "big.csv"
        p.write_text("close\n" + "\n".join(format_float(v) for v in values) + "\n")
        line_count = p.read_text().count("\n") - 1
        ts = load_series_csv(p, column="close")
        assert len(ts.values) == line_count == 6300
        assert np.array_equal(ts.values, values)


class TestLoadMatrixCsv:
    def test_rectangular(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1,2\n3,4\n5,6\n")
        m = load_matrix_csv(p)
        assert m.shape == (3, 2)
        assert m.tolist() == [[1, 2], [3, 4], [5, 6]]

    def test_header_skipped(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("x,y\n1,2\n3,4\n")
        assert load_matrix_csv(p).shape == (2, 2)

    def test_ragged_row_named(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1,2\n3\n")
        with pytest.raises(CsvFormatError, match="row 2"):
            load_matrix_csv(p)

    def test_round_trip_is_bit_exact(self, tmp_path):
        rng = np.random.default_rng(6)
        m = rng.standard_normal((40, 5)) * 10.0 ** rng.integers(-8, 8, size=(40, 5))
        p = tmp_path / "m.csv"
        write_matrix_csv(p, m)
        back = load_matrix_csv(p)
        assert np.array_equal(back, m)

    def test_write_deterministic(self, tmp_path):
        rng = np.random.default_rng(7)
        m = rng.standard_normal((10, 3))
        write_matrix_csv(tmp_path / "a.csv", m)
        write_matrix_csv(tmp_path / "b.csv", m)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
