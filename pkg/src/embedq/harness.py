"""Experiment harness: neighbour-count sweeps, metric correlations and
per-point joint exports.

A sweep fits every configured reducer once (at the sweep's upper neighbour
count unless the reducer pins its own k) and evaluates all metrics for
every k in the range.  Outputs are plain CSV/JSON, written with 17
significant digits so identical configurations reproduce byte-identical
files.
"""

from __future__ import annotations

import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .data_io import DatasetSpec, format_float, load_matrix_csv, load_series_csv, s_curve, swiss_roll
from .metrics import (
    LocalMetricRecord,
    coranking_matrix,
    local_records,
    mrre,
)
from .neighborhoods import knn_index, rank_table
from .reducers import ReducerSpec, make_embedding
from .takens import delay_embed, select_parameters

METRIC_LABELS = ("w_n", "w_v", "r_procrustes", "r_delta_h")

DEFAULT_K_MIN = 1
DEFAULT_K_MAX = 20
DEFAULT_TARGET_DIM = 2
DEFAULT_JOINT_K = 15

SWEEP_HEADER = ["method", "k", "w_n", "w_v", "r_procrustes", "r_delta_h", "degenerate_count"]
JOINT_HEADER = ["point_index", "delta_h", "procrustes_local", "degenerate"]


@dataclass(frozen=True)
class SweepConfig:
    dataset: DatasetSpec
    reducers: tuple[ReducerSpec, ...]
    k_min: int = DEFAULT_K_MIN
    k_max: int = DEFAULT_K_MAX
    target_dim: int = DEFAULT_TARGET_DIM
    joint_k: int = DEFAULT_JOINT_K
    output_dir: str = "."
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.reducers:
            raise ValueError("at least one reducer must be configured")
        if not 1 <= self.k_min <= self.k_max:
            raise ValueError(f"invalid sweep range [{self.k_min}, {self.k_max}]")
        if self.joint_k < 1:
            raise ValueError(f"joint_k must be positive, got {self.joint_k}")


@dataclass(frozen=True)
class SweepCell:
    """Global metric values of one (method, k) grid cell."""

    method: str
    k: int
    w_n: float
    w_v: float
    r_procrustes: float
    r_delta_h: float
    degenerate_count: int
    error: str | None = None

    def metric(self, label: str) -> float:
        return float(getattr(self, label))

    def is_complete(self) -> bool:
        return all(math.isfinite(self.metric(lbl)) for lbl in METRIC_LABELS)


@dataclass(frozen=True, eq=False)
class SweepResult:
    cells: tuple[SweepCell, ...]
    k_min: int
    k_max: int
    dataset: DatasetSpec
    reducers: tuple[ReducerSpec, ...]
    seed: int
    target_dim: int
    embeddings: dict = field(default_factory=dict, repr=False)
    reducer_errors: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Pearson correlations of the four global metrics over grid cells.

    ``defined[i, j]`` is False where a constant column makes the
    coefficient meaningless; those values are NaN but never contaminate
    other entries.
    """

    labels: tuple[str, ...]
    values: np.ndarray
    defined: np.ndarray
    n_samples: int


def load_config(source) -> SweepConfig:
    """Build a sweep configuration from a JSON file path or a dict."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            raw = json.load(fh)
    else:
        raw = dict(source)
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> SweepConfig:
    ds = raw.get("dataset")
    if not isinstance(ds, dict) or "kind" not in ds:
        raise ValueError("config needs a 'dataset' section with a 'kind'")
    seed = int(raw.get("seed", 0))
    dataset = DatasetSpec(
        kind=ds["kind"],
        n=int(ds.get("n", 2000)),
        noise=float(ds.get("noise", 0.0)),
        seed=int(ds.get("seed", seed)),
        path=ds.get("path"),
        column=ds.get("column"),
        log_transform=bool(ds.get("log_transform", False)),
    )
    sweep = raw.get("sweep", {})
    k_min = int(sweep.get("k_min", DEFAULT_K_MIN))
    k_max = int(sweep.get("k_max", DEFAULT_K_MAX))
    target_dim = int(raw.get("target_dim", DEFAULT_TARGET_DIM))

    reducers = []
    for entry in raw.get("reducers", []):
        if isinstance(entry, str):
            reducers.append(ReducerSpec(method=entry, target_dim=target_dim))
        else:
            reducers.append(
                ReducerSpec(
                    method=entry["method"],
                    target_dim=int(entry.get("target_dim", target_dim)),
                    k=int(entry["k"]) if "k" in entry else None,
                    regularization=float(entry.get("regularization", 1e-3)),
                )
            )
    return SweepConfig(
        dataset=dataset,
        reducers=tuple(reducers),
        k_min=k_min,
        k_max=k_max,
        target_dim=target_dim,
        joint_k=int(raw.get("joint_k", DEFAULT_JOINT_K)),
        output_dir=str(raw.get("output_dir", ".")),
        seed=seed,
    )


def build_dataset(spec: DatasetSpec) -> np.ndarray:
    """Materialise the (n, d) point matrix a dataset spec describes."""
    if spec.kind == "s-curve":
        return s_curve(spec.n, spec.noise, spec.seed)[0]
    if spec.kind == "swiss-roll":
        return swiss_roll(spec.n, spec.noise, spec.seed)[0]
    if spec.kind == "csv-matrix":
        return load_matrix_csv(spec.path)
    if spec.kind == "csv-series":
        series = load_series_csv(spec.path, column=spec.column)
        values = series.values
        if spec.log_transform:
            if np.any(values <= 0):
                raise ValueError("log transform requires strictly positive series values")
            values = np.log(values)
        tau, m = select_parameters(values)
        return delay_embed(values, tau, m)
    raise ValueError(f"unknown dataset kind {spec.kind!r}")


def run_sweep(config: SweepConfig, data: np.ndarray | None = None) -> SweepResult:
    """Fit every reducer once and evaluate all metrics over the k range.

    Reducer failures (for example a disconnected Isomap graph) are recorded
    per cell instead of aborting the sweep; cells whose neighbourhoods are
    all degenerate carry NaN means with a full degenerate count.
    """
    x = build_dataset(config.dataset) if data is None else np.asarray(data, dtype=float)
    n = x.shape[0]
    if config.k_max > n - 1:
        raise ValueError(f"k_max {config.k_max} must be at most n - 1 = {n - 1}")

    ks = range(config.k_min, config.k_max + 1)
    rank_high = rank_table(x)
    neighbors = knn_index(x, config.k_max).neighbors

    cells: list[SweepCell] = []
    embeddings: dict[str, np.ndarray] = {}
    reducer_errors: dict[str, str] = {}
    for spec in config.reducers:
        try:
            y = make_embedding(x, spec, default_k=config.k_max)
        except Exception as exc:  # recorded per cell, sweep continues
            reducer_errors[spec.method] = f"{type(exc).__name__}: {exc}"
            for k in ks:
                cells.append(
                    SweepCell(spec.method, k, math.nan, math.nan, math.nan, math.nan, 0, error=reducer_errors[spec.method])
                )
            continue
        embeddings[spec.method] = y
        q = coranking_matrix(rank_high, rank_table(y))
        for k in ks:
            cells.append(_evaluate_cell(x, y, spec.method, k, neighbors[:, :k], q))

    return SweepResult(
        cells=tuple(cells),
        k_min=config.k_min,
        k_max=config.k_max,
        dataset=config.dataset,
        reducers=config.reducers,
        seed=config.seed,
        target_dim=config.target_dim,
        embeddings=embeddings,
        reducer_errors=reducer_errors,
    )


def _evaluate_cell(x, y, method: str, k: int, neighbors, q) -> SweepCell:
    records = local_records(x, y, neighbors)
    dh = np.asarray([r.delta_h for r in records])
    proc = np.asarray([r.procrustes_local for r in records])
    good_dh = dh[np.isfinite(dh)]
    good_proc = proc[np.isfinite(proc)]
    w_n, w_v = mrre(q, k)
    return SweepCell(
        method=method,
        k=k,
        w_n=w_n,
        w_v=w_v,
        r_procrustes=float(good_proc.mean()) if good_proc.size else math.nan,
        r_delta_h=float(good_dh.mean()) if good_dh.size else math.nan,
        degenerate_count=int(np.sum(~np.isfinite(dh))),
        error=None,
    )


def correlation_report(source) -> CorrelationMatrix:
    """Pearson correlation matrix of the four global metrics, pooled over
    all complete grid cells.

    ``source`` is a :class:`SweepResult` or an iterable of
    :class:`SweepCell`.  Cells with NaN metrics (degenerate or failed) are
    dropped; fewer than three usable cells is an error.
    """
    cells = source.cells if isinstance(source, SweepResult) else tuple(source)
    complete = [c for c in cells if c.is_complete()]
    if len(complete) < 3:
        raise ValueError(f"correlation needs at least 3 complete grid cells, got {len(complete)}")
    data = np.asarray([[c.metric(lbl) for lbl in METRIC_LABELS] for c in complete])
    centred = data - data.mean(axis=0)
    ss = (centred * centred).sum(axis=0)
    m = len(METRIC_LABELS)
    values = np.full((m, m), math.nan)
    defined = np.zeros((m, m), dtype=bool)
    for i in range(m):
        values[i, i] = 1.0
        defined[i, i] = True
        for j in range(i + 1, m):
            if ss[i] == 0.0 or ss[j] == 0.0:
                continue
            r = float((centred[:, i] * centred[:, j]).sum() / math.sqrt(ss[i] * ss[j]))
            values[i, j] = values[j, i] = r
            defined[i, j] = defined[j, i] = True
    return CorrelationMatrix(labels=METRIC_LABELS, values=values, defined=defined, n_samples=len(complete))


def joint_export(X, Y, k: int = DEFAULT_JOINT_K) -> list[LocalMetricRecord]:
    """Per-point (delta_h, procrustes_local, degenerate) table at a fixed
    neighbourhood size, suitable for external jointplot rendering."""
    x = np.asarray(X, dtype=float)
    y = np.asarray(Y, dtype=float)
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"X and Y must hold the same number of points, got {x.shape[0]} and {y.shape[0]}")
    return local_records(x, y, knn_index(x, k).neighbors)


# ---------------------------------------------------------------------------
# Writers


def write_sweep_csv(result: SweepResult, path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for c in result.cells:
            writer.writerow(
                [
                    c.method,
                    c.k,
                    format_float(c.w_n),
                    format_float(c.w_v),
                    format_float(c.r_procrustes),
                    format_float(c.r_delta_h),
                    c.degenerate_count,
                ]
            )


def read_sweep_csv(path) -> list[SweepCell]:
    cells = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SWEEP_HEADER:
            raise ValueError(f"{path}: expected header {SWEEP_HEADER}, got {reader.fieldnames}")
        for row in reader:
            cells.append(
                SweepCell(
                    method=row["method"],
                    k=int(row["k"]),
                    w_n=float(row["w_n"]),
                    w_v=float(row["w_v"]),
                    r_procrustes=float(row["r_procrustes"]),
                    r_delta_h=float(row["r_delta_h"]),
                    degenerate_count=int(row["degenerate_count"]),
                )
            )
    return cells


def write_correlation_csv(corr: CorrelationMatrix, path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric", *corr.labels])
        for i, label in enumerate(corr.labels):
            row = [label]
            for j in range(len(corr.labels)):
                row.append(format_float(corr.values[i, j]) if corr.defined[i, j] else "undefined")
            writer.writerow(row)


def write_joint_csv(records: list[LocalMetricRecord], path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(JOINT_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.point_index,
                    format_float(r.delta_h),
                    format_float(r.procrustes_local),
                    "true" if r.degenerate else "false",
                ]
            )


def write_run_meta(config: SweepConfig, result: SweepResult, timings: dict, path) -> None:
    meta = {
        "config": {
            "dataset": asdict(config.dataset),
            "reducers": [asdict(r) for r in config.reducers],
            "sweep": {"k_min": config.k_min, "k_max": config.k_max},
            "target_dim": config.target_dim,
            "joint_k": config.joint_k,
            "output_dir": config.output_dir,
            "seed": config.seed,
        },
        "seed": config.seed,
        "versions": {
            "embedq": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "reducer_errors": result.reducer_errors,
        "timings_seconds": timings,
    }
    try:
        import scipy

        meta["versions"]["scipy"] = scipy.__version__
    except ImportError:  # pragma: no cover
        pass
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_sweep_to_dir(config: SweepConfig) -> SweepResult:
    """Run a sweep and write sweep.csv, correlation.csv, per-method joint
    exports and run_meta.json into the configured output directory."""
    out = Path(config.output_dir)
    timings: dict[str, float] = {}

    start = time.perf_counter()
    data = build_dataset(config.dataset)
    timings["dataset"] = time.perf_counter() - start

    start = time.perf_counter()
    result = run_sweep(config, data=data)
    timings["sweep"] = time.perf_counter() - start
    write_sweep_csv(result, out / "sweep.csv")

    start = time.perf_counter()
    try:
        corr = correlation_report(result)
        write_correlation_csv(corr, out / "correlation.csv")
    except ValueError as exc:
        print(f"correlation skipped: {exc}", file=sys.stderr)
    timings["correlation"] = time.perf_counter() - start

    start = time.perf_counter()
    joint_k = min(config.joint_k, data.shape[0] - 1)
    neighbors = knn_index(data, joint_k).neighbors
    for method, y in result.embeddings.items():
        records = local_records(data, y, neighbors)
        write_joint_csv(records, out / f"joint_{method}_k{joint_k}.csv")
    timings["joint"] = time.perf_counter() - start

    write_run_meta(config, result, timings, out / "run_meta.json")
    for method, message in result.reducer_errors.items():
        print(f"reducer {method} failed: {message}", file=sys.stderr)
    return result
