"""Command-line interface.

Subcommands compose through CSV/JSON files so full pipelines run in the
shell:

    embedq generate --kind s-curve --n 500 --out data/
    embedq reduce --data data/s-curve.csv --method isomap --dim 2 --k 15 --out data/
    embedq evaluate --x data/s-curve.csv --y data/isomap.csv --k 10
    embedq sweep --config config.json

Exit codes: 0 success, 1 input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .data_io import (
    CsvFormatError,
    format_float,
    load_matrix_csv,
    load_series_csv,
    s_curve,
    swiss_roll,
    write_matrix_csv,
)
from .harness import (
    DEFAULT_JOINT_K,
    correlation_report,
    joint_export,
    load_config,
    read_sweep_csv,
    run_sweep_to_dir,
    write_correlation_csv,
    write_joint_csv,
)
from .metrics import evaluate
from .reducers import DisconnectedGraphError, ReducerSpec, make_embedding
from .spectral import DegenerateSpectrumError
from .takens import auto_mutual_information, cao_dimension, delay_embed, default_bin_count, first_minimum

INPUT_ERRORS = (CsvFormatError, FileNotFoundError, ValueError, KeyError, json.JSONDecodeError)
NUMERIC_ERRORS = (DegenerateSpectrumError, DisconnectedGraphError, np.linalg.LinAlgError, FloatingPointError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embedq", description="Embedding-quality metrics and experiment harness.")
    parser.add_argument("--version", action="version", version=f"embedq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic benchmark dataset as CSV")
    p.add_argument("--kind", choices=["s-curve", "swiss-roll"], default="s-curve")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("takens", help="reconstruct phase space from a scalar series")
    p.add_argument("--series", required=True, help="CSV file holding the series")
    p.add_argument("--column", default=None, help="column name or 0-based index")
    p.add_argument("--log-transform", action="store_true", help="apply a natural log before embedding")
    p.add_argument("--max-lag", type=int, default=100)
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--cao-threshold", type=float, default=0.05)
    p.add_argument("--tau", type=int, default=None, help="override the delay instead of estimating it")
    p.add_argument("--m", type=int, default=None, help="override the dimension instead of estimating it")
    p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("reduce", help="reduce a data matrix with one method")
    p.add_argument("--data", required=True, help="CSV matrix, points as rows")
    p.add_argument("--method", required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--regularization", type=float, default=1e-3)
    p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("evaluate", help="all quality metrics for one (X, Y, k)")
    p.add_argument("--x", required=True, help="original data CSV")
    p.add_argument("--y", required=True, help="embedding CSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None, help="optional path for the JSON report")

    p = sub.add_parser("sweep", help="run the full neighbour-count sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=None, help="override the output directory")
    p.add_argument("--k-min", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="override the joint-export neighbour count")
    p.add_argument("--method", default=None, help="comma-separated reducer subset to run")
    p.add_argument("--dim", type=int, default=None, help="override the target dimension")

    p = sub.add_parser("correlate", help="metric correlation matrix from sweep CSVs")
    p.add_argument("sweeps", nargs="+", help="one or more sweep.csv files to pool")
    p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("joint", help="per-point metric table for external jointplots")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--k", type=int, default=DEFAULT_JOINT_K)
    p.add_argument("--label", default="embedding", help="method label used in the output file name")
    p.add_argument("--out", default=".", help="output directory")

    return parser


def _cmd_generate(args) -> int:
    gen = s_curve if args.kind == "s-curve" else swiss_roll
    points, truth = gen(args.n, args.noise, args.seed)
    out = Path(args.out)
    write_matrix_csv(out / f"{args.kind}.csv", points)
    write_matrix_csv(out / f"{args.kind}_truth.csv", truth)
    print(f"wrote {out / f'{args.kind}.csv'} ({args.n} points) and {out / f'{args.kind}_truth.csv'}")
    return 0


def _cmd_takens(args) -> int:
    series = load_series_csv(args.series, column=args.column)
    values = series.values
    if args.log_transform:
        if np.any(values <= 0):
            raise ValueError("log transform requires strictly positive series values")
        values = np.log(values)

    out = Path(args.out)
    max_lag = min(args.max_lag, values.size - 2)
    bins = args.bins if args.bins is not None else default_bin_count(values.size)
    ami = auto_mutual_information(values, max_lag, bins=bins)
    tau = args.tau if args.tau is not None else first_minimum(ami).lag

    if args.m is not None:
        m = args.m
    else:
        m_cap = max(2, (values.size - 1) // tau)
        cao = cao_dimension(values, tau, min(args.m_max, m_cap), threshold=args.cao_threshold)
        m = cao.dimension
        if not cao.saturated:
            print("warning: Cao E1 never saturated; reporting m_max", file=sys.stderr)

    write_matrix_csv(out / "ami.csv", np.column_stack([np.arange(1, max_lag + 1), ami]), header=["lag", "ami_nats"])
    embedded = delay_embed(values, tau, m)
    write_matrix_csv(out / "takens.csv", embedded)
    print(f"tau={tau} m={m} rows={embedded.shape[0]}")
    print(f"wrote {out / 'takens.csv'} and {out / 'ami.csv'}")
    return 0


def _cmd_reduce(args) -> int:
    data = load_matrix_csv(args.data)
    spec = ReducerSpec(method=args.method, target_dim=args.dim, k=args.k, regularization=args.regularization)
    embedding = make_embedding(data, spec)
    out = Path(args.out)
    write_matrix_csv(out / f"{args.method}.csv", embedding)
    print(f"wrote {out / f'{args.method}.csv'} ({embedding.shape[0]} x {embedding.shape[1]})")
    return 0


def _cmd_evaluate(args) -> int:
    x = load_matrix_csv(args.x)
    y = load_matrix_csv(args.y)
    report = evaluate(x, y, args.k)
    payload = json.dumps(report.globals_dict(), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return 0


def _cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        raw = json.load(fh)
    if args.seed is not None:
        raw["seed"] = args.seed
        raw.setdefault("dataset", {}).pop("seed", None)
    if args.out is not None:
        raw["output_dir"] = args.out
    raw.setdefault("sweep", {})
    if args.k_min is not None:
        raw["sweep"]["k_min"] = args.k_min
    if args.k_max is not None:
        raw["sweep"]["k_max"] = args.k_max
    if args.k is not None:
        raw["joint_k"] = args.k
    if args.dim is not None:
        raw["target_dim"] = args.dim
    if args.method is not None:
        wanted = [m.strip() for m in args.method.split(",") if m.strip()]
        raw["reducers"] = [
            r for r in raw.get("reducers", []) if (r if isinstance(r, str) else r.get("method")) in wanted
        ]
    config = load_config(raw)
    result = run_sweep_to_dir(config)
    failed = [c for c in result.cells if c.error is not None]
    if failed and len(failed) == len(result.cells):
        print(f"sweep failed numerically in every cell; first: ({failed[0].method}, k={failed[0].k})", file=sys.stderr)
        return 2
    print(f"wrote sweep outputs to {config.output_dir} ({len(result.cells)} cells, {len(failed)} failed)")
    return 0


def _cmd_correlate(args) -> int:
    out = Path(args.out)
    pooled = []
    for i, path in enumerate(args.sweeps):
        cells = read_sweep_csv(path)
        pooled.extend(cells)
        if len(args.sweeps) > 1:
            corr = correlation_report(cells)
            write_correlation_csv(corr, out / f"correlation_{i}.csv")
    corr = correlation_report(pooled)
    write_correlation_csv(corr, out / "correlation.csv")
    print(f"wrote {out / 'correlation.csv'} over {corr.n_samples} cells")
    for i, a in enumerate(corr.labels):
        for j, b in enumerate(corr.labels):
            if j <= i:
                continue
            text = format_float(corr.values[i, j]) if corr.defined[i, j] else "undefined"
            print(f"corr({a}, {b}) = {text}")
    return 0


def _cmd_joint(args) -> int:
    x = load_matrix_csv(args.x)
    y = load_matrix_csv(args.y)
    records = joint_export(x, y, args.k)
    out = Path(args.out)
    path = out / f"joint_{args.label}_k{args.k}.csv"
    write_joint_csv(records, path)
    print(f"wrote {path} ({len(records)} rows)")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "takens": _cmd_takens,
    "reduce": _cmd_reduce,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "correlate": _cmd_correlate,
    "joint": _cmd_joint,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
