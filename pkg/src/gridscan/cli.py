"""Command-line interface.

Subcommands:

- ``cluster``: ingest a point file, run the selected engine, write one
  ``pointId,clusterId,flag`` line per point (stdout by default) and an
  optional stats JSON.
- ``generate``: write a synthetic clustered dataset (and optional
  generator-label sidecar).
- ``bench``: execute a JSON run specification, write a CSV report and
  summary figures.

Exit codes: 0 success, 1 I/O or parse failure, 2 invalid parameters or
usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datagen import UrgConfig, generate_urg_labeled
from .io import (CsvFormatError, ingest_csv, write_generator_labels,
                 write_labeling, write_labeling_file, write_points_csv,
                 write_stats_json)
from .model import validate_params
from .pipeline import ALGORITHMS, run_clustering
from .report import (read_bench_spec, render_report_figures, run_bench,
                     write_report_csv)

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridscan",
        description="Exact grid-based DBSCAN with bitmap neighbour queries "
                    "and union-find merge pruning.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a point file")
    p.add_argument("--input", required=True, help="point CSV to cluster")
    p.add_argument("--eps", type=float, required=True,
                   help="neighbourhood radius")
    p.add_argument("--minpts", type=int, required=True,
                   help="minimum neighbourhood size (point itself included)")
    p.add_argument("--algo", choices=ALGORITHMS, default="gdpam")
    p.add_argument("--output", help="labeling file (default: stdout)")
    p.add_argument("--stats", help="write run statistics JSON here")
    p.add_argument("--threads", type=int, default=1,
                   help="thread budget for labeling/assignment")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock phase times in the stats JSON "
                        "(off by default so stats are byte-reproducible)")

    p = sub.add_parser("generate", help="emit a synthetic clustered dataset")
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--c", type=int, required=True, help="number of clusters")
    p.add_argument("--d", type=int, required=True, help="dimension")
    p.add_argument("--pnoise", type=float, default=0.000005,
                   help="uniform-noise fraction (default 0.000005)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=25.0,
                   help="cluster spread around each walker")
    p.add_argument("--range-min", type=float, default=0.0)
    p.add_argument("--range-max", type=float, default=10000.0)
    p.add_argument("--output", required=True, help="point CSV to write")
    p.add_argument("--labels", help="optional generator-label sidecar file")

    p = sub.add_parser("bench", help="run a benchmark specification")
    p.add_argument("--spec", required=True, help="bench spec JSON")
    p.add_argument("--report", help="report CSV path "
                                    "(default: <spec stem>_report.csv)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-plots", action="store_true",
                   help="skip rendering the summary figures")
    return parser


def _cmd_cluster(args: argparse.Namespace) -> int:
    ds = ingest_csv(args.input)
    params = validate_params(args.eps, args.minpts, max(ds.d, 1))
    if args.threads < 1:
        raise ValueError("threads must be at least 1")
    labeling, stats = run_clustering(ds, params, args.algo,
                                     threads=args.threads)
    if args.output:
        write_labeling_file(args.output, labeling)
    else:
        write_labeling(sys.stdout, labeling)
    if args.stats:
        write_stats_json(args.stats, stats.to_json_dict(args.timings))
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    cfg = UrgConfig(n=args.n, c=args.c, d=args.d, pnoise=args.pnoise,
                    seed=args.seed, low=args.range_min, high=args.range_max,
                    sigma=args.sigma)
    ds, labels = generate_urg_labeled(cfg)
    write_points_csv(args.output, ds)
    if args.labels:
        write_generator_labels(args.labels, labels)
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    entries = read_bench_spec(args.spec)
    if args.threads < 1:
        raise ValueError("threads must be at least 1")
    report_path = Path(args.report) if args.report else \
        Path(args.spec).with_name(Path(args.spec).stem + "_report.csv")
    rows = run_bench(entries, threads=args.threads)
    write_report_csv(report_path, rows)
    print(f"[bench] report written to {report_path}", file=sys.stderr)
    if not args.no_plots:
        for fig_path in render_report_figures(rows, report_path):
            print(f"[bench] figure written to {fig_path}", file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "cluster": _cmd_cluster,
        "generate": _cmd_generate,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except (CsvFormatError, OSError, json.JSONDecodeError) as exc:
        print(f"gridscan: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"gridscan: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
