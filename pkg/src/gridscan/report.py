"""Batch benchmarking: run a list of configurations, write a CSV report,
and render summary figures next to it.

A bench spec is a JSON file::

    {"runs": [
        {"name": "3d", "urg": {"n": 100000, "c": 10, "d": 3, "seed": 7},
         "eps": 60, "minpts": 20, "algos": ["grid-hgb", "gdpam"]},
        {"name": "small", "input": "points.csv",
         "eps": 1.0, "minpts": 4, "algo": "gdpam"}
    ]}

Each entry supplies either ``input`` (a point CSV) or ``urg`` (generator
parameters), plus eps/minpts and one ``algo`` or a list of ``algos``.
Datasets are cached across entries with identical sources. A failed run
is recorded in its row's ``error`` column and the batch continues.

The CSV feeds external plotters, but the report path also renders two
PNG figures alongside it: total wall time (versus input size where the
report covers multiple sizes) and merge-check counts per run.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .datagen import UrgConfig, generate_urg
from .io import ingest_csv
from .model import Dataset, validate_params
from .pipeline import ALGORITHMS, run_clustering

REPORT_COLUMNS = [
    "name", "algo", "n", "d", "eps", "minpts",
    "gridCount", "coreGridCount", "clusterCount", "noiseCount",
    "findCalls", "mergeChecks", "skippedBySameRoot", "skippedBySymmetry",
    "unions", "pairDistanceEvals",
    "prunedLabeling", "prunedMerging", "prunedAssignment",
    "partitionSeconds", "labelingSeconds", "mergingSeconds",
    "assignmentSeconds", "totalSeconds", "error",
]


def read_bench_spec(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    runs = spec.get("runs")
    if not isinstance(runs, list) or not runs:
        raise ValueError("bench spec must contain a non-empty 'runs' list")
    expanded = []
    for i, entry in enumerate(runs):
        if "input" not in entry and "urg" not in entry:
            raise ValueError(f"runs[{i}]: needs 'input' or 'urg'")
        if "eps" not in entry or "minpts" not in entry:
            raise ValueError(f"runs[{i}]: needs 'eps' and 'minpts'")
        algos = entry.get("algos") or [entry.get("algo", "gdpam")]
        for algo in algos:
            if algo not in ALGORITHMS:
                raise ValueError(f"runs[{i}]: unknown algorithm {algo!r}")
            expanded.append({**{k: v for k, v in entry.items()
                                if k not in ("algo", "algos")},
                             "algo": algo})
    return expanded


def _dataset_for(entry: dict, cache: dict) -> Dataset:
    if "input" in entry:
        key = ("input", str(entry["input"]))
        if key not in cache:
            cache[key] = ingest_csv(entry["input"])
        return cache[key]
    urg = entry["urg"]
    key = ("urg", tuple(sorted(urg.items())))
    if key not in cache:
        cache[key] = generate_urg(UrgConfig(**urg))
    return cache[key]


def run_bench(entries: list[dict], threads: int = 1,
              log=sys.stderr) -> list[dict]:
    """Execute the expanded run list; one result row per entry."""
    rows: list[dict] = []
    cache: dict = {}
    for entry in entries:
        name = entry.get("name", entry.get("input", "urg"))
        row = {c: "" for c in REPORT_COLUMNS}
        row["name"] = name
        row["algo"] = entry["algo"]
        try:
            ds = _dataset_for(entry, cache)
            params = validate_params(float(entry["eps"]), int(entry["minpts"]),
                                     max(ds.d, 1))
            _, stats = run_clustering(ds, params, entry["algo"], threads=threads)
            counters = stats.counters.to_dict()
            row.update({
                "n": stats.n, "d": stats.d, "eps": stats.eps,
                "minpts": stats.minpts,
                "gridCount": stats.grid_count,
                "coreGridCount": stats.core_grid_count,
                "clusterCount": stats.cluster_count,
                "noiseCount": stats.noise_count,
                **counters,
                "prunedLabeling": stats.pruned_corners.get("labeling", 0),
                "prunedMerging": stats.pruned_corners.get("merging", 0),
                "prunedAssignment": stats.pruned_corners.get("assignment", 0),
                "partitionSeconds": round(stats.phase_seconds["partition"], 6),
                "labelingSeconds": round(stats.phase_seconds["labeling"], 6),
                "mergingSeconds": round(stats.phase_seconds["merging"], 6),
                "assignmentSeconds": round(stats.phase_seconds["assignment"], 6),
                "totalSeconds": round(stats.phase_seconds["total"], 6),
            })
            if log is not None:
                print(f"[bench] {name}/{entry['algo']}: n={stats.n} d={stats.d} "
                      f"clusters={stats.cluster_count} "
                      f"checks={counters['mergeChecks']} "
                      f"time={row['totalSeconds']}s", file=log)
        except Exception as exc:  # record and continue with the batch
            row["error"] = f"{type(exc).__name__}: {exc}"
            if log is not None:
                print(f"[bench] {name}/{entry['algo']}: FAILED ({row['error']})",
                      file=log)
        rows.append(row)
    return rows


def write_report_csv(path: str | Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def render_report_figures(rows: list[dict], report_path: str | Path) -> list[Path]:
    """Render summary figures next to the report CSV; returns their paths."""
    report_path = Path(report_path)
    ok = [r for r in rows if not r["error"]]
    written: list[Path] = []
    if not ok:
        return written

    groups: dict[tuple, list[dict]] = {}
    for r in ok:
        groups.setdefault((r["algo"], r["d"]), []).append(r)

    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    multisize = any(len({r["n"] for r in g}) > 1 for g in groups.values())
    if multisize:
        for (algo, d), g in sorted(groups.items(), key=lambda kv: str(kv[0])):
            g = sorted(g, key=lambda r: r["n"])
            ax.plot([r["n"] for r in g], [r["totalSeconds"] for r in g],
                    marker="o", label=f"{algo} (d={d})")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("points")
        ax.set_ylabel("total seconds")
        ax.legend(fontsize=8)
    else:
        names = [f"{r['name']}\n{r['algo']}" for r in ok]
        ax.bar(range(len(ok)), [r["totalSeconds"] for r in ok])
        ax.set_xticks(range(len(ok)), names, fontsize=7)
        ax.set_ylabel("total seconds")
    ax.set_title("clustering wall time")
    fig.tight_layout()
    time_path = report_path.with_name(report_path.stem + "_time.png")
    fig.savefig(time_path, dpi=130)
    plt.close(fig)
    written.append(time_path)

    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    names = [f"{r['name']}\n{r['algo']}" for r in ok]
    checks = [max(int(r["mergeChecks"] or 0), 0) for r in ok]
    ax.bar(range(len(ok)), checks)
    ax.set_xticks(range(len(ok)), names, fontsize=7)
    ax.set_ylabel("merge checks")
    if any(c > 0 for c in checks):
        ax.set_yscale("symlog")
    ax.set_title("merge-check operations")
    fig.tight_layout()
    checks_path = report_path.with_name(report_path.stem + "_merge_checks.png")
    fig.savefig(checks_path, dpi=130)
    plt.close(fig)
    written.append(checks_path)
    return written
