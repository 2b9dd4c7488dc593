"""End-to-end clustering pipeline and run statistics.

Four selectable engines:

- ``bruteforce``: the quadratic reference implementation.
- ``grid-naive``: grid pipeline with linear-scan neighbour queries and
  no root-equality skip in the merge pass.
- ``grid-hgb``: bitmap-indexed neighbour queries, still no root skip.
- ``gdpam``: bitmap queries plus the full merge management (symmetry
  and root-equality skips).

The labeling and assignment phases accept a thread budget; merging is
sequential by contract.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .assignment import ClusterLabeling, assign_borders_and_noise, extract_clusters
from .grid import partition
from .hgb import build_hgb
from .labeling import label_cores, pruned_neighbours_fn
from .merging import MergeCounters, merge_step
from .model import Dataset, Params
from .oracle import dbscan_bruteforce, labeling_from_oracle

ALGORITHMS = ("bruteforce", "grid-naive", "grid-hgb", "gdpam")


@dataclass
class RunStats:
    """Sizes, counters and phase timings of one clustering run."""

    algo: str
    n: int
    d: int
    eps: float
    minpts: int
    grid_count: int = 0
    core_grid_count: int = 0
    cluster_count: int = 0
    noise_count: int = 0
    counters: MergeCounters = field(default_factory=MergeCounters)
    pruned_corners: dict[str, int] = field(default_factory=dict)
    phase_seconds: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self, include_timings: bool = False) -> dict:
        out: dict = {
            "algo": self.algo,
            "n": self.n,
            "d": self.d,
            "eps": self.eps,
            "minpts": self.minpts,
            "gridCount": self.grid_count,
            "coreGridCount": self.core_grid_count,
            "clusterCount": self.cluster_count,
            "noiseCount": self.noise_count,
            "counters": self.counters.to_dict(),
            "prunedCorners": dict(self.pruned_corners),
        }
        if include_timings:
            out["phaseSeconds"] = {k: round(v, 6)
                                   for k, v in self.phase_seconds.items()}
        return out


def run_clustering(ds: Dataset, params: Params, algo: str = "gdpam",
                   threads: int = 1) -> tuple[ClusterLabeling, RunStats]:
    """Cluster a dataset with the selected engine."""
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    stats = RunStats(algo=algo, n=ds.n, d=ds.d, eps=params.eps,
                     minpts=params.minpts)
    phases = stats.phase_seconds
    t0 = time.perf_counter()

    if algo == "bruteforce":
        oracle = dbscan_bruteforce(ds, params)
        labeling = labeling_from_oracle(oracle)
        for name in ("partition", "labeling", "merging", "assignment"):
            phases[name] = 0.0
        stats.pruned_corners = {"labeling": 0, "merging": 0, "assignment": 0}
        stats.cluster_count = labeling.cluster_count
        stats.noise_count = labeling.noise_count
        phases["total"] = time.perf_counter() - t0
        return labeling, stats

    use_hgb = algo in ("grid-hgb", "gdpam")
    find_skip = algo == "gdpam"

    t = time.perf_counter()
    reg = partition(ds, params)
    index = build_hgb(reg) if use_hgb else None
    phases["partition"] = time.perf_counter() - t
    stats.grid_count = reg.grid_count

    t = time.perf_counter()
    pruned_label = [0]
    labels = label_cores(reg, index, params, threads=threads,
                         pruned_counter=pruned_label)
    phases["labeling"] = time.perf_counter() - t
    stats.core_grid_count = labels.core_count

    t = time.perf_counter()
    pruned_merge = [0]
    neighbours = pruned_neighbours_fn(reg, index, params.eps, pruned_merge)
    forest = merge_step(reg, labels, params.eps, neighbours, find_skip=find_skip)
    phases["merging"] = time.perf_counter() - t
    stats.counters = forest.counters

    t = time.perf_counter()
    pruned_assign = [0]
    partial, grid_cluster = extract_clusters(forest, labels, reg)
    labeling = assign_borders_and_noise(partial, reg, index, labels, params.eps,
                                        grid_cluster, threads=threads,
                                        pruned_counter=pruned_assign)
    phases["assignment"] = time.perf_counter() - t

    stats.pruned_corners = {
        "labeling": pruned_label[0],
        "merging": pruned_merge[0],
        "assignment": pruned_assign[0],
    }
    stats.cluster_count = labeling.cluster_count
    stats.noise_count = labeling.noise_count
    phases["total"] = time.perf_counter() - t0
    return labeling, stats
