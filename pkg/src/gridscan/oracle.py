"""Reference O(n^2) DBSCAN used as the correctness oracle.

Clusters are built over core points only (connected components of the
core-to-core eps graph, expanded in ascending point-id order); border
points then receive the full set of admissible clusters rather than a
single choice, which sidesteps the expansion-order ambiguity of the
classic formulation. Quadratic in both time and memory (the boolean
adjacency matrix is kept) - a test fixture for n up to about 5000, not
a production path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .assignment import NOISE, ClusterLabeling
from .model import Dataset, Params


@dataclass
class OracleResult:
    """Exact DBSCAN facts for one dataset/parameter combination.

    partition[i] is the cluster id of core point i (0 for non-core);
    border_candidates maps each non-core, non-noise point to every
    cluster owning a core point within eps; border_label holds the
    deterministic choice (cluster of the lowest-id qualifying core
    point) used when the oracle itself must emit a labeling.
    """

    core: np.ndarray
    partition: np.ndarray
    noise_ids: np.ndarray
    border_candidates: dict[int, frozenset[int]] = field(default_factory=dict)
    border_label: dict[int, int] = field(default_factory=dict)
    cluster_count: int = 0


def _within_eps_matrix(coords: np.ndarray, eps_sq: float,
                       block_rows: int = 512) -> np.ndarray:
    n = coords.shape[0]
    within = np.empty((n, n), dtype=bool)
    for start in range(0, n, block_rows):
        stop = min(start + block_rows, n)
        diff = coords[start:stop, None, :] - coords[None, :, :]
        within[start:stop] = (diff * diff).sum(axis=2) <= eps_sq
    return within


def dbscan_bruteforce(ds: Dataset, params: Params) -> OracleResult:
    """Exact DBSCAN by pairwise counting and BFS over core-core links."""
    n = ds.n
    core = np.zeros(n, dtype=bool)
    labels = np.zeros(n, dtype=np.int64)
    if n == 0:
        return OracleResult(core, labels, np.empty(0, dtype=np.int64))

    within = _within_eps_matrix(ds.coords, params.eps_sq)
    counts = within.sum(axis=1)          # diagonal is True: self counts
    core = counts >= params.minpts

    cluster = 0
    for seed in np.flatnonzero(core):
        if labels[seed] != 0:
            continue
        cluster += 1
        labels[seed] = cluster
        queue = deque([int(seed)])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(within[i] & core):
                if labels[j] == 0:
                    labels[j] = cluster
                    queue.append(int(j))

    border_candidates: dict[int, frozenset[int]] = {}
    border_label: dict[int, int] = {}
    noise: list[int] = []
    for i in np.flatnonzero(~core):
        near_cores = np.flatnonzero(within[i] & core)
        if near_cores.size == 0:
            noise.append(int(i))
        else:
            border_candidates[int(i)] = frozenset(
                int(labels[j]) for j in near_cores)
            border_label[int(i)] = int(labels[near_cores[0]])

    return OracleResult(core, labels, np.array(sorted(noise), dtype=np.int64),
                        border_candidates, border_label, cluster)


def labeling_from_oracle(o: OracleResult) -> ClusterLabeling:
    """Materialize the oracle's deterministic labeling (borders take the
    cluster of the lowest-id core point within eps)."""
    label = o.partition.copy()
    is_border = np.zeros(label.size, dtype=bool)
    for i, cid in o.border_label.items():
        label[i] = cid
        is_border[i] = True
    return ClusterLabeling(label, is_border, o.cluster_count)


def _mismatch(a: ClusterLabeling, o: OracleResult) -> str | None:
    """Reason the labeling disagrees with the oracle, or None if it agrees."""
    a_core = (a.label != NOISE) & ~a.is_border
    if not np.array_equal(a_core, o.core):
        return "core sets differ"
    a_noise = np.flatnonzero(a.label == NOISE)
    if not np.array_equal(a_noise, o.noise_ids):
        return "noise sets differ"

    fwd: dict[int, int] = {}
    rev: dict[int, int] = {}
    for i in np.flatnonzero(o.core):
        oc, ac = int(o.partition[i]), int(a.label[i])
        if fwd.setdefault(ac, oc) != oc or rev.setdefault(oc, ac) != ac:
            return f"core partitions are not bijective (point {i})"

    for i in np.flatnonzero(a.is_border):
        cands = o.border_candidates.get(int(i))
        if cands is None:
            return f"point {i} labeled border but oracle has no candidates"
        if fwd.get(int(a.label[i])) not in cands:
            return f"border point {i} assigned an inadmissible cluster"
    return None


def equivalent(a: ClusterLabeling, o: OracleResult) -> bool:
    """True iff core sets match, core partitions are bijective, noise
    sets match, and every border label is admissible."""
    return _mismatch(a, o) is None
