"""Final per-point labels: cluster ids for core points, border or noise
for everything else.

Cluster ids are dense, starting at 1, assigned in order of first
appearance while scanning core grids ascending (equivalently: components
ordered by their lowest core grid id). Noise is encoded as cluster 0. A
non-core point joins the cluster of the first core point within eps,
taking candidate cells in ascending grid-id order and point ids
ascending within a cell, which pins the classic border ambiguity to a
reproducible choice.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .grid import GridRegistry, segment_indices
from .hgb import HyperGridBitmap
from .labeling import SCAN_CHUNK, CoreLabels, pruned_neighbours_fn
from .merging import ClusterForest

NOISE = 0


@dataclass
class ClusterLabeling:
    """label[i] is the cluster id of point i (0 = noise); is_border marks
    non-core members of clusters."""

    label: np.ndarray
    is_border: np.ndarray
    cluster_count: int

    @property
    def noise_count(self) -> int:
        return int((self.label == NOISE).sum())


def extract_clusters(forest: ClusterForest, labels: CoreLabels,
                     reg: GridRegistry) -> tuple[ClusterLabeling, np.ndarray]:
    """Number the forest components and label every core point.

    Returns the partial labeling plus the per-grid cluster table
    (indexed by gid, 0 for non-core grids) used by border assignment.
    """
    n = reg.dataset.n
    label = np.zeros(n, dtype=np.int64)
    is_border = np.zeros(n, dtype=bool)
    grid_cluster = np.zeros(reg.grid_count + 1, dtype=np.int64)

    cluster_of_root: dict[int, int] = {}
    for g in labels.core_grid_ids:
        g = int(g)
        root = forest.component_of(g)
        cid = cluster_of_root.get(root)
        if cid is None:
            cid = len(cluster_of_root) + 1
            cluster_of_root[root] = cid
        grid_cluster[g] = cid
        members = reg.members_of(g)
        core_members = members[labels.core_point[members]]
        label[core_members] = cid

    partial = ClusterLabeling(label, is_border, len(cluster_of_root))
    return partial, grid_cluster


class _CoreLayout:
    """Core points grouped by grid, mirroring the registry's flat layout:
    contiguous per-grid slices of coordinates plus each slice's cluster id
    repeated per point, so a candidate scan is one gather away."""

    def __init__(self, reg: GridRegistry, labels: CoreLabels,
                 grid_cluster: np.ndarray) -> None:
        flags = labels.core_point[reg.flat_members]
        keep = np.flatnonzero(flags)
        self.coords = reg.sorted_coords[keep]
        grid_sizes = np.add.reduceat(flags.astype(np.int64),
                                     reg.member_starts[:-1]) \
            if reg.grid_count else np.zeros(0, dtype=np.int64)
        self.starts = np.concatenate(([0], np.cumsum(grid_sizes)))
        self.counts = grid_sizes
        self.cluster_by_row = np.repeat(
            grid_cluster[1:], grid_sizes) if reg.grid_count else \
            np.zeros(0, dtype=np.int64)

    def rows_for(self, gids: np.ndarray) -> np.ndarray:
        idx = gids - 1
        counts = self.counts[idx]
        nonzero = counts > 0
        return segment_indices(self.starts[idx][nonzero], counts[nonzero])


def _assign_chunk(gids: np.ndarray, reg: GridRegistry,
                  index: HyperGridBitmap | None, eps: float,
                  labels: CoreLabels, core_layout: _CoreLayout
                  ) -> tuple[list[np.ndarray], list[np.ndarray], int]:
    """Border labels for the non-core members of a chunk of grids.

    Candidate core points arrive ordered by ascending grid id (point id
    ascending within a grid), so the first within-eps hit realizes the
    lowest-grid-id tie-break exactly.
    """
    pruned = [0]
    neighbours = pruned_neighbours_fn(reg, index, eps, pruned)
    coords = reg.dataset.coords
    core_point = labels.core_point
    eps_sq = eps * eps
    ids_out: list[np.ndarray] = []
    lab_out: list[np.ndarray] = []
    for gid in gids:
        gid = int(gid)
        members = reg.members_of(gid)
        targets = members[~core_point[members]]
        if targets.size == 0:
            continue
        assigned = np.zeros(targets.size, dtype=np.int64)
        # Own cell competes at its own position in the ascending id order.
        cells = np.sort(np.append(neighbours(gid), gid))
        cells = cells[labels.core_grid[cells - 1]]
        if cells.size:
            pt_rows = core_layout.rows_for(cells)
            rows = coords[targets]
            undecided = np.arange(targets.size)
            for start in range(0, pt_rows.size, SCAN_CHUNK):
                chunk = pt_rows[start:start + SCAN_CHUNK]
                block = core_layout.coords[chunk]
                diff = rows[undecided, None, :] - block[None, :, :]
                hits = (diff * diff).sum(axis=2) <= eps_sq
                hit_any = hits.any(axis=1)
                if hit_any.any():
                    first = hits[hit_any].argmax(axis=1)
                    winners = undecided[hit_any]
                    assigned[winners] = core_layout.cluster_by_row[chunk[first]]
                    undecided = undecided[~hit_any]
                    if undecided.size == 0:
                        break
        ids_out.append(targets)
        lab_out.append(assigned)
    return ids_out, lab_out, pruned[0]


def assign_borders_and_noise(partial: ClusterLabeling, reg: GridRegistry,
                             index: HyperGridBitmap | None, labels: CoreLabels,
                             eps: float, grid_cluster: np.ndarray, *,
                             threads: int = 1,
                             pruned_counter: list[int] | None = None
                             ) -> ClusterLabeling:
    """Classify every non-core point as border (with a cluster id) or noise.

    Candidate cells are the point's own cell plus its corner-pruned
    neighbours, visited in ascending grid-id order; the first cell
    holding a core point within eps decides the label. Points with no
    such core point stay at cluster 0.
    """
    if reg.grid_count == 0:
        return partial
    has_noncore = (~labels.core_point[reg.flat_members]).astype(np.int64)
    per_grid = np.add.reduceat(has_noncore, reg.member_starts[:-1])
    gids_with_noncore = np.flatnonzero(per_grid).astype(np.int64) + 1
    if gids_with_noncore.size == 0:
        return partial

    core_layout = _CoreLayout(reg, labels, grid_cluster)
    if threads > 1 and gids_with_noncore.size > 1:
        chunks = np.array_split(gids_with_noncore,
                                min(threads * 4, gids_with_noncore.size))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda ch: _assign_chunk(ch, reg, index, eps, labels,
                                         core_layout),
                chunks))
    else:
        results = [_assign_chunk(gids_with_noncore, reg, index, eps,
                                 labels, core_layout)]

    for ids_out, lab_out, pruned in results:
        for targets, assigned in zip(ids_out, lab_out):
            partial.label[targets] = assigned
            partial.is_border[targets[assigned != NOISE]] = True
        if pruned_counter is not None:
            pruned_counter[0] += pruned
    return partial
