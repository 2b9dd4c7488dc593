"""Cluster-forest construction over core grids.

Two core grids merge when they contain core points within eps of each
other. The merge pass walks core grids in ascending id order and their
core neighbours likewise, skipping the lower-id direction of every pair
(symmetric duplicates) and any pair whose forest roots already agree
(transitive duplicates). Only the surviving pairs pay for an
object-level distance check.

The pass is deliberately single-threaded: the root-equality skip reads
forest state mutated by earlier unions, so the counter values are only
meaningful under sequential execution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridRegistry
from .labeling import CoreLabels, NeighbourFn


@dataclass
class MergeCounters:
    """Operation tallies for the merge pass."""

    find_calls: int = 0
    merge_checks: int = 0
    skipped_by_same_root: int = 0
    skipped_by_symmetry: int = 0
    unions: int = 0
    pair_distance_evals: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "findCalls": self.find_calls,
            "mergeChecks": self.merge_checks,
            "skippedBySameRoot": self.skipped_by_same_root,
            "skippedBySymmetry": self.skipped_by_symmetry,
            "unions": self.unions,
            "pairDistanceEvals": self.pair_distance_evals,
        }


class ClusterForest:
    """Union-find over core grid ids with path compression and union by
    rank. Rank ties attach the second argument's root under the first's."""

    def __init__(self, core_grid_ids: np.ndarray | list[int],
                 counters: MergeCounters | None = None) -> None:
        ids = [int(g) for g in core_grid_ids]
        self.grid_ids = ids
        self._slot = {g: i for i, g in enumerate(ids)}
        self._parent = list(range(len(ids)))
        self._rank = [0] * len(ids)
        self.counters = counters if counters is not None else MergeCounters()

    def _slot_of(self, gid: int) -> int:
        try:
            return self._slot[gid]
        except KeyError:
            raise ValueError(f"grid {gid} is not a core grid") from None

    def _resolve(self, slot: int) -> int:
        """Root slot with full path compression; no counter side effects."""
        parent = self._parent
        root = slot
        while parent[root] != root:
            root = parent[root]
        while parent[slot] != root:
            parent[slot], slot = root, parent[slot]
        return root

    def find(self, gid: int) -> int:
        """Representative core grid id of gid's tree; counted."""
        self.counters.find_calls += 1
        return self.grid_ids[self._resolve(self._slot_of(gid))]

    def union(self, g1: int, g2: int) -> None:
        """Merge the trees of g1 and g2 (idempotent on same-root input)."""
        r1 = self._resolve(self._slot_of(g1))
        r2 = self._resolve(self._slot_of(g2))
        self.counters.find_calls += 2
        if r1 == r2:
            return
        rank = self._rank
        if rank[r1] < rank[r2]:
            r1, r2 = r2, r1
        elif rank[r1] == rank[r2]:
            rank[r1] += 1
        self._parent[r2] = r1
        self.counters.unions += 1

    def parent_of(self, gid: int) -> int:
        """Immediate parent grid id (itself when gid is a root)."""
        return self.grid_ids[self._parent[self._slot_of(gid)]]

    def roots(self) -> list[int]:
        """Root grid ids, ascending."""
        return sorted(self.grid_ids[i] for i, p in enumerate(self._parent) if p == i)

    def root_count(self) -> int:
        return sum(1 for i, p in enumerate(self._parent) if p == i)

    def component_of(self, gid: int) -> int:
        """Root grid id without touching the find counter (post-merge reads)."""
        return self.grid_ids[self._resolve(self._slot_of(gid))]


def core_member_coords(reg: GridRegistry, labels: CoreLabels) -> dict[int, np.ndarray]:
    """Coordinates of each core grid's core members, ascending point id."""
    coords = reg.dataset.coords
    out: dict[int, np.ndarray] = {}
    for gid in labels.core_grid_ids:
        gid = int(gid)
        members = reg.members_of(gid)
        out[gid] = coords[members[labels.core_point[members]]]
    return out


def merge_check(reg: GridRegistry, labels: CoreLabels, g1: int, g2: int,
                eps: float, counters: MergeCounters | None = None,
                core_coords: dict[int, np.ndarray] | None = None) -> bool:
    """True iff some core-point pair across the two grids is within eps.

    Scans g1's core members in ascending point-id order against g2's
    block and stops at the first qualifying pair; the distance-eval
    counter reflects exactly the comparisons performed.
    """
    if core_coords is None:
        core_coords = core_member_coords(reg, labels)
    p_block = core_coords[int(g1)]
    q_block = core_coords[int(g2)]
    if counters is not None:
        counters.merge_checks += 1
    if p_block.size == 0 or q_block.size == 0:
        return False
    eps_sq = eps * eps
    for row in p_block:
        diff = q_block - row
        hits = (diff * diff).sum(axis=1) <= eps_sq
        if hits.any():
            if counters is not None:
                counters.pair_distance_evals += int(np.argmax(hits)) + 1
            return True
        if counters is not None:
            counters.pair_distance_evals += q_block.shape[0]
    return False


def merge_step(reg: GridRegistry, labels: CoreLabels, eps: float,
               neighbours: NeighbourFn, *, find_skip: bool = True) -> ClusterForest:
    """Build the cluster forest over core grids.

    For each core grid g (ascending id) and each core neighbour g' from
    the corner-pruned box: neighbours with g' < g are symmetric
    duplicates; with find_skip, pairs already sharing a root are
    transitive duplicates; everything else runs a merge check and a
    union on success. find_skip=False is the plain-indexing baseline:
    the identical loop with the root-equality test disabled.
    """
    forest = ClusterForest(labels.core_grid_ids)
    counters = forest.counters
    core_coords = core_member_coords(reg, labels)
    core_grid = labels.core_grid
    eps_val = float(eps)

    for g in labels.core_grid_ids:
        g = int(g)
        cand = neighbours(g)
        if cand.size == 0:
            continue
        core_cand = cand[core_grid[cand - 1]]
        if core_cand.size == 0:
            continue
        higher = core_cand[core_cand > g]
        counters.skipped_by_symmetry += int(core_cand.size - higher.size)
        for g2 in higher.tolist():
            if find_skip and forest.find(g) == forest.find(g2):
                counters.skipped_by_same_root += 1
                continue
            if merge_check(reg, labels, g, g2, eps_val, counters, core_coords):
                forest.union(g, g2)
    return forest
