"""Core-object and core-grid identification.

A point is core when its eps-neighbourhood (itself included) holds at
least minpts points. A grid is core when it has at least minpts members
or contains at least one core point. Grids that already hold minpts
members are labelled without a single distance computation: the cell
width guarantees every same-cell pair is within eps.

The bulk path scans each small grid's candidate points (gathered from
the corner-pruned neighbour cells in ascending grid-id order) in fixed
chunks, stopping once every member has reached minpts; chunking changes
nothing observable because a member is core iff its full count would
reach the threshold.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import GridRegistry, segment_indices
from .hgb import HyperGridBitmap, corner_prune, naive_box, query_box
from .model import Params, Point, sq_dists_to

NeighbourFn = Callable[[int], np.ndarray]

SCAN_CHUNK = 4096


@dataclass
class CoreLabels:
    """Per-point and per-grid core flags.

    core_grid is indexed by gid - 1; core_grid_ids lists core grids in
    ascending id order and core_count is its length.
    """

    core_point: np.ndarray
    core_grid: np.ndarray
    core_grid_ids: np.ndarray
    core_count: int


def pruned_neighbours_fn(reg: GridRegistry, index: HyperGridBitmap | None,
                         eps: float,
                         pruned_counter: list[int] | None = None) -> NeighbourFn:
    """Neighbour provider: box query (bitmap, or linear scan when index
    is None) followed by the corner filter. Returns ascending candidate
    grid ids, excluding the queried grid itself. Optionally accumulates
    the number of corner-pruned cells into pruned_counter[0]."""

    def neighbours(gid: int) -> np.ndarray:
        cell = reg.coord_of(gid)
        if index is not None:
            cand = index.bits_to_ids(query_box(index, cell))
        else:
            cand = naive_box(reg, cell)
        kept = corner_prune(reg, cell, cand, eps)
        if pruned_counter is not None:
            pruned_counter[0] += int(cand.size - 1 - kept.size)
        return kept

    return neighbours


def eps_neighbour_count(p: Point, reg: GridRegistry, index: HyperGridBitmap,
                        eps: float, cap: int | None = None) -> int:
    """Count points within eps of p (p itself included).

    Counts p's own cell wholesale (same-cell distances never exceed
    eps), then scans the corner-pruned neighbour cells in ascending
    grid-id order. With a cap, returns as soon as the running count
    reaches it; the returned value is then the first partial sum >= cap.
    """
    cell = reg.locate_point(p.coords)
    gid = reg.gid_of(cell)
    if gid is None:
        raise ValueError(f"point {p.id} does not fall in any occupied cell")
    count = int(reg.members_of(gid).size)
    if cap is not None and count >= cap:
        return count
    eps_sq = eps * eps
    coords = reg.dataset.coords
    for nb in pruned_neighbours_fn(reg, index, eps)(gid):
        block = coords[reg.members_of(int(nb))]
        count += int((sq_dists_to(p.coords, block) <= eps_sq).sum())
        if cap is not None and count >= cap:
            return count
    return count


def _label_chunk(gids: np.ndarray, reg: GridRegistry,
                 index: HyperGridBitmap | None, eps: float, minpts: int
                 ) -> tuple[list[np.ndarray], list[np.ndarray], int]:
    """Core flags for members of grids holding fewer than minpts points.

    Pure function of immutable inputs, safe to run on worker threads;
    returns its own pruned-cell tally.
    """
    pruned = [0]
    neighbours = pruned_neighbours_fn(reg, index, eps, pruned)
    eps_sq = eps * eps
    coords = reg.dataset.coords
    sorted_coords = reg.sorted_coords
    ids_out: list[np.ndarray] = []
    flags_out: list[np.ndarray] = []
    for gid in gids:
        gid = int(gid)
        member_ids = reg.members_of(gid)
        counts = np.full(member_ids.size, member_ids.size, dtype=np.int64)
        cand = neighbours(gid)
        if cand.size:
            rows = coords[member_ids]
            pt_rows = reg.member_rows(cand)
            alive = np.arange(member_ids.size)
            for start in range(0, pt_rows.size, SCAN_CHUNK):
                block = sorted_coords[pt_rows[start:start + SCAN_CHUNK]]
                diff = rows[alive, None, :] - block[None, :, :]
                counts[alive] += ((diff * diff).sum(axis=2) <= eps_sq).sum(axis=1)
                alive = alive[counts[alive] < minpts]
                if alive.size == 0:
                    break
        ids_out.append(member_ids)
        flags_out.append(counts >= minpts)
    return ids_out, flags_out, pruned[0]


def label_cores(reg: GridRegistry, index: HyperGridBitmap | None, params: Params,
                *, threads: int = 1,
                pruned_counter: list[int] | None = None) -> CoreLabels:
    """Identify core points and core grids.

    Grids with >= minpts members short-circuit (all members core); the
    rest count neighbours per member with early termination at minpts.
    Grids are scanned in ascending id order, and chunk results are
    merged in chunk order, so output and prune tallies do not depend on
    the thread count. Pass index=None to fall back to linear-scan
    neighbour queries.
    """
    n, ng = reg.dataset.n, reg.grid_count
    core_point = np.zeros(n, dtype=bool)
    core_grid = np.zeros(ng, dtype=bool)
    if ng == 0:
        return CoreLabels(core_point, core_grid, np.empty(0, dtype=np.int64), 0)

    big = reg.member_counts >= params.minpts
    core_grid[big] = True
    for idx in np.flatnonzero(big):
        core_point[reg.members[idx]] = True

    small_gids = np.flatnonzero(~big).astype(np.int64) + 1
    if small_gids.size:
        if threads > 1 and small_gids.size > 1:
            chunks = np.array_split(small_gids, min(threads * 4, small_gids.size))
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(
                    lambda ch: _label_chunk(ch, reg, index, params.eps,
                                            params.minpts),
                    chunks))
        else:
            results = [_label_chunk(small_gids, reg, index, params.eps,
                                    params.minpts)]
        for ids_out, flags_out, pruned in results:
            for member_ids, flags in zip(ids_out, flags_out):
                core_point[member_ids] = flags
            if pruned_counter is not None:
                pruned_counter[0] += pruned
        for idx in np.flatnonzero(~big):
            if core_point[reg.members[idx]].any():
                core_grid[idx] = True

    core_grid_ids = np.flatnonzero(core_grid).astype(np.int64) + 1
    return CoreLabels(core_point, core_grid, core_grid_ids, int(core_grid_ids.size))
