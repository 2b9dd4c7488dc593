"""Partitioning of a dataset into hypercubic cells of side eps/sqrt(d).

The lattice is anchored at the dataset's per-dimension minima, so cell
coordinates are small non-negative integers regardless of the data
range. Cells are half-open intervals [lo, hi): a point sitting exactly
on a boundary belongs to the higher-indexed cell. Only occupied cells
are materialized; they receive dense ids 1..N_g in order of first
appearance in the point stream.
"""

from __future__ import annotations

import math

import numpy as np

from .model import Dataset, Params

CellCoord = tuple[int, ...]


def cell_width(eps: float, d: int) -> float:
    """Side length eps/sqrt(d) that caps the same-cell point distance at eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return eps / math.sqrt(d)


def locate(coords: np.ndarray, origin: np.ndarray, width: float) -> CellCoord:
    """Lattice coordinate of a point: floor((x - origin) / width) per axis."""
    if width <= 0:
        raise ValueError("width must be positive")
    coords = np.asarray(coords, dtype=np.float64)
    origin = np.asarray(origin, dtype=np.float64)
    if coords.shape != origin.shape:
        raise ValueError("origin dimension must match the point")
    pos = np.floor((coords - origin) / width).astype(np.int64)
    return tuple(int(v) for v in pos)


class GridRegistry:
    """Occupied cells of a partitioned dataset.

    Grid ids are dense, 1-based, and stable: id k corresponds to row
    k - 1 of `cell_coords`. Member point ids are stored grid-by-grid in
    one flat array (`flat_members` with `member_starts` offsets), each
    grid's slice ascending; `sorted_coords` carries the coordinates in
    the same layout so bulk candidate gathers are contiguous slices.
    """

    def __init__(self, dataset: Dataset, width: float, origin: np.ndarray,
                 cell_coords: np.ndarray, flat_members: np.ndarray,
                 member_starts: np.ndarray) -> None:
        self.dataset = dataset
        self.width = width
        self.origin = origin
        self.cell_coords = cell_coords        # (N_g, d) int64
        self.flat_members = flat_members      # (n,) point ids grouped by grid
        self.member_starts = member_starts    # (N_g + 1,) offsets
        self.member_counts = np.diff(member_starts)
        self.sorted_coords = dataset.coords[flat_members] if flat_members.size \
            else np.empty((0, dataset.d))
        self.members = [flat_members[member_starts[i]:member_starts[i + 1]]
                        for i in range(cell_coords.shape[0])]
        self.coord_index: dict[CellCoord, int] = {
            tuple(int(v) for v in cell_coords[i]): i + 1
            for i in range(cell_coords.shape[0])
        }

    @property
    def grid_count(self) -> int:
        return self.cell_coords.shape[0]

    @property
    def d(self) -> int:
        return self.dataset.d

    def coord_of(self, gid: int) -> CellCoord:
        return tuple(int(v) for v in self.cell_coords[gid - 1])

    def members_of(self, gid: int) -> np.ndarray:
        return self.members[gid - 1]

    def gid_of(self, cell: CellCoord) -> int | None:
        return self.coord_index.get(tuple(cell))

    def locate_point(self, coords: np.ndarray) -> CellCoord:
        return locate(coords, self.origin, self.width)

    def grid_ids(self) -> range:
        return range(1, self.grid_count + 1)

    def member_rows(self, gids: np.ndarray) -> np.ndarray:
        """Row indices into sorted_coords for the members of the given
        grids, in grid order (ascending point id within each grid)."""
        idx = gids - 1
        return segment_indices(self.member_starts[idx], self.member_counts[idx])


def segment_indices(starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Concatenation of the ranges [s, s + c) without a Python loop.

    All counts must be positive (registry cells are never empty).
    """
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    steps = np.ones(total, dtype=np.int64)
    steps[0] = starts[0]
    pos = np.cumsum(counts)[:-1]
    steps[pos] = starts[1:] - starts[:-1] - counts[:-1] + 1
    return np.cumsum(steps)


def partition(dataset: Dataset, params: Params) -> GridRegistry:
    """Divide the dataset into cells of side eps/sqrt(d) and register
    the occupied ones.

    An empty dataset yields an empty registry (N_g = 0), not an error.
    """
    width = cell_width(params.eps, dataset.d)
    origin = dataset.bbox[0].copy()
    origin.setflags(write=False)

    if dataset.n == 0:
        return GridRegistry(dataset, width, origin,
                            np.empty((0, dataset.d), dtype=np.int64),
                            np.empty(0, dtype=np.int64),
                            np.zeros(1, dtype=np.int64))

    pos = np.floor((dataset.coords - origin) / width).astype(np.int64)

    # Dense ids in order of first appearance in the point stream.
    uniq, first_idx, inverse = np.unique(
        pos, axis=0, return_index=True, return_inverse=True)
    appearance = np.argsort(first_idx, kind="stable")
    rank = np.empty(uniq.shape[0], dtype=np.int64)
    rank[appearance] = np.arange(uniq.shape[0])
    grid_of_point = rank[inverse.ravel()]       # 0-based grid index per point

    cell_coords = uniq[appearance]
    # Stable sort keeps each grid's member slice in ascending point-id order.
    flat_members = np.argsort(grid_of_point, kind="stable").astype(np.int64)
    counts = np.bincount(grid_of_point, minlength=uniq.shape[0])
    member_starts = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)

    return GridRegistry(dataset, width, origin, cell_coords,
                        flat_members, member_starts)
