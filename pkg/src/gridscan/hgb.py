"""HyperGrid Bitmap index over the occupied cells of a registry.

One bit matrix per dimension maps each occupied lattice position to the
set of grid ids sitting at that position. A neighbour-box query ORs the
rows whose positions fall inside [pos - ceil(sqrt(d)), pos + ceil(sqrt(d))]
for every dimension and ANDs the d results, which returns exactly the
occupied cells inside the axis-aligned candidate box. A corner filter
then discards candidates whose cells are provably farther than eps.

Rows exist only for occupied positions; a sorted per-dimension position
table translates an absolute lattice range into a contiguous row span.
Bits are packed into 64-bit words, so OR/AND run word-parallel.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import CellCoord, GridRegistry


def ceil_sqrt(d: int) -> int:
    """Exact ceiling of sqrt(d) via integer square root."""
    if d < 1:
        raise ValueError("d must be at least 1")
    r = math.isqrt(d)
    return r if r * r == d else r + 1


def max_box_size(d: int) -> int:
    """Worst-case candidate-box cell count (2*ceil(sqrt(d)) + 1) ** d.

    Grows past 10**20 by d = 20, which is why the box is never
    enumerated directly; arbitrary-precision on purpose.
    """
    return (2 * ceil_sqrt(d) + 1) ** d


def neighbour_range(cell: CellCoord, axis: int, d: int) -> tuple[int, int]:
    """Inclusive lattice range on one axis that can hold cells within eps.

    Cells more than ceil(sqrt(d)) positions away on any single axis have
    a gap of at least ceil(sqrt(d)) - 1 >= sqrt(d) - 1 cell widths, so
    with width eps/sqrt(d) nothing beyond the range can reach eps.
    """
    if not 0 <= axis < d:
        raise ValueError(f"axis {axis} out of range for d={d}")
    r = ceil_sqrt(d)
    p = cell[axis]
    return p - r, p + r


class HyperGridBitmap:
    """d bit matrices indexing occupied grid positions, one per dimension.

    planes[i] has shape (k_i, words) where k_i is the number of distinct
    occupied positions along axis i and words = ceil(N_g / 64). Bit
    (gid - 1) of a row is set iff the grid with that id sits at the
    row's position. positions[i] is the sorted occupied-position table
    used to clip query ranges to existing rows.
    """

    def __init__(self, grid_count: int, d: int,
                 planes: list[np.ndarray], positions: list[np.ndarray]) -> None:
        self.grid_count = grid_count
        self.d = d
        self.words = planes[0].shape[1] if planes else 0
        self.planes = planes
        self.positions = positions
        self._or_cache: dict[tuple[int, int, int], np.ndarray] = {}

    def row_span(self, axis: int, lo: int, hi: int) -> tuple[int, int]:
        """Half-open row-index span covering occupied positions in [lo, hi]."""
        table = self.positions[axis]
        a = int(np.searchsorted(table, lo, side="left"))
        b = int(np.searchsorted(table, hi, side="right"))
        return a, b

    def or_rows(self, axis: int, a: int, b: int) -> np.ndarray:
        """OR of rows [a, b) of one plane, memoized: nearby cells share
        row spans, so repeat queries hit the cache."""
        key = (axis, a, b)
        cached = self._or_cache.get(key)
        if cached is None:
            cached = np.bitwise_or.reduce(self.planes[axis][a:b], axis=0)
            self._or_cache[key] = cached
        return cached

    def bits_to_ids(self, word_vec: np.ndarray) -> np.ndarray:
        """Grid ids (ascending) encoded in a packed query result."""
        if word_vec.size == 0:
            return np.empty(0, dtype=np.int64)
        flat = np.unpackbits(word_vec.view(np.uint8), bitorder="little")
        return np.flatnonzero(flat[: self.grid_count]).astype(np.int64) + 1

    def dump_plane(self, axis: int) -> list[str]:
        """Rows of the bit matrix as 0/1 strings, for golden tests."""
        out = []
        for row in self.planes[axis]:
            flat = np.unpackbits(row.view(np.uint8), bitorder="little")
            out.append("".join("1" if b else "0" for b in flat[: self.grid_count]))
        return out

    def memory_bits(self) -> int:
        return sum(p.size * 64 for p in self.planes)


def build_hgb(reg: GridRegistry) -> HyperGridBitmap:
    """Build the bitmap index in one pass over the occupied cells."""
    ng, d = reg.grid_count, reg.d
    words = (ng + 63) // 64
    planes: list[np.ndarray] = []
    positions: list[np.ndarray] = []
    col = np.arange(ng, dtype=np.int64)
    word_idx = col >> 6
    bit_mask = (np.uint64(1) << (col & 63).astype(np.uint64))
    for i in range(d):
        vals = reg.cell_coords[:, i]
        table = np.unique(vals)
        rows = np.searchsorted(table, vals)
        plane = np.zeros((table.size, words), dtype=np.uint64)
        np.bitwise_or.at(plane, (rows, word_idx), bit_mask)
        planes.append(plane)
        positions.append(table)
    return HyperGridBitmap(ng, d, planes, positions)


def query_box(index: HyperGridBitmap, cell: CellCoord) -> np.ndarray:
    """Packed bitset of occupied cells inside the candidate box of `cell`.

    Per-dimension OR over the clipped row span, then AND across
    dimensions; short-circuits to all-zero as soon as any dimension has
    no occupied position in range or the running AND empties out.
    """
    zeros = np.zeros(index.words, dtype=np.uint64)
    if index.grid_count == 0:
        return zeros
    acc: np.ndarray | None = None
    for axis in range(index.d):
        lo, hi = neighbour_range(cell, axis, index.d)
        a, b = index.row_span(axis, lo, hi)
        if a >= b:
            return zeros
        sliced = index.or_rows(axis, a, b)
        if acc is None:
            acc = sliced.copy()     # cached rows must stay pristine
        else:
            acc &= sliced
        if not acc.any():
            return zeros
    return acc


def naive_box(reg: GridRegistry, cell: CellCoord) -> np.ndarray:
    """Linear-scan comparator for query_box: same per-dimension range
    test applied to every occupied cell. Returns ascending grid ids."""
    if reg.grid_count == 0:
        return np.empty(0, dtype=np.int64)
    r = ceil_sqrt(reg.d)
    delta = np.abs(reg.cell_coords - np.asarray(cell, dtype=np.int64))
    mask = (delta <= r).all(axis=1)
    return np.flatnonzero(mask).astype(np.int64) + 1


def corner_prune(reg: GridRegistry, cell: CellCoord, candidates: np.ndarray,
                 eps: float) -> np.ndarray:
    """Drop the queried cell itself and every candidate whose minimum
    possible inter-cell point distance reaches eps.

    The minimum distance between cells offset by delta is
    width * sqrt(sum(max(0, |delta_i| - 1)^2)); with width = eps/sqrt(d)
    the comparison reduces to the integer test sum >= d. Cells exactly
    at the eps bound are pruned: member intervals are half-open, so the
    bound is never attained by an actual point pair.
    """
    candidates = np.asarray(candidates, dtype=np.int64)
    if candidates.size == 0:
        return candidates
    delta = np.abs(reg.cell_coords[candidates - 1] - np.asarray(cell, dtype=np.int64))
    gaps = np.maximum(delta - 1, 0)
    gap_sq = (gaps * gaps).sum(axis=1)
    threshold = (eps / reg.width) ** 2 - 1e-9
    keep = (gap_sq < threshold) & delta.any(axis=1)
    return candidates[keep]
