import itertools
import math

import numpy as np
import pytest

from gridscan import (Dataset, build_hgb, ceil_sqrt, corner_prune, max_box_size,
                      naive_box, neighbour_range, partition, query_box,
                      validate_params)

from conftest import lattice_dataset, registry_for

NINE_CELLS = [(1, 1), (2, 1), (2, 3), (3, 2), (3, 3), (4, 1), (5, 3), (4, 2), (6, 1)]


def rect_min_distance(reg, g1, g2):
    """Independent oracle: minimum distance between two cell hyperrectangles,
    computed from their real-valued bounds."""
    w = reg.width
    lo1 = np.asarray(reg.coord_of(g1), dtype=float) * w
    lo2 = np.asarray(reg.coord_of(g2), dtype=float) * w
    gap = np.maximum(0.0, np.maximum(lo1 - (lo2 + w), lo2 - (lo1 + w)))
    return math.sqrt(float((gap * gap).sum()))


class TestCounting:
    def test_ceil_sqrt_table(self):
        for d in range(1, 200):
            assert ceil_sqrt(d) == math.ceil(math.sqrt(d))

    def test_max_box_size_small(self):
        assert max_box_size(1) == 3
        assert max_box_size(2) == 25

    def test_max_box_size_d20_exceeds_1e20(self):
        assert max_box_size(20) == 11 ** 20
        assert max_box_size(20) > 10 ** 20

    def test_max_box_size_formula_range(self):
        for d in range(1, 31):
            r = math.ceil(math.sqrt(d))
            assert max_box_size(d) == (2 * r + 1) ** d


class TestNeighbourRange:
    def test_reference_dim1(self):
        assert neighbour_range((4, 2), 0, 2) == (2, 6)

    def test_reference_dim2_formula(self):
        # The raw range; the bitmap clips it to occupied rows at query time.
        assert neighbour_range((4, 2), 1, 2) == (0, 4)

    def test_one_dimensional(self):
        assert neighbour_range((0,), 0, 1) == (-1, 1)

    def test_axis_out_of_range(self):
        with pytest.raises(ValueError):
            neighbour_range((0, 0), 2, 2)


class TestNineGridLayout:
    """The worked 2D example: 9 occupied cells, bit planes of 6 and 3 rows."""

    def setup_method(self):
        self.reg, self.idx, self.params = registry_for(NINE_CELLS)

    def test_row_counts(self):
        assert [p.shape[0] for p in self.idx.planes] == [6, 3]

    def test_grid8_bits(self):
        # Grid 8 sits at the 4th occupied position of axis 0 and the 2nd
        # of axis 1 (1-based), column 8.
        assert self.idx.dump_plane(0)[3][7] == "1"
        assert self.idx.dump_plane(1)[1][7] == "1"

    def test_plane_dumps_golden(self):
        assert self.idx.dump_plane(0) == [
            "100000000",
            "011000000",
            "000110000",
            "000001010",
            "000000100",
            "000000001",
        ]
        assert self.idx.dump_plane(1) == [
            "110001001",
            "000100010",
            "001010100",
        ]

    def test_query_grid8_returns_all_but_grid1(self):
        cell = self.reg.coord_of(8)
        ids = self.idx.bits_to_ids(query_box(self.idx, cell))
        assert list(ids) == [2, 3, 4, 5, 6, 7, 8, 9]

    def test_axis2_range_clips_to_all_three_rows(self):
        cell = self.reg.coord_of(8)
        lo, hi = neighbour_range(cell, 1, 2)
        assert self.idx.row_span(1, lo, hi) == (0, 3)

    def test_naive_box_matches(self):
        for g in self.reg.grid_ids():
            cell = self.reg.coord_of(g)
            assert list(self.idx.bits_to_ids(query_box(self.idx, cell))) == \
                list(naive_box(self.reg, cell))

    def test_corner_prune_keeps_seven_neighbours_of_grid8(self):
        cell = self.reg.coord_of(8)
        ids = self.idx.bits_to_ids(query_box(self.idx, cell))
        kept = corner_prune(self.reg, cell, ids, self.params.eps)
        assert list(kept) == [2, 3, 4, 5, 6, 7, 9]


class TestSingleGrid:
    def test_one_by_one_plane(self):
        reg, idx, params = registry_for([(0, 0)])
        assert [p.shape for p in idx.planes] == [(1, 1), (1, 1)]
        ids = idx.bits_to_ids(query_box(idx, (0, 0)))
        assert list(ids) == [1]
        # The queried cell itself never survives the corner filter.
        assert corner_prune(reg, (0, 0), ids, params.eps).size == 0

    def test_empty_registry(self):
        reg = partition(Dataset(np.empty((0, 2))), validate_params(1.0, 1, 2))
        idx = build_hgb(reg)
        assert idx.bits_to_ids(query_box(idx, (0, 0))).size == 0
        assert naive_box(reg, (0, 0)).size == 0


def random_registry(rng, d, n_cells):
    lo = int(2 * math.ceil(math.sqrt(d)) + 2)
    cells = set()
    while len(cells) < n_cells:
        cells.add(tuple(int(v) for v in rng.integers(0, lo, d)))
    return registry_for(sorted(cells))


class TestQueryEqualsNaive:
    def test_randomized_cross_check(self, rng):
        for trial in range(40):
            d = int(rng.integers(1, 11))
            n_cells = int(rng.integers(2, 120))
            reg, idx, _ = random_registry(rng, d, n_cells)
            for g in reg.grid_ids():
                cell = reg.coord_of(g)
                got = list(idx.bits_to_ids(query_box(idx, cell)))
                want = list(naive_box(reg, cell))
                assert got == want
                assert len(got) <= max_box_size(d)
                assert g in got

    def test_five_hundred_cells_5d(self, rng):
        reg, idx, _ = random_registry(rng, 5, 500)
        for g in reg.grid_ids():
            cell = reg.coord_of(g)
            assert np.array_equal(idx.bits_to_ids(query_box(idx, cell)),
                                  naive_box(reg, cell))


class TestBitPlaneInvariants:
    def test_single_bit_per_column(self, rng):
        for _ in range(10):
            d = int(rng.integers(1, 7))
            reg, idx, _ = random_registry(rng, d, int(rng.integers(1, 80)))
            for axis in range(d):
                rows = idx.dump_plane(axis)
                col_sums = [sum(int(r[c]) for r in rows)
                            for c in range(reg.grid_count)]
                assert col_sums == [1] * reg.grid_count

    def test_memory_bound(self, rng):
        reg, idx, _ = random_registry(rng, 4, 60)
        max_rows = max(p.shape[0] for p in idx.planes)
        word_bits = 64 * ((reg.grid_count + 63) // 64)
        assert idx.memory_bits() <= reg.d * max_rows * word_bits


class TestCornerPrune:
    def test_full_2d_interior_box_keeps_twenty(self):
        # Fully occupied 7x7 lattice; the interior cell's 5x5 box loses
        # itself and the four diagonal corners.
        cells = list(itertools.product(range(7), repeat=2))
        reg, idx, params = registry_for(cells)
        center = (3, 3)
        ids = idx.bits_to_ids(query_box(idx, center))
        assert ids.size == 25
        kept = corner_prune(reg, center, ids, params.eps)
        assert kept.size == 20

    def test_exact_eps_cells_are_pruned(self):
        # In 2D the (2, 2) offset sits exactly at distance eps; half-open
        # cells keep every realizable pair strictly beyond eps, so it goes.
        cells = [(0, 0), (2, 2)]
        reg, idx, params = registry_for(cells)
        ids = idx.bits_to_ids(query_box(idx, (0, 0)))
        assert list(ids) == [1, 2]
        kept = corner_prune(reg, (0, 0), ids, params.eps)
        assert kept.size == 0
        assert rect_min_distance(reg, 1, 2) == pytest.approx(params.eps, rel=1e-12)

    def test_against_rect_distance_oracle(self, rng):
        for _ in range(25):
            d = int(rng.integers(1, 7))
            reg, idx, params = random_registry(rng, d, int(rng.integers(2, 90)))
            eps = params.eps
            for g in reg.grid_ids():
                cell = reg.coord_of(g)
                ids = idx.bits_to_ids(query_box(idx, cell))
                kept = set(corner_prune(reg, cell, ids, eps).tolist())
                assert g not in kept
                for other in ids.tolist():
                    if other == g:
                        continue
                    dist = rect_min_distance(reg, g, other)
                    if other in kept:
                        assert dist <= eps * (1 + 1e-9)
                    else:
                        assert dist >= eps * (1 - 1e-9)

    def test_retained_iff_reachable_3d(self):
        # 3D: corners (2,2,2) reach sqrt(3)*w = eps -> pruned; every
        # other offset in the box stays strictly inside.
        cells = list(itertools.product(range(5), repeat=3))
        reg, idx, params = registry_for(cells)
        center = (2, 2, 2)
        ids = idx.bits_to_ids(query_box(idx, center))
        kept = corner_prune(reg, center, ids, params.eps)
        assert ids.size == 125
        assert kept.size == 125 - 1 - 8
