import math

import numpy as np
import pytest

from gridscan import Dataset, cell_width, locate, partition, validate_params

from conftest import blobs_with_noise, eps_from_sample, lattice_dataset


class TestCellWidth:
    def test_unit(self):
        assert cell_width(1.0, 1) == 1.0

    def test_perfect_square(self):
        assert cell_width(2.0, 4) == 1.0

    def test_irrational(self):
        assert cell_width(60, 3) == 60 / math.sqrt(3)
        assert cell_width(60, 3) == pytest.approx(34.64101615137755, abs=0)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            cell_width(0, 2)
        with pytest.raises(ValueError):
            cell_width(1.0, 0)


class TestLocate:
    def test_origin_cell(self):
        assert locate(np.array([0.0, 0.0]), np.zeros(2), 1.0) == (0, 0)

    def test_floor_arithmetic(self):
        assert locate(np.array([2.5, 0.1]), np.zeros(2), 1.0) == (2, 0)

    def test_boundary_goes_up(self):
        assert locate(np.array([3.0, 0.0]), np.zeros(2), 1.0) == (3, 0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            locate(np.array([1.0, 2.0]), np.zeros(3), 1.0)


class TestPartition:
    def test_singleton(self):
        ds = Dataset([[4.2, -1.0]])
        reg = partition(ds, validate_params(1.0, 1, 2))
        assert reg.grid_count == 1
        assert list(reg.members_of(1)) == [0]

    def test_nine_cell_reference_layout(self):
        cells = [(1, 1), (2, 1), (2, 3), (3, 2), (3, 3), (4, 1), (5, 3), (4, 2), (6, 1)]
        ds, params, _ = lattice_dataset(cells)
        reg = partition(ds, params)
        assert reg.grid_count == 9
        # Ids follow first appearance; coordinates are anchored at the
        # lowest occupied cell, so the layout shifts by its minimum.
        lo = np.min(np.array(cells), axis=0)
        for gid, cell in enumerate(cells, start=1):
            assert reg.coord_of(gid) == tuple(np.array(cell) - lo)

    def test_everything_in_one_cell_when_width_covers_bbox(self, rng):
        pts = rng.uniform(0, 1.0, (1000, 3))
        # width = eps / sqrt(3) >= 1 covers the unit cube
        reg = partition(Dataset(pts), validate_params(10 * math.sqrt(3), 5, 3))
        assert reg.grid_count == 1
        assert reg.members_of(1).size == 1000

    def test_empty_dataset_gives_empty_registry(self):
        reg = partition(Dataset(np.empty((0, 2))), validate_params(1.0, 1, 2))
        assert reg.grid_count == 0

    def test_point_conservation_and_uniqueness(self, rng):
        pts = blobs_with_noise(rng, 600, 3)
        reg = partition(Dataset(pts), validate_params(0.8, 5, 3))
        seen = np.concatenate([reg.members_of(g) for g in reg.grid_ids()])
        assert seen.size == len(pts)
        assert np.array_equal(np.sort(seen), np.arange(len(pts)))

    def test_members_ascend_within_cells(self, rng):
        pts = blobs_with_noise(rng, 400, 2)
        reg = partition(Dataset(pts), validate_params(1.2, 5, 2))
        for g in reg.grid_ids():
            m = reg.members_of(g)
            assert np.all(np.diff(m) > 0)

    def test_same_cell_distance_bound_exact(self, rng):
        # Guaranteed by width = eps/sqrt(d) under L2; no tolerance.
        for trial in range(10):
            d = int(rng.integers(1, 6))
            pts = blobs_with_noise(rng, 400, d)
            eps = eps_from_sample(rng, pts, 0.05, 0.5)
            reg = partition(Dataset(pts), validate_params(eps, 5, d))
            for g in reg.grid_ids():
                block = pts[reg.members_of(g)]
                if block.shape[0] < 2:
                    continue
                diff = block[:, None, :] - block[None, :, :]
                dists = np.sqrt((diff * diff).sum(axis=2))
                assert dists.max() <= eps

    def test_determinism(self, rng):
        pts = blobs_with_noise(rng, 500, 3)
        params = validate_params(0.9, 5, 3)
        r1 = partition(Dataset(pts), params)
        r2 = partition(Dataset(pts), params)
        assert np.array_equal(r1.cell_coords, r2.cell_coords)
        assert np.array_equal(r1.flat_members, r2.flat_members)
        assert np.array_equal(r1.member_starts, r2.member_starts)

    def test_coord_index_round_trip(self, rng):
        pts = blobs_with_noise(rng, 300, 2)
        reg = partition(Dataset(pts), validate_params(1.0, 5, 2))
        for g in reg.grid_ids():
            assert reg.gid_of(reg.coord_of(g)) == g
        for i in range(len(pts)):
            cell = reg.locate_point(pts[i])
            gid = reg.gid_of(cell)
            assert gid is not None
            assert i in reg.members_of(gid)
