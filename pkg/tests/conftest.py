"""Shared helpers for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from gridscan import Dataset, Params, build_hgb, partition, validate_params


def lattice_dataset(cells: list[tuple[int, ...]], per_cell: int = 1,
                    jitter: float = 0.0, seed: int = 0) -> tuple[Dataset, Params, float]:
    """Dataset whose points occupy exactly the given lattice cells.

    Uses eps = sqrt(d) so the cell width is exactly 1.0 and the computed
    cell of every point equals its intended integer coordinate (the
    lattice is anchored at the minimum occupied cell). Points go to cell
    centers, optionally jittered within the cell. Cells receive grid ids
    in list order (one point per cell first, then repeats).
    """
    d = len(cells[0])
    eps = math.sqrt(d)
    rng = np.random.default_rng(seed)
    rows = []
    for rep in range(per_cell):
        for cell in cells:
            offset = rng.uniform(0.2, 0.8, d) if jitter else np.full(d, 0.5)
            rows.append(np.asarray(cell, dtype=float) + offset)
    ds = Dataset(np.array(rows))
    params = validate_params(eps, 1, d)
    return ds, params, eps


def registry_for(cells: list[tuple[int, ...]], minpts: int = 1):
    """Registry + index over a synthetic occupied-cell layout."""
    ds, params, eps = lattice_dataset(cells)
    params = validate_params(eps, minpts, ds.d)
    reg = partition(ds, params)
    return reg, build_hgb(reg), params


def blobs_with_noise(rng: np.random.Generator, n: int, d: int,
                     k: int | None = None, box: float = 10.0) -> np.ndarray:
    """Gaussian blobs plus a sprinkle of uniform background points."""
    k = k or int(rng.integers(1, 5))
    centers = rng.uniform(0, box, (k, d))
    sizes = rng.multinomial(n, np.ones(k) / k)
    parts = [rng.normal(centers[i], rng.uniform(0.1, 1.0), (int(sizes[i]), d))
             for i in range(k)]
    n_bg = int(rng.integers(0, n // 4 + 1))
    parts.append(rng.uniform(-2, box + 2, (n_bg, d)))
    return np.vstack(parts)


def eps_from_sample(rng: np.random.Generator, pts: np.ndarray,
                    lo_q: float = 0.02, hi_q: float = 0.3) -> float:
    """An eps drawn from the empirical pairwise-distance distribution."""
    take = pts[rng.choice(len(pts), size=min(60, len(pts)), replace=False)]
    dmat = np.sqrt(((take[:, None] - take[None]) ** 2).sum(-1))
    positive = dmat[dmat > 0]
    if positive.size == 0:
        return 1.0
    return float(np.quantile(positive, rng.uniform(lo_q, hi_q)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
