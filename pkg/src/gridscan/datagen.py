"""Synthetic clustered datasets from drifting cluster walkers plus
uniform noise.

Each of c walkers starts uniformly inside the coordinate range. Cluster
points are drawn from an isotropic Gaussian around their walker and
assigned round-robin, so drift epochs interleave across clusters. After
every ceil(n / 4000) generated points (i.e. 0.025% of n), every walker
shifts each coordinate by -5, +5 or 0 with probability 1/3 each. The
trailing floor(pnoise * n) points are uniform over the range, and all
coordinates are clamped to it.

The draw order is fixed (walker starts, then per-epoch point blocks and
drift steps, then noise), so a seed pins the output exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Dataset

DRIFT_STEPS = (-5.0, 5.0, 0.0)
NOISE_LABEL = -1


@dataclass(frozen=True)
class UrgConfig:
    """Generator parameters; defaults mirror the common benchmark setup."""

    n: int
    c: int
    d: int
    pnoise: float = 0.000005
    seed: int = 0
    low: float = 0.0
    high: float = 10000.0
    sigma: float = 25.0

    def __post_init__(self) -> None:
        if not (self.n >= self.c >= 1):
            raise ValueError("need n >= c >= 1")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if not (0.0 <= self.pnoise < 1.0):
            raise ValueError("pnoise must be in [0, 1)")
        if not (self.high > self.low):
            raise ValueError("range must be non-degenerate")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


def drift_interval(n: int) -> int:
    """Points generated between walker drifts: ceil(0.00025 * n), exactly."""
    return (n + 3999) // 4000


def generate_urg_labeled(cfg: UrgConfig) -> tuple[Dataset, np.ndarray]:
    """Generate a dataset plus per-point generator labels.

    Labels are the walker index for cluster points and -1 for noise;
    they describe provenance, not DBSCAN ground truth.
    """
    rng = np.random.default_rng(cfg.seed)
    noise_count = int(cfg.pnoise * cfg.n)
    cluster_count = cfg.n - noise_count
    interval = drift_interval(cfg.n)

    walkers = rng.uniform(cfg.low, cfg.high, size=(cfg.c, cfg.d))
    blocks: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    generated = 0
    while generated < cluster_count:
        m = min(interval, cluster_count - generated)
        widx = (generated + np.arange(m)) % cfg.c
        pts = walkers[widx] + rng.normal(0.0, cfg.sigma, size=(m, cfg.d))
        blocks.append(pts)
        labels.append(widx)
        generated += m
        if m == interval:
            steps = rng.integers(0, 3, size=(cfg.c, cfg.d))
            walkers = walkers + np.choose(steps, DRIFT_STEPS)

    if noise_count:
        blocks.append(rng.uniform(cfg.low, cfg.high, size=(noise_count, cfg.d)))
        labels.append(np.full(noise_count, NOISE_LABEL, dtype=np.int64))

    if blocks:
        coords = np.clip(np.concatenate(blocks), cfg.low, cfg.high)
        label_arr = np.concatenate(labels).astype(np.int64)
    else:
        coords = np.empty((0, cfg.d))
        label_arr = np.empty(0, dtype=np.int64)
    return Dataset(coords), label_arr


def generate_urg(cfg: UrgConfig) -> Dataset:
    """Generate a dataset (see generate_urg_labeled for the label variant)."""
    dataset, _ = generate_urg_labeled(cfg)
    return dataset
