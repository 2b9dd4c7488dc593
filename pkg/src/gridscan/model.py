"""Core domain types and the Euclidean metric shared by every stage.

All clustering stages operate on immutable datasets of d-dimensional
points with dense integer ids. The metric is fixed to Euclidean L2:
the cell width eps/sqrt(d) used by the partitioner only guarantees the
same-cell distance bound under L2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class Point:
    """A d-dimensional point with a stable non-negative id."""

    id: int
    coords: np.ndarray

    def __post_init__(self) -> None:
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.ndim != 1 or coords.size < 1:
            raise ValueError("coords must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(coords)):
            raise ValueError(f"point {self.id}: coordinates must be finite")
        if self.id < 0:
            raise ValueError("point id must be non-negative")
        object.__setattr__(self, "coords", coords)

    @property
    def d(self) -> int:
        return self.coords.size


class Dataset:
    """Immutable collection of points stored as an (n, d) float64 array.

    Point ids are implicit row indices 0..n-1. Duplicate coordinates are
    permitted; each row counts as a separate point. An empty dataset
    (n = 0) is legal as long as the array still carries a dimension.
    """

    def __init__(self, coords: np.ndarray | Iterable) -> None:
        coords = np.array(coords, dtype=np.float64, copy=True)
        if coords.ndim != 2:
            raise ValueError("coords must have shape (n, d)")
        n, d = coords.shape
        if d < 1:
            raise ValueError("dimension must be at least 1")
        if n and not np.all(np.isfinite(coords)):
            raise ValueError("all coordinates must be finite")
        coords.setflags(write=False)
        self.coords = coords
        self.n = n
        self.d = d
        if n:
            self.bbox = (coords.min(axis=0), coords.max(axis=0))
        else:
            self.bbox = (np.zeros(d), np.zeros(d))

    @classmethod
    def from_points(cls, points: Iterable[Point]) -> "Dataset":
        points = list(points)
        if not points:
            raise ValueError("from_points needs at least one point; "
                             "construct empty datasets from an (0, d) array")
        return cls(np.stack([p.coords for p in points]))

    def point(self, i: int) -> Point:
        return Point(i, self.coords[i])

    def points(self) -> Iterator[Point]:
        for i in range(self.n):
            yield Point(i, self.coords[i])

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Dataset(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class Params:
    """Clustering parameters: neighbourhood radius and minimum density."""

    eps: float
    minpts: int

    @property
    def eps_sq(self) -> float:
        return self.eps * self.eps


def validate_params(eps: float, minpts: int, d: int) -> Params:
    """Validate parameters and return a Params value.

    Each violation raises its own ValueError so callers can surface a
    precise message: eps must be positive, minpts a positive integer,
    d a positive integer.
    """
    if not (isinstance(eps, (int, float)) and np.isfinite(eps) and eps > 0):
        raise ValueError(f"eps must be a positive finite number, got {eps!r}")
    if not (isinstance(minpts, int) and not isinstance(minpts, bool)) or minpts < 1:
        raise ValueError(f"minpts must be an integer >= 1, got {minpts!r}")
    if not (isinstance(d, int) and not isinstance(d, bool)) or d < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
    return Params(float(eps), minpts)


def sq_dists_to(point_row: np.ndarray, block: np.ndarray) -> np.ndarray:
    """Squared L2 distances from one point to every row of a block.

    Every distance comparison in the package funnels through this (or
    through the identical last-axis reduction in blocked form) so that
    boundary cases round the same way on every code path.
    """
    diff = block - point_row
    return (diff * diff).sum(axis=1)


def distance(p: Point, q: Point) -> float:
    """Euclidean distance between two points of equal dimension."""
    if p.coords.size != q.coords.size:
        raise ValueError(
            f"dimension mismatch: point {p.id} has d={p.coords.size}, "
            f"point {q.id} has d={q.coords.size}"
        )
    diff = p.coords - q.coords
    return float(np.sqrt((diff * diff).sum()))
