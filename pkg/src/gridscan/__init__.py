"""Exact grid-based DBSCAN with bitmap-indexed neighbour-grid queries
and union-find-pruned cluster merging, verified against a brute-force
reference implementation."""

from .assignment import NOISE, ClusterLabeling, assign_borders_and_noise, extract_clusters
from .datagen import UrgConfig, generate_urg, generate_urg_labeled
from .grid import CellCoord, GridRegistry, cell_width, locate, partition
from .hgb import (HyperGridBitmap, build_hgb, ceil_sqrt, corner_prune,
                  max_box_size, naive_box, neighbour_range, query_box)
from .labeling import CoreLabels, eps_neighbour_count, label_cores
from .merging import ClusterForest, MergeCounters, merge_check, merge_step
from .model import Dataset, Params, Point, distance, validate_params
from .oracle import OracleResult, dbscan_bruteforce, equivalent
from .pipeline import ALGORITHMS, RunStats, run_clustering

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "CellCoord", "ClusterForest", "ClusterLabeling",
    "CoreLabels", "Dataset", "GridRegistry", "HyperGridBitmap",
    "MergeCounters", "NOISE", "OracleResult", "Params", "Point", "RunStats",
    "UrgConfig", "assign_borders_and_noise", "build_hgb", "ceil_sqrt",
    "cell_width", "corner_prune", "dbscan_bruteforce", "distance",
    "eps_neighbour_count", "equivalent", "extract_clusters", "generate_urg",
    "generate_urg_labeled", "label_cores", "locate", "max_box_size",
    "merge_check", "merge_step", "naive_box", "neighbour_range", "partition",
    "query_box", "run_clustering", "validate_params",
]
