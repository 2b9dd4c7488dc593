"""File formats: point CSV ingestion, labeling output, stats JSON.

Point files hold one point per line with comma- or whitespace-separated
real fields; a leading header line is auto-detected (any non-numeric
token). Labeling output is ``pointId,clusterId,flag`` with flag in
{core, border, noise} and cluster id 0 for noise. All files are UTF-8
and newline-terminated, and writers format floats with repr so that a
generate/write/ingest round trip reproduces coordinates exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import IO

import numpy as np

from .assignment import NOISE, ClusterLabeling
from .model import Dataset


class CsvFormatError(ValueError):
    """Malformed point file: ragged rows, non-numeric cells, empty input."""


def _tokenize(line: str) -> list[str]:
    return line.replace(",", " ").split()


def _parse_row(tokens: list[str], lineno: int) -> list[float]:
    row = []
    for tok in tokens:
        try:
            val = float(tok)
        except ValueError:
            raise CsvFormatError(
                f"line {lineno}: non-numeric value {tok!r}") from None
        if not math.isfinite(val):
            raise CsvFormatError(f"line {lineno}: non-finite value {tok!r}")
        row.append(val)
    return row


def ingest_csv(path: str | Path) -> Dataset:
    """Read a point file; raises CsvFormatError with a line number on
    malformed input. A header-only file yields an empty dataset whose
    dimension is the header arity."""
    lines: list[tuple[int, list[str]]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip().lstrip("﻿")
            if stripped:
                lines.append((lineno, _tokenize(stripped)))
    if not lines:
        raise CsvFormatError("line 1: empty input file")

    first_lineno, first = lines[0]
    try:
        _parse_row(first, first_lineno)
        header_arity = None
    except CsvFormatError:
        header_arity = len(first)
        lines = lines[1:]

    if not lines:
        return Dataset(np.empty((0, header_arity)))

    d = len(lines[0][1])
    rows = []
    for lineno, tokens in lines:
        if len(tokens) != d:
            raise CsvFormatError(
                f"line {lineno}: expected {d} fields, got {len(tokens)}")
        rows.append(_parse_row(tokens, lineno))
    if header_arity is not None and header_arity != d:
        raise CsvFormatError(
            f"line {lines[0][0]}: header has {header_arity} fields, rows have {d}")
    return Dataset(np.array(rows))


def write_points_csv(path: str | Path, ds: Dataset) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in ds.coords:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def write_generator_labels(path: str | Path, labels: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in labels:
            fh.write(f"{int(v)}\n")


def _flag(label: int, border: bool) -> str:
    if label == NOISE:
        return "noise"
    return "border" if border else "core"


def write_labeling(out: IO[str], labeling: ClusterLabeling) -> None:
    for pid in range(labeling.label.size):
        cid = int(labeling.label[pid])
        out.write(f"{pid},{cid},{_flag(cid, bool(labeling.is_border[pid]))}\n")


def write_labeling_file(path: str | Path, labeling: ClusterLabeling) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_labeling(fh, labeling)


def write_stats_json(path: str | Path, stats_dict: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(stats_dict, fh, indent=2)
        fh.write("\n")
