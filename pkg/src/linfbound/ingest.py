"""Frequency tables from census-style CSV files and raw text corpora."""

from __future__ import annotations

import csv
import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .distributions import Distribution, InvalidArgument

OTHER_LABEL = "OTHER"
BUCKET_BELOW = 0.98
REJECT_ABOVE = 1.02
PROPORTION_ATOL = 1e-9

# underscore is a word character for \w, so it is excluded explicitly
_TOKEN_SPLIT = re.compile(r"[^\w']+|_+")


class TableMode(str, Enum):
    COUNTS = "counts"
    PROPORTIONS = "proportions"


@dataclass(frozen=True)
class FrequencyTable:
    labels: tuple[str, ...]
    values: tuple[float, ...]
    mode: TableMode = TableMode.COUNTS

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise InvalidArgument("labels and values differ in length")
        if not self.labels:
            raise InvalidArgument("frequency table is empty")
        seen = set()
        for lab in self.labels:
            if lab in seen:
                raise InvalidArgument(f"duplicate label {lab!r}")
            seen.add(lab)
        if any(not math.isfinite(v) or v < 0 for v in self.values):
            raise InvalidArgument("values must be finite and nonnegative")
        if self.total <= 0:
            raise InvalidArgument("table total must be positive")
        if self.mode is TableMode.PROPORTIONS and abs(self.total - 1.0) > PROPORTION_ATOL:
            raise InvalidArgument(f"proportions sum to {self.total!r}, not 1")

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    def __len__(self):
        return len(self.labels)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.values))

    def records(self) -> list[dict]:
        t = self.total
        key = "count" if self.mode is TableMode.COUNTS else "proportion"
        return [{"label": lab, key: v, "prob": v / t} for lab, v in zip(self.labels, self.values)]

    def to_json(self) -> str:
        return json.dumps({"mode": self.mode.value, "total": self.total, "entries": self.records()},
                          indent=2)

    def sorted_desc(self) -> "FrequencyTable":
        order = sorted(range(len(self)), key=lambda i: (-self.values[i], i))
        return FrequencyTable(tuple(self.labels[i] for i in order),
                              tuple(self.values[i] for i in order), self.mode)


def _parse_value(text: str, mode: TableMode, where: str) -> float:
    try:
        v = int(text) if mode is TableMode.COUNTS else float(text)
    except ValueError:
        kind = "integer count" if mode is TableMode.COUNTS else "number"
        raise InvalidArgument(f"{where}: expected {kind}, got {text!r}") from None
    if v < 0 or not math.isfinite(v):
        raise InvalidArgument(f"{where}: negative or non-finite value {text!r}")
    return v


def load_frequency_csv(path, mode: TableMode | str = TableMode.COUNTS) -> FrequencyTable:
    """Read a two-column ``label,value`` CSV with a header row.

    In proportions mode a shortfall below 0.98 is filled by an ``OTHER``
    bucket; otherwise the values are rescaled to sum to one.  Totals above
    1.02 are rejected.
    """
    mode = TableMode(mode)
    path = Path(path)
    labels, values, seen = [], [], {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InvalidArgument(f"{path}: empty file, a header row is required")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            where = f"{path}:{lineno}"
            if len(row) != 2:
                raise InvalidArgument(f"{where}: expected 2 columns, got {len(row)}")
            label = row[0].strip()
            if label in seen:
                raise InvalidArgument(f"{where}: duplicate label {label!r} (first on line {seen[label]})")
            seen[label] = lineno
            labels.append(label)
            values.append(_parse_value(row[1].strip(), mode, where))
    if not labels:
        raise InvalidArgument(f"{path}: no data rows")
    if mode is TableMode.COUNTS:
        return FrequencyTable(tuple(labels), tuple(values), mode)
    return _normalise_proportions(labels, values, str(path))


def _normalise_proportions(labels, values, where) -> FrequencyTable:
    s = math.fsum(values)
    if s > REJECT_ABOVE:
        raise InvalidArgument(f"{where}: proportions sum to {s:.6g} > {REJECT_ABOVE}")
    if s < BUCKET_BELOW:
        if OTHER_LABEL in labels:
            raise InvalidArgument(f"{where}: label {OTHER_LABEL!r} is reserved for the residual bucket")
        labels = list(labels) + [OTHER_LABEL]
        values = list(values) + [1.0 - s]
    elif abs(s - 1.0) > 1e-12:
        values = [v / s for v in values]
    # final touch-up keeps the sum within float rounding of 1
    values = list(values)
    resid = 1.0 - math.fsum(values)
    if resid:
        i = int(np.argmax(values))
        values[i] += resid
    return FrequencyTable(tuple(labels), tuple(values), TableMode.PROPORTIONS)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on runs of characters other than letters, digits and apostrophes."""
    return [t for t in _TOKEN_SPLIT.split(text.lower()) if t]


def tokenize_corpus(path) -> FrequencyTable:
    """Token counts of a UTF-8 text file, in order of first appearance."""
    text = Path(path).read_text(encoding="utf-8")
    counts = Counter(tokenize(text))
    if not counts:
        raise InvalidArgument(f"{path}: no tokens")
    return FrequencyTable(tuple(counts), tuple(float(c) for c in counts.values()), TableMode.COUNTS)


def to_distribution(table: FrequencyTable) -> Distribution:
    """Normalised values in table order, labels attached."""
    v = np.array(table.values, dtype=np.float64)
    p = v / math.fsum(v)
    # absorb rounding into the largest entry
    p[int(np.argmax(p))] += 1.0 - math.fsum(p)
    return Distribution(p, table.labels)


def write_frequency_csv(table: FrequencyTable, path) -> None:
    head = "count" if table.mode is TableMode.COUNTS else "proportion"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["label", head])
        for lab, v in zip(table.labels, table.values):
            w.writerow([lab, int(v) if table.mode is TableMode.COUNTS else repr(float(v))])
