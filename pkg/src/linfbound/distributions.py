"""Finite-support distributions, seeded multinomial sampling and the MLE.

Also houses the variance functionals used by the bounds: the largest
per-symbol variance ``v_star``, the log-weighted sorted functional ``V_star``
and the envelope ``phi(t) = t log(1/t)``.

Sampling uses an inverse-CDF lookup on a cumulative table driven by the
PCG64 bit generator (raw 64-bit outputs, converted to doubles with the top
53 bits).  Both the bit stream and the conversion are fixed, so a given
seed produces the same counts on every platform and numpy version.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

PROB_ATOL = 1e-12

_MASK64 = (1 << 64) - 1


class InvalidArgument(ValueError):
    """Raised when an argument violates a documented precondition."""


class PreconditionError(InvalidArgument):
    """Raised when a theorem's stated range (e.g. ``n >= 81``) is not met."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability vector over symbols ``0..support_size-1``.

    Zero-mass entries are allowed and count towards ``support_size``.
    ``labels`` is optional and only used for CSV round trips.
    """

    probs: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64).ravel()
        if p.size == 0:
            raise InvalidArgument("distribution needs at least one symbol")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidArgument("probabilities must be finite and nonnegative")
        total = math.fsum(p)
        if abs(total - 1.0) > PROB_ATOL:
            raise InvalidArgument(f"probabilities sum to {total!r}, not 1")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != p.size:
                raise InvalidArgument("labels and probabilities differ in length")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", _readonly(p))

    @property
    def support_size(self) -> int:
        return int(self.probs.size)

    @property
    def top(self) -> float:
        """Largest mass."""
        return float(self.probs.max())

    def sorted_desc(self) -> np.ndarray:
        """Masses in non-increasing order; ties keep original index order."""
        order = np.argsort(-self.probs, kind="stable")
        return self.probs[order]

    def __len__(self):
        return self.support_size

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs) and self.labels == other.labels

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CountVector:
    """Symbol counts of an i.i.d. sample of size ``n``."""

    counts: np.ndarray
    n: int = field(default=-1)

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 1 or c.size == 0:
            raise InvalidArgument("counts must be a non-empty 1-d vector")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(np.equal(np.mod(c, 1), 0)):
                raise InvalidArgument("counts must be integers")
        c = c.astype(np.int64)
        if np.any(c < 0):
            raise InvalidArgument("counts must be nonnegative")
        total = int(c.sum())
        n = total if self.n == -1 else int(self.n)
        if n != total:
            raise InvalidArgument(f"counts sum to {total}, declared n={n}")
        if n < 1:
            raise InvalidArgument("sample size must be positive")
        object.__setattr__(self, "counts", _readonly(c))
        object.__setattr__(self, "n", n)

    def __len__(self):
        return int(self.counts.size)


@dataclass(frozen=True, eq=False)
class MleEstimate:
    """Empirical frequencies ``counts / n``."""

    counts: np.ndarray
    n: int

    def __post_init__(self):
        cv = CountVector(self.counts, self.n)
        object.__setattr__(self, "counts", cv.counts)
        object.__setattr__(self, "n", cv.n)
        object.__setattr__(self, "_probs", _readonly(cv.counts / cv.n))

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def variances(self) -> np.ndarray:
        """Per-symbol empirical variances ``phat (1 - phat)``."""
        p = self._probs
        return p * (1.0 - p)

    @property
    def vhat_star(self) -> float:
        return float(self.variances.max())

    def __len__(self):
        return int(self.counts.size)


# ---------------------------------------------------------------------------
# constructors

def zipf(A: int, s: float) -> Distribution:
    """Zipf law ``p_i = i^-s / sum_r r^-s`` over ``i = 1..A``."""
    if int(A) != A or A < 1:
        raise InvalidArgument(f"alphabet size must be a positive integer, got {A!r}")
    if not s > 0:
        raise InvalidArgument(f"skewness must be positive, got {s!r}")
    w = np.arange(1, int(A) + 1, dtype=np.float64) ** (-float(s))
    return Distribution(w / math.fsum(w))


def uniform(A: int) -> Distribution:
    if int(A) != A or A < 1:
        raise InvalidArgument(f"alphabet size must be a positive integer, got {A!r}")
    return Distribution(np.full(int(A), 1.0 / int(A)))


# ---------------------------------------------------------------------------
# sampling

def splitmix64(x: int) -> int:
    """SplitMix64 finaliser; maps any 64-bit integer to a well-mixed one."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def rep_seed(seed: int, rep: int) -> int:
    """Stream seed for replicate ``rep`` of an experiment seeded with ``seed``.

    Depends only on ``(seed, rep)``, so replicates can run in any order or
    on any worker and still draw identical samples.
    """
    return splitmix64((seed & _MASK64) ^ splitmix64(rep & _MASK64))


def uniforms(seed: int, size: int) -> np.ndarray:
    """``size`` doubles in [0, 1) from PCG64(seed), top 53 bits of each word."""
    bg = np.random.PCG64(seed & _MASK64)
    raw = bg.random_raw(size)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def cumulative_table(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    last = int(np.flatnonzero(probs > 0)[-1])
    # trailing zero-mass symbols must be unreachable despite rounding
    cdf[last:] = 1.0
    return cdf


def draw_counts(cdf: np.ndarray, n: int, seed: int) -> np.ndarray:
    u = uniforms(seed, n)
    idx = np.searchsorted(cdf, u, side="right")
    return np.bincount(idx, minlength=cdf.size).astype(np.int64)


def sample(dist: Distribution, n: int, seed: int) -> CountVector:
    """Multinomial(n, dist.probs) counts, deterministic given ``seed``."""
    if int(n) != n or n < 1:
        raise InvalidArgument(f"sample size must be a positive integer, got {n!r}")
    cdf = cumulative_table(dist.probs)
    return CountVector(draw_counts(cdf, int(n), seed), int(n))


def mle(counts: CountVector | Sequence[int] | np.ndarray) -> MleEstimate:
    if isinstance(counts, CountVector):
        return MleEstimate(counts.counts, counts.n)
    cv = CountVector(np.asarray(counts))
    return MleEstimate(cv.counts, cv.n)


# ---------------------------------------------------------------------------
# functionals

def _as_vector(x) -> np.ndarray:
    if isinstance(x, (Distribution, MleEstimate)):
        return x.probs
    return np.asarray(x, dtype=np.float64).ravel()


def sup_dev(p, q) -> float:
    """``max_i |p_i - q_i|``, zero-padding the shorter vector."""
    a, b = _as_vector(p), _as_vector(q)
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    return float(np.max(np.abs(a - b)))


def v_star(p) -> float:
    """Largest per-symbol variance ``max_i p_i (1 - p_i)``."""
    x = _as_vector(p)
    if np.any((x < 0) | (x > 1)):
        raise InvalidArgument("entries must lie in [0, 1]")
    return float(np.max(x * (1.0 - x)))


def V_star(p) -> float:
    """``max_i v_i log(i + 1)`` over the masses sorted in non-increasing order.

    Sorting is stable by original index and ``i`` is 1-based.
    """
    x = _as_vector(p)
    xs = x[np.argsort(-x, kind="stable")]
    v = xs * (1.0 - xs)
    return float(np.max(v * np.log(np.arange(2, xs.size + 2))))


def phi(t: float) -> float:
    """``t log(1/t)`` on [0, 1], with ``phi(0) = 0``."""
    if not 0.0 <= t <= 1.0:
        raise InvalidArgument(f"phi is defined on [0, 1], got {t!r}")
    if t == 0.0:
        return 0.0
    return -t * math.log(t)


# ---------------------------------------------------------------------------
# CSV io

def _read_two_column(path: Path, header_hint: str):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InvalidArgument(f"{path}: empty file, expected header {header_hint}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise InvalidArgument(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        out.append((row[0], row[1], lineno))
    return out


def write_distribution_csv(dist: Distribution, path) -> None:
    labels = dist.labels or tuple(str(i) for i in range(dist.support_size))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["symbol", "probability"])
        for lab, p in zip(labels, dist.probs):
            w.writerow([lab, repr(float(p))])


def read_distribution_csv(path) -> Distribution:
    rows = _read_two_column(Path(path), "symbol,probability")
    labels, probs = [], []
    for lab, val, lineno in rows:
        try:
            probs.append(float(val))
        except ValueError:
            raise InvalidArgument(f"{path}:{lineno}: bad probability {val!r}") from None
        labels.append(lab)
    return Distribution(np.array(probs), tuple(labels))


def write_counts_csv(counts: CountVector, path, labels: Sequence[str] | None = None) -> None:
    labels = labels or [str(i) for i in range(len(counts))]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["symbol", "count"])
        for lab, c in zip(labels, counts.counts):
            w.writerow([lab, int(c)])


def read_counts_csv(path) -> tuple[CountVector, tuple[str, ...]]:
    rows = _read_two_column(Path(path), "symbol,count")
    labels, counts = [], []
    for lab, val, lineno in rows:
        try:
            c = int(val)
        except ValueError:
            raise InvalidArgument(f"{path}:{lineno}: bad count {val!r}") from None
        labels.append(lab)
        counts.append(c)
    if not counts:
        raise InvalidArgument(f"{path}: no count rows")
    return CountVector(np.array(counts, dtype=np.int64)), tuple(labels)
