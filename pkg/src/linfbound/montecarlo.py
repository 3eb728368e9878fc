"""Seeded Monte Carlo coverage experiments.

Replicate ``r`` of sample size ``n`` draws its sample from the stream seeded
by ``rep_seed(cell_seed(seed, n), r)``.  Replicates are processed in fixed
chunks whose results are concatenated in chunk order, so the report is
bit-identical for any number of worker threads.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import itertools
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .binomial import clopper_pearson
from .bounds import BoundSpec, Method, parse_method, radius_batch
from .distributions import (
    Distribution,
    InvalidArgument,
    cumulative_table,
    draw_counts,
    rep_seed,
    splitmix64,
)
from .theory import selective_lb

CHUNK = 256
MAX_COMPOSITIONS = 10**6


@dataclass(frozen=True)
class DeltaRule:
    """Confidence level as a function of ``n``: fixed, or ``1/n^2``."""

    kind: str = "fixed"
    value: float | None = 0.05

    def __post_init__(self):
        if self.kind == "fixed":
            if self.value is None or not 0.0 < self.value < 1.0:
                raise InvalidArgument(f"fixed delta must lie in (0, 1), got {self.value!r}")
        elif self.kind == "inverse-n-squared":
            object.__setattr__(self, "value", None)
        else:
            raise InvalidArgument(f"unknown delta rule {self.kind!r}")

    @classmethod
    def parse(cls, text: str | float) -> "DeltaRule":
        if isinstance(text, (int, float)):
            return cls("fixed", float(text))
        t = text.strip().lower().replace(" ", "")
        if t in ("1/n^2", "1/n**2", "1/n2", "inverse-n-squared"):
            return cls("inverse-n-squared")
        try:
            return cls("fixed", float(t))
        except ValueError:
            raise InvalidArgument(f"cannot parse delta {text!r}; use a number or 1/n^2") from None

    def delta(self, n: int) -> float:
        return self.value if self.kind == "fixed" else 1.0 / (n * n)

    def __str__(self):
        return repr(self.value) if self.kind == "fixed" else "1/n^2"


def spec_at(spec: BoundSpec, delta: float) -> BoundSpec:
    """``spec`` re-expressed at a new overall ``delta``, keeping the split ratio."""
    if spec.method.uses_split:
        f1, f2 = spec.delta1 / spec.delta, spec.delta2 / spec.delta
        return BoundSpec(spec.method, delta, f1 * delta, f2 * delta, spec.m)
    return dataclasses.replace(spec, delta=delta)


def default_methods(delta: float = 0.05) -> tuple[BoundSpec, ...]:
    return tuple(BoundSpec(m, delta) for m in Method)


@dataclass(frozen=True)
class ExperimentConfig:
    distribution: Distribution
    label: str
    n_values: tuple[int, ...]
    delta_rule: DeltaRule = DeltaRule()
    methods: tuple[BoundSpec, ...] = field(default_factory=default_methods)
    reps: int = 10_000
    seed: int = 0
    k: int | None = None

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_values)
        if not ns:
            raise InvalidArgument("n_values must be nonempty")
        if any(n < 1 for n in ns) or list(ns) != sorted(ns):
            raise InvalidArgument("n_values must be positive and sorted ascending")
        if int(self.reps) != self.reps or self.reps < 1:
            raise InvalidArgument("reps must be a positive integer")
        if self.k is not None and not 1 <= self.k <= self.distribution.support_size:
            raise InvalidArgument(f"k must lie in [1, support size], got {self.k!r}")
        methods = tuple(m if isinstance(m, BoundSpec) else BoundSpec(parse_method(m), 0.05)
                        for m in self.methods)
        if not methods:
            raise InvalidArgument("at least one method is required")
        object.__setattr__(self, "n_values", ns)
        object.__setattr__(self, "methods", methods)

    def echo(self) -> dict:
        probs = np.ascontiguousarray(self.distribution.probs)
        return {
            "label": self.label,
            "support_size": self.distribution.support_size,
            "distribution_sha256": hashlib.sha256(probs.tobytes()).hexdigest(),
            "n_values": list(self.n_values),
            "delta_rule": str(self.delta_rule),
            "methods": [{"method": s.method.value, "m": s.m,
                         "split": [s.delta1 / s.delta, s.delta2 / s.delta] if s.method.uses_split else None}
                        for s in self.methods],
            "reps": self.reps,
            "seed": self.seed,
            "k": self.k,
        }

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.echo(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass(frozen=True)
class CellResult:
    method: str
    n: int
    delta: float
    reps: int
    covered: int = 0
    mean_radius: float = math.nan
    oracle_quantile: float = math.nan
    failure_prob: float = math.nan
    m_used: int | None = None
    skipped: str | None = None
    topk_covered: int | None = None

    @property
    def coverage_rate(self) -> float:
        return math.nan if self.skipped else self.covered / self.reps

    @property
    def topk_coverage_rate(self) -> float | None:
        if self.topk_covered is None or self.skipped:
            return None
        return self.topk_covered / self.reps

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["coverage_rate"] = self.coverage_rate
        d["topk_coverage_rate"] = self.topk_coverage_rate
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}


@dataclass(frozen=True)
class ReferenceLines:
    """Per-``n`` reference quantities of a top-k experiment."""

    n: int
    delta: float
    oracle_full: float
    oracle_top1: float
    oracle_topk: float
    selective_lb: float
    naive_cp_top1_coverage: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class CoverageReport:
    config: ExperimentConfig
    cells: list[CellResult]
    references: list[ReferenceLines] = field(default_factory=list)
    topk_ids: dict[int, np.ndarray] = field(default_factory=dict)
    per_rep: dict[int, dict[str, np.ndarray]] = field(default_factory=dict)

    def cell(self, method: str | Method, n: int) -> CellResult:
        name = parse_method(method).value
        for c in self.cells:
            if c.method == name and c.n == n:
                return c
        raise KeyError((name, n))

    CSV_FIELDS = ("method", "n", "delta", "reps", "covered", "coverage_rate", "mean_radius",
                  "oracle_quantile", "failure_prob", "m_used", "topk_covered",
                  "topk_coverage_rate", "skipped")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_FIELDS)
        for c in self.cells:
            d = c.to_dict()
            w.writerow(["" if d[k] is None else d[k] for k in self.CSV_FIELDS])
        return buf.getvalue()

    def to_json(self) -> str:
        out = {
            "config": self.config.echo(),
            "config_hash": self.config.config_hash,
            "cells": [c.to_dict() for c in self.cells],
        }
        if self.references:
            out["references"] = [r.to_dict() for r in self.references]
        if self.topk_ids:
            out["topk_ids"] = {str(n): ids.tolist() for n, ids in self.topk_ids.items()}
        return json.dumps(out, indent=2, sort_keys=True)

    def write(self, out_dir, stem: str, formats=("csv", "json")) -> list[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for fmt in formats:
            path = out_dir / f"{stem}-{self.config.config_hash}.{fmt}"
            path.write_text(self.to_csv() if fmt == "csv" else self.to_json(), encoding="utf-8")
            paths.append(path)
        return paths


# ---------------------------------------------------------------------------
# engine

def cell_seed(seed: int, n: int) -> int:
    return rep_seed(seed, splitmix64(n))


def _chunks(reps: int, size: int = CHUNK):
    return [(lo, min(lo + size, reps)) for lo in range(0, reps, size)]


def _draw_chunk(cdf: np.ndarray, n: int, base: int, lo: int, hi: int) -> np.ndarray:
    return np.stack([draw_counts(cdf, n, rep_seed(base, r)) for r in range(lo, hi)])


def _pmap(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _topk_index(counts: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` largest counts per row, ties to the lower index."""
    return np.argsort(-counts, axis=1, kind="stable")[:, :k]


def _quantile_rank(reps: int, delta: float) -> int:
    return min(reps, max(1, math.ceil((1.0 - delta) * reps - 1e-9)))


def order_statistic_quantile(values: np.ndarray, delta: float) -> float:
    """Order statistic of rank ``ceil((1 - delta) reps)``; no interpolation."""
    v = np.sort(np.asarray(values))
    return float(v[_quantile_rank(v.size, delta) - 1])


def _simulate_cell(dist: Distribution, n: int, delta: float, specs, seed: int, reps: int,
                   threads: int, k: int | None, keep_per_rep: bool):
    p = dist.probs
    cdf = cumulative_table(p)
    base = cell_seed(seed, n)
    runnable = [(s, spec_at(s, delta)) for s in specs]
    runnable = [(s, sd) for s, sd in runnable if sd.applicable(n) is None]
    fixed = {}
    for s, sd in runnable:
        if not sd.method.needs_sample:
            fixed[s] = radius_batch(sd, n, p=dist)

    def work(bounds):
        lo, hi = bounds
        counts = _draw_chunk(cdf, n, base, lo, hi)
        probs = counts / n
        dev = np.abs(probs - p[None, :])
        out = {"sup": dev.max(axis=1)}
        for s, sd in runnable:
            r = fixed[s] if s in fixed else radius_batch(sd, n, probs=probs)
            out[s] = np.broadcast_to(np.asarray(r, dtype=np.float64), (hi - lo)).copy()
        if k is not None:
            idx = _topk_index(counts, k)
            out["ids"] = idx
            out["topk"] = np.take_along_axis(dev, idx, axis=1).max(axis=1)
            out["top1"] = dev[np.arange(hi - lo), idx[:, 0]]
            top_counts = counts[np.arange(hi - lo), idx[:, 0]]
            out["naive"] = np.array([p[i] in clopper_pearson(int(y), n, delta)
                                     for i, y in zip(idx[:, 0], top_counts)])
        return out

    parts = _pmap(work, _chunks(reps), threads)
    return runnable, {key: np.concatenate([pt[key] for pt in parts]) for key in parts[0]}


def _run(cfg: ExperimentConfig, threads: int, topk: bool, keep_per_rep: bool) -> CoverageReport:
    cells, refs, ids, per_rep = [], [], {}, {}
    k = cfg.k if topk else None
    for n in cfg.n_values:
        delta = cfg.delta_rule.delta(n)
        runnable, res = _simulate_cell(cfg.distribution, n, delta, cfg.methods, cfg.seed,
                                       cfg.reps, threads, k, keep_per_rep)
        sup = res["sup"]
        oq = order_statistic_quantile(sup, delta)
        active = {s for s, _ in runnable}
        for s in cfg.methods:
            sd = spec_at(s, delta)
            if s not in active:
                cells.append(CellResult(s.method.value, n, delta, cfg.reps,
                                        skipped=f"skipped: theorem precondition ({sd.applicable(n)})",
                                        failure_prob=sd.failure_prob(n)))
                continue
            rad = res[s]
            topk_cov = int(np.count_nonzero(res["topk"] <= rad)) if k is not None else None
            cells.append(CellResult(
                s.method.value, n, delta, cfg.reps,
                covered=int(np.count_nonzero(sup <= rad)),
                mean_radius=math.fsum(rad) / cfg.reps,
                oracle_quantile=oq,
                failure_prob=sd.failure_prob(n),
                m_used=sd.resolve_m(n),
                topk_covered=topk_cov,
            ))
        if k is not None:
            ids[n] = res["ids"]
            refs.append(ReferenceLines(
                n, delta, oq,
                order_statistic_quantile(res["top1"], delta),
                order_statistic_quantile(res["topk"], delta),
                selective_lb(cfg.distribution.top, n, delta),
                float(np.count_nonzero(res["naive"])) / cfg.reps,
            ))
        if keep_per_rep:
            per_rep[n] = {(key.method.value if isinstance(key, BoundSpec) else key): v
                          for key, v in res.items()}
    return CoverageReport(cfg, cells, refs, ids, per_rep)


def run_coverage(cfg: ExperimentConfig, threads: int = 1, keep_per_rep: bool = False) -> CoverageReport:
    """Coverage rate, mean radius and oracle quantile for every (method, n).

    Cells whose ``n`` violates a bound's precondition are reported with a
    ``skipped`` marker instead of results.
    """
    return _run(cfg, threads, topk=False, keep_per_rep=keep_per_rep)


def topk_experiment(cfg: ExperimentConfig, threads: int = 1, keep_per_rep: bool = False) -> CoverageReport:
    """Coverage restricted to the ``cfg.k`` most frequent sample symbols.

    Also records, per ``n``, the oracle quantiles of the full, top-1 and
    top-k deviations, the first-order selective lower bound and the coverage
    of a naive Clopper-Pearson interval around the most frequent symbol.
    """
    if cfg.k is None:
        raise InvalidArgument("topk_experiment needs cfg.k")
    return _run(cfg, threads, topk=True, keep_per_rep=keep_per_rep)


def sup_deviations(dist: Distribution, n: int, reps: int, seed: int, threads: int = 1) -> np.ndarray:
    cdf = cumulative_table(dist.probs)
    base = cell_seed(seed, n)

    def work(bounds):
        counts = _draw_chunk(cdf, n, base, *bounds)
        return np.abs(counts / n - dist.probs[None, :]).max(axis=1)

    return np.concatenate(_pmap(work, _chunks(reps), threads))


def oracle_quantile(dist: Distribution, n: int, delta: float, reps: int, seed: int,
                    threads: int = 1) -> float:
    """Empirical ``1 - delta`` quantile of ``max_i |p_i - phat_i|``."""
    if not 0.0 < delta < 1.0:
        raise InvalidArgument(f"delta must lie in (0, 1), got {delta!r}")
    if reps < 1 / delta:
        warnings.warn(f"reps={reps} < 1/delta; the quantile is the sample maximum", stacklevel=2)
    return order_statistic_quantile(sup_deviations(dist, n, reps, seed, threads), delta)


# ---------------------------------------------------------------------------
# exact enumeration

def composition_count(n: int, A: int) -> int:
    return math.comb(n + A - 1, A - 1)


def compositions(n: int, A: int) -> np.ndarray:
    """All count vectors of length ``A`` summing to ``n`` (stars and bars)."""
    total = composition_count(n, A)
    if total > MAX_COMPOSITIONS:
        raise InvalidArgument(f"{total} compositions exceeds the limit {MAX_COMPOSITIONS}")
    if A == 1:
        return np.array([[n]], dtype=np.int64)
    bars = np.array(list(itertools.combinations(range(n + A - 1), A - 1)), dtype=np.int64)
    edges = np.concatenate([np.full((total, 1), -1), bars, np.full((total, 1), n + A - 1)], axis=1)
    return np.diff(edges, axis=1) - 1


def multinomial_logpmf(counts: np.ndarray, p: np.ndarray) -> np.ndarray:
    n = int(counts[0].sum())
    lg = np.vectorize(math.lgamma)
    with np.errstate(divide="ignore"):
        logp = np.log(p)
    terms = np.where(counts > 0, counts * logp[None, :], 0.0)
    return math.lgamma(n + 1) - lg(counts + 1).sum(axis=1) + terms.sum(axis=1)


def exact_coverage(dist: Distribution, n: int, spec: BoundSpec) -> float:
    """``P(max_i |p_i - phat_i| <= radius)`` summed over every possible sample."""
    reason = spec.applicable(n)
    if reason:
        raise InvalidArgument(f"{spec.method.value}: {reason}")
    p = dist.probs
    counts = compositions(n, p.size)
    probs = counts / n
    w = np.exp(multinomial_logpmf(counts, p))
    sup = np.abs(probs - p[None, :]).max(axis=1)
    rad = radius_batch(spec, n, probs=probs, p=dist)
    # the pmf weights carry rounding of a few ulp; keep the result a probability
    return min(1.0, math.fsum(w[sup <= rad]))


def exact_quantile(dist: Distribution, n: int, delta: float) -> float:
    """Smallest ``t`` with ``P(max_i |p_i - phat_i| <= t) >= 1 - delta``."""
    p = dist.probs
    counts = compositions(n, p.size)
    w = np.exp(multinomial_logpmf(counts, p))
    sup = np.abs(counts / n - p[None, :]).max(axis=1)
    order = np.argsort(sup, kind="stable")
    cum = np.cumsum(w[order])
    i = int(np.searchsorted(cum, 1.0 - delta - 1e-12))
    return float(sup[order][min(i, sup.size - 1)])
