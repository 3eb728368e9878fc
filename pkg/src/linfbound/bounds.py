"""Sup-norm deviation bounds for the multinomial MLE.

Every bound returns a radius ``T`` such that ``max_i |p_i - phat_i| <= T``
with probability at least ``1 - failure_prob``.  The moment-based bounds
(``th1_*``, ``th2``, ``cor21``) involve products ``k^(m-k) n^k x^k`` that
overflow doubles for moderate ``m``; they are summed as logs and combined
with ``logsumexp``.

The ``*_batch`` kernels evaluate a bound for a stack of count vectors at
once and are what the Monte Carlo engine calls.  The scalar functions wrap
them and attach diagnostic components.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy.special import logsumexp

from .distributions import (
    Distribution,
    InvalidArgument,
    MleEstimate,
    PreconditionError,
    V_star,
    phi,
    v_star,
)

MIN_N_LARGE = 81
COR21_A = math.sqrt(2.0 * math.exp(1.0 / math.e))
DEFAULT_SPLIT = (0.99, 0.01)


class Method(str, Enum):
    BASELINE = "baseline"
    TH1_ORACLE = "th1-oracle"
    TH1_WORST = "th1-worst"
    TH2 = "th2"
    COR21 = "cor21"
    TH3_UB1 = "th3-ub1"
    TH3_UB2 = "th3-ub2"
    TH3_UB3 = "th3-ub3"
    TH4 = "th4"

    @property
    def needs_truth(self) -> bool:
        """Oracle bounds are functions of the true distribution."""
        return self in ORACLE_METHODS

    @property
    def needs_sample(self) -> bool:
        return self in (Method.TH2, Method.COR21, Method.TH4)

    @property
    def uses_split(self) -> bool:
        return self in (Method.TH2, Method.COR21)

    @property
    def min_n(self) -> int:
        if self in LARGE_N_METHODS:
            return MIN_N_LARGE
        if self.uses_split:
            return 2
        return 1

    @property
    def uses_m(self) -> bool:
        return self in (Method.TH1_ORACLE, Method.TH1_WORST, Method.TH2, Method.COR21)


ORACLE_METHODS = frozenset({Method.TH1_ORACLE, Method.TH3_UB1, Method.TH3_UB2, Method.TH3_UB3})
LARGE_N_METHODS = frozenset({Method.TH3_UB1, Method.TH3_UB2, Method.TH3_UB3, Method.TH4})
ALL_METHODS = tuple(Method)


def parse_method(name: str | Method) -> Method:
    if isinstance(name, Method):
        return name
    key = name.strip().lower().replace("_", "-")
    aliases = {"th1": "th1-oracle", "th1-worstcase": "th1-worst", "cor2.1": "cor21",
               "th3": "th3-ub1", "ub1": "th3-ub1", "ub2": "th3-ub2", "ub3": "th3-ub3"}
    key = aliases.get(key, key)
    try:
        return Method(key)
    except ValueError:
        known = ", ".join(m.value for m in Method)
        raise InvalidArgument(f"unknown method {name!r}; choose from {known}") from None


def _check_delta(delta: float, name: str = "delta") -> float:
    if not 0.0 < delta < 1.0:
        raise InvalidArgument(f"{name} must lie in (0, 1), got {delta!r}")
    return float(delta)


def _check_m(m: int) -> int:
    if int(m) != m or m < 2 or int(m) % 2:
        raise InvalidArgument(f"m must be an even integer >= 2, got {m!r}")
    return int(m)


def round_even(x: float) -> int:
    """Nearest even integer to ``x``, at least 2 (halves round up)."""
    return max(2, 2 * int(math.floor(x / 2.0 + 0.5)))


def _clamp_m(m: int, n: int) -> int:
    top = max(2, n - n % 2)
    return min(max(m, 2), top)


@dataclass(frozen=True)
class BoundSpec:
    """Which bound to evaluate and with what confidence parameters.

    ``delta`` is the overall budget.  For the split bounds (th2, cor21)
    ``delta1``/``delta2`` default to ``0.99 delta`` and ``0.01 delta``.
    ``m`` is an even integer or ``"auto"``.
    """

    method: Method
    delta: float
    delta1: float | None = None
    delta2: float | None = None
    m: int | str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "method", parse_method(self.method))
        _check_delta(self.delta)
        if self.method.uses_split:
            d1 = self.delta1 if self.delta1 is not None else DEFAULT_SPLIT[0] * self.delta
            d2 = self.delta2 if self.delta2 is not None else DEFAULT_SPLIT[1] * self.delta
            _check_delta(d1, "delta1")
            _check_delta(d2, "delta2")
            if d1 + d2 > self.delta * (1 + 1e-12):
                raise InvalidArgument(f"delta1 + delta2 = {d1 + d2!r} exceeds delta = {self.delta!r}")
            object.__setattr__(self, "delta1", float(d1))
            object.__setattr__(self, "delta2", float(d2))
        if self.m != "auto":
            object.__setattr__(self, "m", _check_m(self.m))

    def resolve_m(self, n: int) -> int | None:
        if not self.method.uses_m:
            return None
        if self.m != "auto":
            return self.m
        if self.method in (Method.TH1_ORACLE, Method.TH1_WORST):
            m = optimal_m_data_independent(self.delta)
        elif self.method is Method.TH2:
            m = optimal_m_th2(self.delta1)
        else:
            m = optimal_m_cor21(self.delta1)
        return _clamp_m(m, n)

    def failure_prob(self, n: int) -> float:
        if self.method.uses_split:
            return self.delta1 + self.delta2
        if self.method in LARGE_N_METHODS:
            return self.delta + MIN_N_LARGE / n
        return self.delta

    def applicable(self, n: int) -> str | None:
        """Reason the bound cannot be evaluated at ``n``, or None."""
        if n < self.method.min_n:
            if self.method in LARGE_N_METHODS:
                return f"theorem precondition n >= {MIN_N_LARGE} not met (n={n})"
            return f"needs n >= {self.method.min_n} (n={n})"
        return None


@dataclass(frozen=True)
class BoundResult:
    method: Method
    radius: float
    failure_prob: float
    m_used: int | None = None
    components: dict[str, Any] = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        """True when the failure probability is at least 1."""
        return self.failure_prob >= 1.0

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "radius": self.radius,
            "m_used": self.m_used,
            "failure_prob": self.failure_prob,
            "vacuous": self.vacuous,
            "components": {k: _jsonable(v) for k, v in self.components.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    CSV_FIELDS = ("method", "radius", "m_used", "failure_prob", "vacuous")

    def csv_row(self) -> list:
        d = self.to_dict()
        return [d[k] for k in self.CSV_FIELDS]


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


# ---------------------------------------------------------------------------
# log-space kernels

def _log_variances(probs: np.ndarray) -> np.ndarray:
    """``log(p (1 - p))`` elementwise, ``-inf`` where the variance is 0."""
    v = probs * (1.0 - probs)
    with np.errstate(divide="ignore"):
        return np.where(v > 0, np.log(np.where(v > 0, v, 1.0)), -np.inf)


def _log_power_sums(logv: np.ndarray, kmax: int) -> np.ndarray:
    """Row-wise ``log sum_i v_i^k`` for ``k = 1..kmax``; shape ``(B, kmax)``."""
    B = logv.shape[0]
    out = np.full((B, kmax), -np.inf)
    has_mass = np.any(np.isfinite(logv), axis=1)
    if not has_mass.any():
        return out
    lv = logv[has_mass]
    for j in range(kmax):
        out[has_mass, j] = logsumexp((j + 1) * lv, axis=1)
    return out


def _log_weights(m: int, n: int) -> np.ndarray:
    """``log(k^(m-k) n^k)`` for ``k = 1..m/2``."""
    k = np.arange(1, m // 2 + 1, dtype=np.float64)
    return (m - k) * np.log(k) + k * math.log(n)


def _lse_rows(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return logsumexp(x, axis=-1)


def _log_taylor_gap(k: np.ndarray, n: int, form: str) -> np.ndarray:
    lin = np.log(k) - math.log(n) - (k - 1) * math.log(4.0)
    if form == "theorem":
        cub = math.log(3.0) + 3 * np.log(k)
    elif form == "proposition":
        c = 3 * k * (k - 1) * (k - 2)
        with np.errstate(divide="ignore"):
            cub = np.where(c > 0, np.log(np.where(c > 0, c, 1.0)), -np.inf)
    else:
        raise InvalidArgument(f"form must be 'theorem' or 'proposition', got {form!r}")
    cub = cub - 3 * math.log(n) - (2 * k - 5) * math.log(2.0)
    return np.logaddexp(lin, cub)


def log_epsilon_term(n: int, delta2: float, m: int, form: str = "theorem") -> float:
    """Natural log of :func:`epsilon_term` (``-inf`` when ``delta2 == 1``)."""
    m = _check_m(m)
    if not 0.0 < delta2 <= 1.0:
        raise InvalidArgument(f"delta2 must lie in (0, 1], got {delta2!r}")
    if delta2 == 1.0:
        return -math.inf
    k = np.arange(1, m // 2 + 1, dtype=np.float64)
    lead = 0.5 * math.log(n / 2.0 * math.log(1.0 / delta2))
    return float(lead + logsumexp(_log_weights(m, n) + _log_taylor_gap(k, n, form)))


def epsilon_term(n: int, delta2: float, m: int, form: str = "theorem") -> float:
    """Concentration slack of the data-dependent moment bound.

    ``sqrt(n/2 log(1/delta2)) * sum_{k<=m/2} k^(m-k) n^k g_k`` with
    ``g_k = k/(n 4^(k-1)) + c_k/(n^3 2^(2k-5))``, where ``c_k = 3k^3`` in the
    ``"theorem"`` form and ``3k(k-1)(k-2)`` in the sharper ``"proposition"``
    form.  May overflow to ``inf`` for large ``m``; use
    :func:`log_epsilon_term` in that regime.
    """
    le = log_epsilon_term(n, delta2, m, form)
    with np.errstate(over="ignore"):
        return float(np.exp(le))


def taylor_gap(k: int, n: int) -> float:
    """Bound on ``sup_p |(p(1-p))^k - ((p+1/n)(1-p-1/n))^k|`` over ``p in [0, 1-1/n]``."""
    if int(k) != k or k < 1:
        raise InvalidArgument("k must be a positive integer")
    if int(n) != n or n < 2:
        raise InvalidArgument("n must be an integer >= 2")
    return k / (n * 4.0 ** (k - 1)) + 3.0 * k * (k - 1) * (k - 2) / (n ** 3 * 2.0 ** (2 * k - 5))


# ---------------------------------------------------------------------------
# m selection

def optimal_m_data_independent(delta: float) -> int:
    """Even ``m`` nearest to ``2 (log(1/delta) + 1)``."""
    _check_delta(delta)
    return round_even(2.0 * (math.log(1.0 / delta) + 1.0))


def optimal_m_th2(delta1: float) -> int:
    """Default ``m`` for th2: even integer nearest ``log(1/delta1) + 2``."""
    _check_delta(delta1, "delta1")
    return round_even(math.log(1.0 / delta1) + 2.0)


def optimal_m_cor21(delta1: float) -> int:
    """Default ``m`` for cor21: even integer nearest ``log(1/delta1)``."""
    _check_delta(delta1, "delta1")
    return round_even(math.log(1.0 / delta1))


def worst_case_leading(m: float, delta: float) -> float:
    """``sqrt(m/2) delta^(-1/m) exp(-1/2 + 1/m)``, continuous in ``m > 0``."""
    return math.sqrt(m / 2.0) * math.exp(math.log(1.0 / delta) / m - 0.5 + 1.0 / m)


def cor21_multiplier(m: float, delta1: float) -> float:
    """``m / delta1^(1/m)``, continuous in ``m > 0``."""
    return m * math.exp(math.log(1.0 / delta1) / m)


# ---------------------------------------------------------------------------
# batch kernels: probs has shape (B, A) and holds MLE frequencies

def baseline_radius(n: int, delta: float) -> float:
    return math.sqrt(1.0 / n) + math.sqrt(math.log(1.0 / delta) / (2.0 * n))


def th1_log_moment(probs: np.ndarray, n: int, m: int) -> np.ndarray:
    """``log sum_k k^(m-k) n^k sum_i (p_i(1-p_i))^k`` per row."""
    logpow = _log_power_sums(_log_variances(probs), m // 2)
    return _lse_rows(_log_weights(m, n) + logpow)


def _radius_from_log(log_total: np.ndarray, n: int, m: int) -> np.ndarray:
    with np.errstate(under="ignore"):
        return np.exp(log_total / m) / n


def th1_worst_radius(n: int, delta: float, m: int) -> float:
    k = np.arange(1, m // 2 + 1, dtype=np.float64)
    log_sum = logsumexp(_log_weights(m, n) + (1.0 - k))
    return float(np.exp((log_sum + math.log(1.0 / delta)) / m) / n)


def th2_batch(probs: np.ndarray, n: int, delta1: float, delta2: float, m: int,
              form: str = "theorem") -> np.ndarray:
    log_s = th1_log_moment(probs, n, m)
    log_eps = log_epsilon_term(n, delta2, m, form)
    log_total = np.logaddexp(log_s, log_eps) + math.log(n / (n - 1.0)) + math.log(1.0 / delta1)
    return _radius_from_log(log_total, n, m)


def cor21_log_moment(probs: np.ndarray, n: int, m: int) -> np.ndarray:
    """``log sum_k sum_i (n p_i(1-p_i))^k`` per row."""
    logpow = _log_power_sums(_log_variances(probs), m // 2)
    k = np.arange(1, m // 2 + 1, dtype=np.float64)
    return _lse_rows(k * math.log(n) + logpow)


def cor21_batch(probs: np.ndarray, n: int, delta1: float, delta2: float, m: int) -> np.ndarray:
    g = cor21_multiplier(m, delta1)
    with np.errstate(under="ignore"):
        first = g / n * np.exp(cor21_log_moment(probs, n, m) / m)
    return first + _cor21_slack(n, delta1, delta2, m)


def _cor21_slack(n: int, delta1: float, delta2: float, m: int) -> float:
    g = cor21_multiplier(m, delta1)
    tail = n ** (-0.5 * (1 + 1.0 / m)) + 24.0 * n ** (-0.5 * (1 + 5.0 / m))
    return COR21_A * g * math.log(1.0 / delta2) ** (1.0 / (2 * m)) * tail


def _th3_tail(n: int, delta: float) -> float:
    return 4.0 / (3 * n) * math.log(2.0 * (n + 1) / delta) + math.log(n) / n


def th4_terms(n: int, delta: float) -> tuple[float, float]:
    a = _th3_tail(n, delta)
    b = 2.0 * math.sqrt(math.log(n + 1.0) / n + math.log(2.0 / delta) / n)
    return a, b


def th4_batch(vhat_star: np.ndarray, n: int, delta: float) -> np.ndarray:
    a, b = th4_terms(n, delta)
    return a + 1.5 * b * b + b * math.sqrt(a) + 1.5 * b * np.sqrt(vhat_star)


# ---------------------------------------------------------------------------
# scalar API

def _check_n(n: int, least: int = 1) -> int:
    if int(n) != n or n < least:
        raise InvalidArgument(f"n must be an integer >= {least}, got {n!r}")
    return int(n)


def _check_m_vs_n(m: int, n: int) -> int:
    m = _check_m(m)
    if m > n:
        raise InvalidArgument(f"m={m} exceeds n={n}; the moment sum needs m <= n")
    return m


def baseline_bound(n: int, delta: float) -> BoundResult:
    """``sqrt(1/n) + sqrt(log(1/delta) / (2n))``."""
    n = _check_n(n)
    _check_delta(delta)
    return BoundResult(
        Method.BASELINE, baseline_radius(n, delta), delta,
        components={"expectation_term": math.sqrt(1.0 / n),
                    "deviation_term": math.sqrt(math.log(1.0 / delta) / (2.0 * n))},
    )


def th1_oracle_bound(p: Distribution, n: int, delta: float, m: int) -> BoundResult:
    """Markov bound on the m-th moment of the sup deviation, using the true ``p``.

    ``(1/n) (delta^-1 sum_{k<=m/2} k^(m-k) n^k sum_i p_i^k (1-p_i)^k)^(1/m)``.
    The ``displayed_form`` component moves the ``1/m`` power inside the
    k-sum, which can only enlarge the value.
    """
    n = _check_n(n)
    _check_delta(delta)
    m = _check_m_vs_n(m, n)
    probs = np.asarray(p.probs if isinstance(p, Distribution) else p, dtype=np.float64)[None, :]
    log_s = th1_log_moment(probs, n, m)
    radius = float(_radius_from_log(log_s + math.log(1.0 / delta), n, m)[0])
    terms = _log_weights(m, n) + _log_power_sums(_log_variances(probs), m // 2)[0]
    with np.errstate(under="ignore"):
        displayed = float(np.exp(-math.log(delta) / m) * np.sum(np.exp(terms / m)) / n)
    return BoundResult(Method.TH1_ORACLE, radius, delta, m,
                       {"log_moment_sum": float(log_s[0]), "displayed_form": displayed})


def th1_worstcase_bound(n: int, delta: float, m: int) -> BoundResult:
    """Distribution-free version of :func:`th1_oracle_bound`.

    Replaces ``sum_i (p_i(1-p_i))^k`` by its envelope ``exp(1-k)``.  The
    ``leading`` component is the closed form of the top (``k = m/2``) term.
    """
    n = _check_n(n)
    _check_delta(delta)
    m = _check_m_vs_n(m, n)
    radius = th1_worst_radius(n, delta, m)
    lead = worst_case_leading(m, delta) / math.sqrt(n)
    return BoundResult(Method.TH1_WORST, radius, delta, m, {"leading": lead})


def _resolve_auto(m, rule, n):
    if m == "auto" or m is None:
        return _clamp_m(rule, n)
    return m


def th2_bound(phat: MleEstimate, delta1: float, delta2: float, m: int | str = "auto") -> BoundResult:
    """Data-dependent moment bound, valid with probability ``1 - delta1 - delta2``.

    ``(1/n) (delta1^-1 n/(n-1) (sum_i sum_{k<=m/2} k^(m-k) n^k vhat_i^k + eps))^(1/m)``
    with ``eps = epsilon_term(n, delta2, m)``.
    """
    n = _check_n(phat.n, 2)
    _check_delta(delta1, "delta1")
    _check_delta(delta2, "delta2")
    m = _check_m_vs_n(_resolve_auto(m, optimal_m_th2(delta1), n), n)
    probs = phat.probs[None, :]
    radius = float(th2_batch(probs, n, delta1, delta2, m)[0])
    radius_prop = float(th2_batch(probs, n, delta1, delta2, m, form="proposition")[0])
    return BoundResult(Method.TH2, radius, delta1 + delta2, m, {
        "log_moment_sum": float(th1_log_moment(probs, n, m)[0]),
        "log_epsilon": log_epsilon_term(n, delta2, m),
        "log_epsilon_proposition": log_epsilon_term(n, delta2, m, "proposition"),
        "radius_proposition_form": radius_prop,
    })


def cor21_bound(phat: MleEstimate, delta1: float, delta2: float, m: int | str = "auto") -> BoundResult:
    """Simplified data-dependent bound, ``k^(m-k)`` relaxed to ``(m/2)^m``."""
    n = _check_n(phat.n, 2)
    _check_delta(delta1, "delta1")
    _check_delta(delta2, "delta2")
    m = _check_m_vs_n(_resolve_auto(m, optimal_m_cor21(delta1), n), n)
    probs = phat.probs[None, :]
    radius = float(cor21_batch(probs, n, delta1, delta2, m)[0])
    slack = _cor21_slack(n, delta1, delta2, m)
    return BoundResult(Method.COR21, radius, delta1 + delta2, m, {
        "data_term": radius - slack,
        "slack_term": slack,
        "a": COR21_A,
        "multiplier": cor21_multiplier(m, delta1),
    })


def _require_large_n(n: int) -> int:
    n = _check_n(n)
    if n < MIN_N_LARGE:
        raise PreconditionError(f"requires n >= {MIN_N_LARGE} (theorem precondition), got n={n}")
    return n


def th3_bound(p: Distribution, n: int, delta: float) -> tuple[BoundResult, BoundResult, BoundResult]:
    """Variance-adaptive oracle bounds, valid with probability ``1 - delta - 81/n``.

    Returns the three forms in order: with ``V*``, with ``phi(v*)`` and with
    ``v* log(n+1)``.  The first is never larger than the other two.
    """
    n = _require_large_n(n)
    _check_delta(delta)
    vs, Vs = v_star(p), V_star(p)
    tail = _th3_tail(n, delta)
    conf = vs / n * math.log(2.0 / delta)
    fp = delta + MIN_N_LARGE / n
    out = []
    for method, complexity in ((Method.TH3_UB1, Vs), (Method.TH3_UB2, phi(vs)),
                               (Method.TH3_UB3, vs * math.log(n + 1.0))):
        radius = 2.0 * math.sqrt(complexity / n + conf) + tail
        out.append(BoundResult(method, radius, fp, None, {
            "v_star": vs, "V_star": Vs, "complexity": complexity, "tail": tail}))
    return tuple(out)


def th4_bound(vhat_star: float, n: int, delta: float) -> BoundResult:
    """Empirical variance bound ``a + 3b^2/2 + b sqrt(a) + 3b sqrt(vhat*)/2``."""
    n = _require_large_n(n)
    _check_delta(delta)
    if not 0.0 <= vhat_star <= 0.25:
        raise InvalidArgument(f"vhat_star must lie in [0, 1/4], got {vhat_star!r}")
    a, b = th4_terms(n, delta)
    radius = float(th4_batch(np.array([vhat_star]), n, delta)[0])
    return BoundResult(Method.TH4, radius, delta + MIN_N_LARGE / n, None,
                       {"a": a, "b": b, "vhat_star": vhat_star})


# ---------------------------------------------------------------------------
# dispatch

def compute_bound(spec: BoundSpec, n: int, phat: MleEstimate | None = None,
                  p: Distribution | None = None) -> BoundResult:
    """Evaluate ``spec`` at sample size ``n``.

    Sample-based bounds need ``phat``; oracle bounds need the truth ``p``.
    Raises :class:`PreconditionError` when ``n`` is outside the bound's range.
    """
    method = spec.method
    reason = spec.applicable(n)
    if reason:
        raise PreconditionError(f"{method.value}: {reason}")
    if method.needs_sample and phat is None:
        raise InvalidArgument(f"{method.value} needs the sample estimate")
    if method.needs_truth and p is None:
        raise InvalidArgument(f"{method.value} is an oracle bound and needs the true distribution")
    if phat is not None and phat.n != n:
        raise InvalidArgument(f"estimate has n={phat.n}, asked for n={n}")
    m = spec.resolve_m(n)
    if method is Method.BASELINE:
        return baseline_bound(n, spec.delta)
    if method is Method.TH1_ORACLE:
        return th1_oracle_bound(p, n, spec.delta, m)
    if method is Method.TH1_WORST:
        return th1_worstcase_bound(n, spec.delta, m)
    if method is Method.TH2:
        return th2_bound(phat, spec.delta1, spec.delta2, m)
    if method is Method.COR21:
        return cor21_bound(phat, spec.delta1, spec.delta2, m)
    if method is Method.TH4:
        return th4_bound(phat.vhat_star, n, spec.delta)
    ub1, ub2, ub3 = th3_bound(p, n, spec.delta)
    return {Method.TH3_UB1: ub1, Method.TH3_UB2: ub2, Method.TH3_UB3: ub3}[method]


def radius_batch(spec: BoundSpec, n: int, probs: np.ndarray | None = None,
                 p: Distribution | None = None) -> np.ndarray | float:
    """Radii for a stack of MLE vectors ``probs`` of shape ``(B, A)``.

    Returns a scalar for bounds that do not depend on the sample.
    """
    method = spec.method
    reason = spec.applicable(n)
    if reason:
        raise PreconditionError(f"{method.value}: {reason}")
    m = spec.resolve_m(n)
    if method is Method.TH2:
        return th2_batch(probs, n, spec.delta1, spec.delta2, m)
    if method is Method.COR21:
        return cor21_batch(probs, n, spec.delta1, spec.delta2, m)
    if method is Method.TH4:
        return th4_batch(np.max(probs * (1.0 - probs), axis=1), n, spec.delta)
    if method is Method.BASELINE:
        return baseline_radius(n, spec.delta)
    if method is Method.TH1_WORST:
        return th1_worst_radius(n, spec.delta, m)
    return compute_bound(spec, n, p=p).radius
