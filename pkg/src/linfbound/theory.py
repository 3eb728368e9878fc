"""Numerical checks of the analytic side results.

Each check evaluates a closed-form expression on a documented grid.  None of
them is a proof; they confirm (or refute) the stated inequalities and limits
at finite ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binomial import normal_quantile
from .distributions import Distribution, InvalidArgument, PreconditionError, V_star, phi, v_star

ARGMAX_ATOL = 1e-12
FANO_MIN_N = 16
# separation constant for the Fano pair; any value in (0, 1/2] is allowed
FANO_C = 0.25


def log_f_of_n(n) -> np.ndarray | float:
    """``log f(n)`` with ``beta = log n``; vectorised over integer ``n >= 10``."""
    arr = np.asarray(n, dtype=np.float64)
    if np.any(arr < 10):
        raise PreconditionError("f(n) is only considered for n >= 10")
    b = np.log(arr)
    out = (-b * np.log(b) + 2.0 * np.log(arr) + (arr - b) * -np.log1p(-b / arr)
           - np.log(np.exp(b * math.log(2.0)) - 2.0))
    return float(out) if out.ndim == 0 else out


def f_of_n(n):
    """``beta^-beta n^2 ((n-beta)/n)^(beta-n) / (2^beta - 2)`` with ``beta = log n``."""
    v = np.exp(log_f_of_n(n))
    return float(v) if np.ndim(v) == 0 else v


def light_mass_failure_prob(n: int) -> float:
    """Failure probability of the light-mass event, ``2 f(n) / n``."""
    return 2.0 * f_of_n(n) / n


@dataclass(frozen=True)
class FanoPair:
    p: Distribution
    q: Distribution
    n: int

    @property
    def a(self) -> float:
        return float(self.p.probs[0])

    @property
    def b(self) -> float:
        return float(self.p.probs[1])

    @property
    def separation(self) -> float:
        return self.a - self.b


def fano_masses(n: int) -> tuple[float, float]:
    """``a = log n / (2 n log log n)`` and ``b = (1 - a)/(n - 1)``."""
    if int(n) != n or n < FANO_MIN_N:
        raise PreconditionError(f"construction needs n >= {FANO_MIN_N}, got {n!r}")
    a = math.log(n) / (2.0 * n * math.log(math.log(n)))
    return a, (1.0 - a) / (n - 1)


def fano_pair(n: int) -> FanoPair:
    """Two distributions on ``n`` symbols differing by a swap of the first two masses."""
    a, b = fano_masses(n)
    p = np.full(int(n), b)
    p[0] = a
    # absorb rounding so the vector passes the sum check
    p[2:] = (1.0 - a - b) / (n - 2)
    q = p.copy()
    q[0], q[1] = q[1], q[0]
    return FanoPair(Distribution(p), Distribution(q), int(n))


def fano_kl_scaled(n: int) -> float:
    """``(n / log n) KL(p || q)`` for the Fano pair, from the two-term closed form."""
    a, b = fano_masses(n)
    return n / math.log(n) * (a - b) * math.log(a / b)


def kl(p, q) -> float:
    """``sum_i p_i log(p_i / q_i)`` with ``0 log 0 = 0``."""
    pv = p.probs if isinstance(p, Distribution) else np.asarray(p, dtype=np.float64)
    qv = q.probs if isinstance(q, Distribution) else np.asarray(q, dtype=np.float64)
    if pv.shape != qv.shape:
        raise InvalidArgument("p and q must share a support")
    mask = pv > 0
    if np.any(qv[mask] == 0):
        raise InvalidArgument("p is not absolutely continuous with respect to q")
    return float(max(0.0, math.fsum(pv[mask] * np.log(pv[mask] / qv[mask]))))


def selective_lb(p_top: float, n: int, delta: float) -> float:
    """First-order lower bound ``z_{delta/2} sqrt(p_top (1 - p_top) / n)``.

    The ``O(1/n)`` remainder has no explicit constant and is omitted.
    """
    if not 0.0 <= p_top <= 1.0:
        raise InvalidArgument(f"p_top must lie in [0, 1], got {p_top!r}")
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    return normal_quantile(delta / 2.0) * math.sqrt(p_top * (1.0 - p_top) / n)


def argmax_variance_check(p: Distribution) -> bool:
    """Whether ``max_i p_i(1-p_i)`` equals ``p_(1)(1-p_(1))``."""
    x = p.probs
    top = x.max()
    return abs(float(np.max(x * (1.0 - x))) - float(top * (1.0 - top))) <= ARGMAX_ATOL


# ---------------------------------------------------------------------------
# report

def _check(name, passed, **detail):
    return {"name": name, "passed": bool(passed), **detail}


def f_argmax(lo: int = 10, hi: int = 200) -> tuple[int, float]:
    grid = np.arange(lo, hi + 1)
    vals = f_of_n(grid)
    i = int(np.argmax(vals))
    return int(grid[i]), float(vals[i])


def f_strictly_decreasing(lo: int = 201, hi: int = 100_000) -> bool:
    g = log_f_of_n(np.arange(lo, hi + 1))
    return bool(np.all(np.diff(g) < 0))


def random_distributions(count: int, a_lo: int, a_hi: int, seed: int):
    """Dirichlet(1) vectors with alphabet sizes drawn uniformly from ``[a_lo, a_hi]``."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        A = int(rng.integers(a_lo, a_hi + 1))
        w = rng.exponential(size=A)
        w /= w.sum()
        w[-1] = 1.0 - math.fsum(w[:-1])
        if w[-1] < 0:
            w[-1] = 0.0
            w /= math.fsum(w)
        yield Distribution(w)


def run_all_checks(seed: int = 0) -> dict:
    """Evaluate every numerical check and return a JSON-ready report."""
    checks = []

    arg, fmax = f_argmax()
    checks.append(_check("f_argmax_10_200_is_33", arg == 33, argmax=arg, max_value=fmax,
                         note="integer argmax over n in 10..200"))
    log_grid = np.unique(np.round(np.logspace(1, 6, 2000)).astype(int))
    checks.append(_check("f_le_81_over_2", bool(np.all(f_of_n(log_grid) <= 40.5)),
                         max_value=float(np.max(f_of_n(log_grid))), grid="log grid 10..1e6"))
    checks.append(_check("f_decreasing_201_1e5", f_strictly_decreasing()))
    ns = np.arange(10, 100_001, dtype=np.float64)
    b = np.log(ns)
    ratio = b * b / (ns - b)
    checks.append(_check("beta_sq_over_n_minus_beta_decreasing", bool(np.all(np.diff(ratio) < 0))))
    lm = [light_mass_failure_prob(n) <= 81.0 / n for n in range(10, 10_001)]
    checks.append(_check("light_mass_le_81_over_n", all(lm), grid="10..1e4"))

    ks = {n: fano_kl_scaled(n) for n in (10**4, 10**5, 10**6, 10**7)}
    vals = list(ks.values())
    checks.append(_check("kl_limit_within_0.1_at_1e7", abs(ks[10**7] - 0.5) <= 0.1,
                         values={str(k): v for k, v in ks.items()}))
    checks.append(_check("kl_monotone_toward_half",
                         all(abs(y - 0.5) < abs(x - 0.5) for x, y in zip(vals, vals[1:]))))
    sep = []
    for n in (10**3, 10**4, 10**5, 10**6):
        pair = fano_pair(n)
        sep.append(pair.separation >= FANO_C * math.log(n) / (n * math.log(math.log(n))))
    checks.append(_check("fano_separation", all(sep), c=FANO_C))

    dists = list(random_distributions(1000, 2, 50, seed))
    ok_phi = all(V_star(p) <= phi(v_star(p)) + 1e-15 for p in dists)
    ok_log = all(V_star(p) <= v_star(p) * math.log(p.support_size + 1) + 1e-15 for p in dists)
    ok_arg = all(argmax_variance_check(p) for p in dists)
    checks.append(_check("V_star_le_phi_v_star", ok_phi, trials=len(dists)))
    checks.append(_check("V_star_le_v_star_log_A_plus_1", ok_log, trials=len(dists)))
    checks.append(_check("argmax_variance", ok_arg, trials=len(dists)))

    checks.append(_check("selective_lb_reference", True,
                         value=selective_lb(0.0213, 10**4, 0.05),
                         label="first-order lower bound, p_top=0.0213, n=1e4, delta=0.05"))
    return {"passed": all(c["passed"] for c in checks), "checks": checks}
