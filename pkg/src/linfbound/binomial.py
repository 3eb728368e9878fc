"""Binomial confidence intervals.

Clopper-Pearson endpoints are found by bisection on the exact binomial CDF
rather than through beta quantiles, so their accuracy does not depend on a
special-function implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from statistics import NormalDist

from .distributions import InvalidArgument, PreconditionError

BISECT_ITERS = 80

_STD_NORMAL = NormalDist()


class CIMethod(str, Enum):
    CLOPPER_PEARSON = "clopper-pearson"
    THULIN = "thulin"
    EMPIRICAL_BERNSTEIN = "empirical-bernstein"


@dataclass(frozen=True)
class BinomialCI:
    lower: float
    upper: float
    method: CIMethod

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise InvalidArgument(f"invalid interval [{self.lower}, {self.upper}]")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def __contains__(self, theta: float) -> bool:
        return self.lower <= theta <= self.upper

    def to_dict(self) -> dict:
        return {"method": self.method.value, "lower": self.lower, "upper": self.upper}


def _check_yn(y: int, n: int) -> None:
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    if int(y) != y or not 0 <= y <= n:
        raise InvalidArgument(f"y must be an integer in [0, n], got {y!r}")


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise InvalidArgument(f"delta must lie in (0, 1), got {delta!r}")


def binomial_cdf(y: int, n: int, theta: float) -> float:
    """``P(Y <= y)`` for ``Y ~ Binomial(n, theta)``.

    Terms are built from log-gamma coefficients and summed with
    ``math.fsum``; above the mean the upper tail is summed instead.
    """
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    if not 0.0 <= theta <= 1.0:
        raise InvalidArgument(f"theta must lie in [0, 1], got {theta!r}")
    if y < 0:
        return 0.0
    if y >= n:
        return 1.0
    if theta == 0.0:
        return 1.0
    if theta == 1.0:
        return 0.0
    lt, l1t = math.log(theta), math.log1p(-theta)
    lgn = math.lgamma(n + 1)

    def tail(js):
        return math.fsum(math.exp(lgn - math.lgamma(j + 1) - math.lgamma(n - j + 1) + j * lt + (n - j) * l1t)
                         for j in js)

    # terms further than 40 sd + 200 from the mean carry mass below exp(-300)
    mu = n * theta
    reach = 40.0 * math.sqrt(mu * (1.0 - theta)) + 200.0
    lo_cut, hi_cut = max(0, math.floor(mu - reach)), min(n, math.ceil(mu + reach))
    # sum whichever tail is smaller so values near 1 keep their precision
    if y < mu:
        return min(1.0, tail(range(lo_cut, int(y) + 1)))
    return max(0.0, 1.0 - tail(range(int(y) + 1, hi_cut + 1)))


def binomial_pmf(y: int, n: int, theta: float) -> float:
    if theta == 0.0:
        return 1.0 if y == 0 else 0.0
    if theta == 1.0:
        return 1.0 if y == n else 0.0
    return math.exp(math.lgamma(n + 1) - math.lgamma(y + 1) - math.lgamma(n - y + 1)
                    + y * math.log(theta) + (n - y) * math.log1p(-theta))


def _bisect_decreasing(f, target: float) -> float:
    """Root of ``f(theta) = target`` for ``f`` nonincreasing on [0, 1]."""
    lo, hi = 0.0, 1.0
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if f(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=65536)
def _cp(y: int, n: int, delta: float) -> tuple[float, float]:
    half = delta / 2.0
    lower = 0.0 if y == 0 else _bisect_decreasing(lambda t: binomial_cdf(y - 1, n, t), 1.0 - half)
    upper = 1.0 if y == n else _bisect_decreasing(lambda t: binomial_cdf(y, n, t), half)
    return lower, upper


def clopper_pearson(y: int, n: int, delta: float) -> BinomialCI:
    """Exact two-sided interval with coverage at least ``1 - delta``.

    ``lower`` solves ``F(y-1; n, theta) = 1 - delta/2`` and ``upper`` solves
    ``F(y; n, theta) = delta/2``; both to within ``2^-80`` of bisection.
    """
    _check_yn(y, n)
    _check_delta(delta)
    lo, hi = _cp(int(y), int(n), float(delta))
    return BinomialCI(lo, hi, CIMethod.CLOPPER_PEARSON)


def clopper_pearson_closed(y: int, n: int, delta: float) -> BinomialCI:
    """Closed forms for the boundary cases ``y = 0`` and ``y = n``."""
    _check_yn(y, n)
    _check_delta(delta)
    if y == 0:
        return BinomialCI(0.0, 1.0 - (delta / 2.0) ** (1.0 / n), CIMethod.CLOPPER_PEARSON)
    if y == n:
        return BinomialCI((delta / 2.0) ** (1.0 / n), 1.0, CIMethod.CLOPPER_PEARSON)
    raise InvalidArgument("closed form exists only for y in {0, n}")


def normal_quantile(q: float) -> float:
    """Upper ``q`` quantile ``z`` of the standard normal, ``Phi(z) = 1 - q``."""
    if not 0.0 < q < 1.0:
        raise InvalidArgument(f"q must lie in (0, 1), got {q!r}")
    return _STD_NORMAL.inv_cdf(1.0 - q) if q > 0.5 else -_STD_NORMAL.inv_cdf(q)


def thulin_endpoints(y: int, n: int, delta: float) -> BinomialCI:
    """Second-order expansion of the Clopper-Pearson endpoints.

    ``theta_hat -/+ z sqrt(theta_hat(1-theta_hat)/n)`` plus the
    ``1/(3n)`` corrections, clamped to [0, 1].  Only defined for
    ``1 <= y <= n-1``.
    """
    _check_yn(y, n)
    _check_delta(delta)
    if y == 0 or y == n:
        raise PreconditionError(f"expansion holds for 1 <= y <= n-1, got y={y}, n={n}")
    th = y / n
    z = normal_quantile(delta / 2.0)
    half = z * math.sqrt(th * (1.0 - th) / n)
    lower = th - half + ((1.0 - 2.0 * th) * z * z - 1.0 - th) / (3.0 * n)
    upper = th + half + ((1.0 - 2.0 * th) * z * z + 2.0 - th) / (3.0 * n)
    return BinomialCI(min(max(lower, 0.0), 1.0), min(max(upper, 0.0), 1.0), CIMethod.THULIN)


def empirical_bernstein(theta_hat: float, n: int, delta: float) -> float:
    """Radius ``sqrt(5 theta_hat(1-theta_hat) log(2/delta)/n) + 5 log(2/delta)/n``."""
    if not 0.0 <= theta_hat <= 1.0:
        raise InvalidArgument(f"theta_hat must lie in [0, 1], got {theta_hat!r}")
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    _check_delta(delta)
    L = math.log(2.0 / delta)
    return math.sqrt(5.0 * theta_hat * (1.0 - theta_hat) * L / n) + 5.0 * L / n


def empirical_bernstein_ci(y: int, n: int, delta: float) -> BinomialCI:
    _check_yn(y, n)
    th = y / n
    r = empirical_bernstein(th, n, delta)
    return BinomialCI(max(0.0, th - r), min(1.0, th + r), CIMethod.EMPIRICAL_BERNSTEIN)


def all_intervals(y: int, n: int, delta: float) -> dict:
    """All three intervals keyed by method name; Thulin is marked skipped at ``y in {0, n}``."""
    out = {
        "clopper-pearson": clopper_pearson(y, n, delta).to_dict(),
        "empirical-bernstein": empirical_bernstein_ci(y, n, delta).to_dict(),
    }
    try:
        out["thulin"] = thulin_endpoints(y, n, delta).to_dict()
    except PreconditionError as exc:
        out["thulin"] = {"method": "thulin", "skipped": str(exc)}
    return out


def enumerated_coverage(theta: float, n: int, delta: float) -> float:
    """Exact coverage of the Clopper-Pearson interval at ``theta``."""
    return math.fsum(binomial_pmf(y, n, theta) for y in range(n + 1)
                     if theta in clopper_pearson(y, n, delta))
