"""Sup-norm confidence bounds for the multinomial MLE."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundResult,
    BoundSpec,
    Method,
    baseline_bound,
    compute_bound,
    cor21_bound,
    th1_oracle_bound,
    th1_worstcase_bound,
    th2_bound,
    th3_bound,
    th4_bound,
)
from .distributions import (  # noqa: E402
    CountVector,
    Distribution,
    InvalidArgument,
    MleEstimate,
    PreconditionError,
    mle,
    sample,
    sup_dev,
    uniform,
    zipf,
)

__all__ = [
    "BoundResult", "BoundSpec", "Method", "baseline_bound", "compute_bound", "cor21_bound",
    "th1_oracle_bound", "th1_worstcase_bound", "th2_bound", "th3_bound", "th4_bound",
    "CountVector", "Distribution", "InvalidArgument", "MleEstimate", "PreconditionError",
    "mle", "sample", "sup_dev", "uniform", "zipf",
]
