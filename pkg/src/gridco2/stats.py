"""Mean-difference testing for paired emission series.

Given a difference series d_t, the statistic is

    DM(mu) = (d_bar - mu) / sqrt(LRV / n)

where LRV is a truncated autocovariance sum estimating the long-run
variance.  By default the terms carry Bartlett weights w_i = 1 - |i|/(m+1),
which keeps the estimate nonnegative; the raw unweighted truncation is
available behind a flag.  The truncation lag defaults to floor(n^(1/3)).

The non-rejection interval of a two-sided level-alpha test collects every
hypothesised mean mu the test does not reject.  It has the closed form
d_bar +- z * se and can also be obtained by grid search, which is kept as a
slow oracle mode.

Everything here is plain left-to-right float arithmetic, so results are
bit-for-bit reproducible against a naive reference implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

from .errors import DegenerateVarianceError


def default_lag(n: int) -> int:
    """Truncation lag floor(n^(1/3)), computed without float cube-root error."""
    if n < 1:
        raise ValueError(f"need at least one observation, got {n}")
    m = int(round(n ** (1.0 / 3.0)))
    while (m + 1) ** 3 <= n:
        m += 1
    while m**3 > n:
        m -= 1
    return m


def autocovariance(values, lag: int) -> float:
    """Autocovariance at a lag, normalized by the full sample size n.

    Symmetric in the lag sign: gamma(-i) == gamma(i).
    """
    x = [float(v) for v in values]
    n = len(x)
    k = abs(int(lag))
    if n == 0:
        raise ValueError("need at least one observation")
    if k >= n:
        raise ValueError(f"lag {lag} out of range for {n} observations")
    mean = sum(x) / n
    total = 0.0
    for t in range(n - k):
        total += (x[t] - mean) * (x[t + k] - mean)
    return total / n


def long_run_variance(values, m: int | None = None, bartlett: bool = True) -> float:
    """Truncated autocovariance sum ``sum_{i=-m}^{m} w_i * gamma_i``.

    ``bartlett`` selects the weights w_i = 1 - |i|/(m+1); with it off, the
    raw unweighted truncation is used, which can go nonpositive for strongly
    alternating series.  A nonpositive estimate raises
    :class:`DegenerateVarianceError`.
    """
    x = [float(v) for v in values]
    n = len(x)
    if n == 0:
        raise ValueError("need at least one observation")
    if m is None:
        m = default_lag(n)
    if m < 0:
        raise ValueError(f"lag must be nonnegative, got {m}")
    m = min(m, n - 1)
    total = autocovariance(x, 0)
    for i in range(1, m + 1):
        weight = 1.0 - i / (m + 1.0) if bartlett else 1.0
        total += 2.0 * weight * autocovariance(x, i)
    if total <= 0:
        raise DegenerateVarianceError(
            f"long-run variance estimate is not positive ({total}); "
            "the series may be constant or too short"
        )
    return total


def dm_statistic(
    values, mu: float = 0.0, m: int | None = None, bartlett: bool = True
) -> float:
    """Studentized departure of the sample mean from a hypothesised mean."""
    x = [float(v) for v in values]
    se = _standard_error(x, m, bartlett)
    return (sum(x) / len(x) - mu) / se


def non_rejection_interval(
    values, alpha: float = 0.05, m: int | None = None, bartlett: bool = True
) -> tuple[float, float]:
    """All hypothesised means a two-sided level-alpha test does not reject.

    Closed form: d_bar +- z_(1-alpha/2) * se.
    """
    x = [float(v) for v in values]
    z = _critical_value(alpha)
    se = _standard_error(x, m, bartlett)
    d_bar = sum(x) / len(x)
    return (d_bar - z * se, d_bar + z * se)


def non_rejection_interval_grid(
    values,
    alpha: float = 0.05,
    m: int | None = None,
    bartlett: bool = True,
    step_fraction: float = 0.01,
    span: float = 4.0,
) -> tuple[float, float]:
    """Grid-search oracle for :func:`non_rejection_interval`.

    Scans mu over d_bar +- span * se in steps of ``step_fraction * se`` and
    returns the extreme non-rejected points.  Agrees with the closed form to
    within one grid step; kept for verification, not speed.
    """
    x = [float(v) for v in values]
    z = _critical_value(alpha)
    se = _standard_error(x, m, bartlett)
    d_bar = sum(x) / len(x)
    step = step_fraction * se
    steps = int(round(2 * span / step_fraction))
    accepted = [
        mu
        for mu in (d_bar - span * se + i * step for i in range(steps + 1))
        if abs((d_bar - mu) / se) <= z
    ]
    if not accepted:
        raise DegenerateVarianceError("grid search found no non-rejected mean")
    return (min(accepted), max(accepted))


@dataclass(frozen=True)
class MeanDifferenceReport:
    """The full outcome of one pairwise mean-difference test."""

    method_i: str
    method_j: str
    n: int
    d_bar: float
    lag: int
    long_run_variance: float
    std_error: float
    statistic_at_zero: float
    alpha: float
    interval: tuple[float, float]

    @property
    def rejects_zero(self) -> bool:
        """True when a zero mean difference lies outside the interval."""
        lo, hi = self.interval
        return not lo <= 0.0 <= hi


def mean_difference_report(
    method_i: str,
    method_j: str,
    values,
    alpha: float = 0.05,
    m: int | None = None,
    bartlett: bool = True,
) -> MeanDifferenceReport:
    """Run the test on a difference series and collect every figure."""
    x = [float(v) for v in values]
    n = len(x)
    if n == 0:
        raise ValueError("need at least one observation")
    lag = default_lag(n) if m is None else min(m, n - 1)
    lrv = long_run_variance(x, lag, bartlett)
    se = math.sqrt(lrv / n)
    d_bar = sum(x) / n
    z = _critical_value(alpha)
    return MeanDifferenceReport(
        method_i=method_i,
        method_j=method_j,
        n=n,
        d_bar=d_bar,
        lag=lag,
        long_run_variance=lrv,
        std_error=se,
        statistic_at_zero=d_bar / se,
        alpha=alpha,
        interval=(d_bar - z * se, d_bar + z * se),
    )


def _standard_error(x: list[float], m: int | None, bartlett: bool) -> float:
    lrv = long_run_variance(x, m, bartlett)
    return math.sqrt(lrv / len(x))


def _critical_value(alpha: float) -> float:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return NormalDist().inv_cdf(1.0 - alpha / 2.0)
