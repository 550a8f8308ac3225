"""Tail-exponent estimation and extreme-value scanning.

Two estimators of the upper-tail Pareto exponent are provided: the Hill
estimator on the k largest order statistics, and a least-squares fit of
the log survival function against the log threshold. Both are meant for
per-date cross-sections of performance ratios; `tail_series` sweeps one
of them across a whole performance panel.

`detect_extremes` finds strict local minima and maxima of any per-date
series inside a symmetric window, which is how dips of the tail exponent
are located in a panel diagnostic.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .errors import (
    BadK,
    DegenerateTail,
    NonFiniteVariance,
    TooFewTailPoints,
    WindowTooLarge,
)
from .panel import FloatArray, PerformancePanel, SurvivalCurve

HILL = "hill"
LOGLOG = "loglog"


@dataclass(frozen=True)
class TailEstimate:
    """One tail-exponent estimate.

    ``k`` is the number of upper order statistics (Hill) or fitted points
    (log-log) actually used, out of a cross-section of size ``n``.
    """

    alpha: float
    k: int
    n: int
    method: str

    def __post_init__(self) -> None:
        if not (0 < self.k < self.n):
            raise ValueError(f"k={self.k} must satisfy 0 < k < n={self.n}")
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError(f"tail exponent must be positive and finite, got {self.alpha}")
        if self.method not in (HILL, LOGLOG):
            raise ValueError(f"unknown method: {self.method!r}")


# ---------------------------------------------------------------------------
# Hill estimator
# ---------------------------------------------------------------------------


def hill_estimator(x: npt.ArrayLike, k: int) -> TailEstimate:
    """Hill estimate of the upper-tail exponent from the k largest values.

    Parameters
    ----------
    x:
        Strictly positive sample, any order.
    k:
        Number of upper order statistics, 1 <= k < len(x).

    Returns
    -------
    TailEstimate
        alpha = k / sum(log(x_(n-i+1) / x_(n-k)) for i = 1..k), the
        reciprocal of the mean log-excess over the k-th largest value.

    Raises
    ------
    BadK
        If k is out of range.
    DegenerateTail
        If the k+1 largest values are all equal, so the mean log-excess
        is zero and no exponent is defined.
    """
    arr = np.asarray(x, dtype=np.float64)
    n = int(arr.size)
    if not 1 <= k < n:
        raise BadK(k, n)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("sample must be strictly positive and finite")
    ordered = np.sort(arr)
    threshold = ordered[n - k - 1]
    mean_log_excess = float(np.mean(np.log(ordered[n - k:] / threshold)))
    if mean_log_excess == 0.0:
        raise DegenerateTail(
            f"the {k + 1} largest values are all equal; no tail spread"
        )
    return TailEstimate(alpha=1.0 / mean_log_excess, k=k, n=n, method=HILL)


def hill_k_sweep(x: npt.ArrayLike, k_values: list[int] | None = None) -> list[TailEstimate]:
    """Hill estimates across a range of k, for diagnostic plots.

    Defaults to every k in 1..n-1. Degenerate ks are skipped.
    """
    arr = np.asarray(x, dtype=np.float64)
    n = int(arr.size)
    if k_values is None:
        k_values = list(range(1, n))
    out: list[TailEstimate] = []
    for k in k_values:
        try:
            out.append(hill_estimator(arr, k))
        except DegenerateTail:
            continue
    return out


# ---------------------------------------------------------------------------
# log-log survival fit
# ---------------------------------------------------------------------------


def powerlaw_slope(z: npt.ArrayLike, s: npt.ArrayLike) -> tuple[float, float]:
    """Least-squares slope and intercept of log(s) against log(z).

    Needs at least 3 points with z > 0 and s > 0. A slope that is not
    strictly negative means the points carry no decaying tail, which is
    flagged as DegenerateTail (the implied exponent would be -slope <= 0).
    """
    zs = np.asarray(z, dtype=np.float64)
    ss = np.asarray(s, dtype=np.float64)
    if zs.shape != ss.shape or zs.ndim != 1:
        raise ValueError("z and s must be 1-d arrays of equal length")
    if zs.size < 3:
        raise TooFewTailPoints(int(zs.size))
    if np.any(zs <= 0.0) or np.any(ss <= 0.0):
        raise ValueError("log-log fit needs strictly positive z and s")
    lz = np.log(zs)
    ls = np.log(ss)
    zc = lz - lz.mean()
    denom = float(zc @ zc)
    if denom == 0.0:
        raise ValueError("thresholds must not all coincide")
    slope = float(zc @ (ls - ls.mean())) / denom
    intercept = float(ls.mean() - slope * lz.mean())
    if slope >= 0.0:
        raise DegenerateTail(
            f"fitted tail exponent {-slope} is not positive; survival does not decay"
        )
    return slope, intercept


def loglog_tail_fit(curve: SurvivalCurve, z_min: float | None = None) -> TailEstimate:
    """Tail exponent from an OLS fit of log S(z) over the curve's own steps.

    Fits only sample points strictly above ``z_min`` that still have a
    positive survival value (the largest point always has S = 0 and is
    excluded). ``z_min`` defaults to the cross-sectional median.
    """
    if z_min is None:
        z_min = float(np.median(curve.sorted_values))
    zs, ss = curve.step_points()
    usable = (zs > z_min) & (ss > 0.0)
    n_usable = int(usable.sum())
    if n_usable < 3:
        raise TooFewTailPoints(n_usable)
    slope, _ = powerlaw_slope(zs[usable], ss[usable])
    return TailEstimate(alpha=-slope, k=n_usable, n=curve.n, method=LOGLOG)


# ---------------------------------------------------------------------------
# Pareto variance
# ---------------------------------------------------------------------------


def pareto_variance(alpha: float) -> float:
    """Variance of a unit-scale Pareto law with tail exponent ``alpha``.

    alpha / ((alpha - 1)^2 (alpha - 2)); only finite for alpha > 2.
    """
    if not math.isfinite(alpha) or alpha <= 2.0:
        raise NonFiniteVariance(alpha)
    return alpha / ((alpha - 1.0) ** 2 * (alpha - 2.0))


# ---------------------------------------------------------------------------
# per-date tail series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KPolicy:
    """How many upper order statistics the per-date Hill estimator uses.

    k = ceil(fraction * n), clamped to [1, n - 1]. Dates with fewer than
    ``min_n`` present stocks produce a gap instead of an estimate.
    """

    fraction: float = 0.10
    min_n: int = 10

    def __post_init__(self) -> None:
        if not 0.0 < self.fraction < 1.0:
            raise ValueError("fraction must lie strictly between 0 and 1")
        if self.min_n < 2:
            raise ValueError("min_n must be at least 2")

    def k_for(self, n: int) -> int | None:
        """k for a cross-section of size n, or None when n is too small."""
        if n < self.min_n:
            return None
        return min(max(math.ceil(self.fraction * n), 1), n - 1)


@dataclass(frozen=True)
class TailSeries:
    """Per-date tail estimates; None marks a date with no usable estimate."""

    dates: tuple[dt.date, ...]
    estimates: tuple[TailEstimate | None, ...]
    k_policy: KPolicy = field(default_factory=KPolicy)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "estimates", tuple(self.estimates))
        if len(self.dates) != len(self.estimates):
            raise ValueError("one estimate slot per date required")

    def alphas(self) -> FloatArray:
        """Exponent per date, NaN at gaps."""
        return np.array(
            [e.alpha if e is not None else np.nan for e in self.estimates],
            dtype=np.float64,
        )

    def __len__(self) -> int:
        return len(self.dates)


def tail_series(perf: PerformancePanel, k_policy: KPolicy | None = None) -> TailSeries:
    """Hill exponent for every date of a performance panel.

    Dates whose cross-section is too small under the policy, or whose
    tail is degenerate (for example the reference date itself, where all
    performances equal 1), yield gaps; the sweep never aborts.
    """
    policy = k_policy if k_policy is not None else KPolicy()
    estimates: list[TailEstimate | None] = []
    for row in perf.values:
        xs = row[np.isfinite(row)]
        k = policy.k_for(int(xs.size))
        if k is None:
            estimates.append(None)
            continue
        try:
            estimates.append(hill_estimator(xs, k))
        except DegenerateTail:
            estimates.append(None)
    return TailSeries(dates=perf.dates, estimates=tuple(estimates), k_policy=policy)


# ---------------------------------------------------------------------------
# extreme detection
# ---------------------------------------------------------------------------

LOCAL_MINIMUM = "local-minimum"
LOCAL_MAXIMUM = "local-maximum"


@dataclass(frozen=True)
class ExtremeEvent:
    """A strict local extreme of a per-date series."""

    date: dt.date | int
    kind: str
    value: float
    window: int


def detect_extremes(
    values: npt.ArrayLike,
    window: int,
    dates: tuple[dt.date, ...] | None = None,
) -> list[ExtremeEvent]:
    """Strict local minima and maxima within a symmetric window.

    A date t is an event iff its value is strictly below (above) every
    other value within ``window`` steps on both sides. Only dates with a
    full window on each side are candidates, so plateaus and monotone
    stretches produce no events. Windows containing non-finite values
    (gaps) are skipped.
    """
    series = np.asarray(values, dtype=np.float64)
    if series.ndim != 1:
        raise ValueError("expected a 1-d series")
    if window < 1:
        raise ValueError("window half-width must be at least 1")
    n = int(series.size)
    if n <= 2 * window:
        raise WindowTooLarge(window, n)
    if dates is not None and len(dates) != n:
        raise ValueError("dates must align with the series")
    events: list[ExtremeEvent] = []
    for t in range(window, n - window):
        segment = series[t - window : t + window + 1]
        if not np.isfinite(segment).all():
            continue
        center = segment[window]
        others = np.delete(segment, window)
        when = dates[t] if dates is not None else t
        if center < others.min():
            events.append(ExtremeEvent(when, LOCAL_MINIMUM, float(center), window))
        elif center > others.max():
            events.append(ExtremeEvent(when, LOCAL_MAXIMUM, float(center), window))
    return events
