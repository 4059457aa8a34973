"""Heavy-tail diagnostics (Hill plot, emplot) and the two-sample KS test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTail, EmptySample, KTooLarge, NonPositiveDuration
from .trace_model import OrderedTaskTrace

SUMMARY_FRACTION = 0.05
KS_MAX_TERMS = 100
KS_TERM_CUTOFF = 1e-12
# Q(lambda) differs from 1 by < 1e-12 below this point and the series
# converges too slowly there to be summed in KS_MAX_TERMS terms.
_KS_SMALL_LAMBDA = 0.2


@dataclass(frozen=True)
class HillCurve:
    """Hill statistic for ``k = 1..k_max``.

    ``hill[k-1]`` is the mean log-excess of the top ``k`` order statistics
    over the ``(k+1)``-th largest, i.e. an estimate of ``1/alpha``.
    ``summary_alpha`` is the reciprocal of ``hill`` at ``k_summary``.
    """

    k: np.ndarray
    hill: np.ndarray
    summary_alpha: float
    k_summary: int

    @property
    def summary_hill(self) -> float:
        return float(self.hill[self.k_summary - 1])

    @property
    def points(self):
        return list(zip(self.k.tolist(), self.hill.tolist()))


@dataclass(frozen=True)
class KsResult:
    d_statistic: float
    p_value: float
    n1: int
    n2: int


def _positive_logs(trace: OrderedTaskTrace) -> np.ndarray:
    if trace.y[0] <= 0:
        raise NonPositiveDuration("tail statistics need strictly positive durations")
    return np.log(trace.y.astype(np.float64))


def hill_statistics(trace: OrderedTaskTrace, k_max: int) -> np.ndarray:
    n = trace.n
    if not 1 <= k_max <= n - 1:
        raise KTooLarge(f"k_max={k_max} outside [1, {n - 1}]")
    logs_desc = _positive_logs(trace)[::-1]
    k = np.arange(1, k_max + 1)
    top_sums = np.cumsum(logs_desc[:k_max])
    return top_sums / k - logs_desc[k]


def hill_curve(trace: OrderedTaskTrace, k_max: int, k_summary: int | None = None) -> HillCurve:
    stats = hill_statistics(trace, k_max)
    if k_summary is None:
        k_summary = int(SUMMARY_FRACTION * trace.n)
    k_summary = min(max(k_summary, 1), k_max)
    at_summary = stats[k_summary - 1]
    if not at_summary > 0:
        raise DegenerateTail(f"Hill statistic is {at_summary} at k={k_summary}")
    return HillCurve(
        k=np.arange(1, k_max + 1),
        hill=stats,
        summary_alpha=float(1.0 / at_summary),
        k_summary=k_summary,
    )


def emplot_points(trace: OrderedTaskTrace) -> np.ndarray:
    """``(log x, log P(X > x))`` at each distinct ordered value.

    The tail probability at the last rank ``i`` of a run of equal values uses
    the plotting position ``(n - i + 0.5) / n``. Returns an ``(m, 2)`` array.
    """
    logs = _positive_logs(trace)
    y = trace.y
    n = y.size
    last_of_run = np.flatnonzero(np.append(y[1:] != y[:-1], True))
    ranks = last_of_run + 1
    tail = (n - ranks + 0.5) / n
    return np.column_stack((logs[last_of_run], np.log(tail)))


def kolmogorov_q(lam: float) -> float:
    """Asymptotic Kolmogorov survival function ``Q(lambda)``."""
    if lam < _KS_SMALL_LAMBDA:
        return 1.0
    total = 0.0
    for j in range(1, KS_MAX_TERMS + 1):
        term = math.exp(-2.0 * j * j * lam * lam)
        total += term if j % 2 else -term
        if term < KS_TERM_CUTOFF:
            break
    return min(max(2.0 * total, 0.0), 1.0)


def ks_two_sample(a, b) -> KsResult:
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    n1, n2 = a.size, b.size
    if n1 == 0 or n2 == 0:
        raise EmptySample(f"KS test needs two non-empty samples (got {n1} and {n2})")
    pooled = np.concatenate((a, b))
    cdf_a = np.searchsorted(a, pooled, side="right") / n1
    cdf_b = np.searchsorted(b, pooled, side="right") / n2
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    ne = n1 * n2 / (n1 + n2)
    root = math.sqrt(ne)
    p = kolmogorov_q((root + 0.12 + 0.11 / root) * d)
    return KsResult(d_statistic=d, p_value=p, n1=int(n1), n2=int(n2))


def curve_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
