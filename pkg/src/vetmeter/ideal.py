"""Extrapolated ideal cost curve and the EI / OC / PR decomposition."""

from __future__ import annotations

import numpy as np

from .errors import IndexOutOfRange
from .trace_model import ChangePointFit, IdealEstimate, OrderedTaskTrace


def g_hat(trace: OrderedTaskTrace, t: int, r: int) -> int:
    """Evaluate the extrapolation recurrence ``g(r+1) = 2 g(r) - g(r-1)``.

    Anchored at ``g(t-1) = Y[t-1]`` and ``g(t) = Y[t]`` (1-based ranks).
    Integer arithmetic, so the result is exact and equals
    ``Y[t] + (r - t) * (Y[t] - Y[t-1])``.
    """
    n = trace.n
    if not 2 <= t < n:
        raise IndexOutOfRange(f"anchor t={t} outside [2, {n - 1}]")
    if not t <= r <= n:
        raise IndexOutOfRange(f"rank r={r} outside [{t}, {n}]")
    prev, cur = trace.rank(t - 1), trace.rank(t)
    for _ in range(r - t):
        prev, cur = cur, 2 * cur - prev
    return cur


def extrapolate(trace: OrderedTaskTrace, t: int) -> np.ndarray:
    """Unclamped ``g(r)`` for ``r = t+1 .. n`` as float64."""
    n = trace.n
    if not 2 <= t < n:
        raise IndexOutOfRange(f"anchor t={t} outside [2, {n - 1}]")
    anchor = float(trace.y[t - 1])
    step = anchor - float(trace.y[t - 2])
    return anchor + np.arange(1, n - t + 1, dtype=np.float64) * step


def estimate_ideal(trace: OrderedTaskTrace, fit: ChangePointFit) -> IdealEstimate:
    """Split total time into ideal (EI) and overhead (OC) parts.

    Above the change-point the ideal curve is the linear extrapolation from
    the two ranks ending at ``t_hat``, clamped to the observed value so that
    no rank contributes negative overhead.
    """
    t = fit.t_hat
    y = trace.y.astype(np.float64)
    g = np.minimum(extrapolate(trace, t), y[t:])
    # np.sum is pairwise, which keeps error small on long traces
    head = float(np.sum(y[:t]))
    ei = head + float(np.sum(g))
    oc = float(np.sum(y[t:] - g))
    pr = float(np.sum(y))
    return IdealEstimate(
        t_hat=t,
        g_anchor=(trace.rank(t - 1), trace.rank(t)),
        ei=ei,
        oc=oc,
        pr=pr,
    )
