"""Two-segment least-squares change-point estimation on ordered durations.

For every admissible split ``k`` (``omega <= k <= n - omega``) a straight line
is fitted to ranks ``1..k`` and another to ``k+1..n``; the split with the
smallest total SSE wins, ties going to the largest ``k``.

All splits are scored in O(n) with prefix sums in float64. Float scores are
only used to prune: every split whose score is within a rounding bound of the
minimum is re-scored in exact integer arithmetic, so the returned argmin is
the exact one even on traces full of ties.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import EmptySegment, InvalidOmega, TraceTooShort
from .trace_model import ChangePointFit, OrderedTaskTrace

DEFAULT_OMEGA = 3
MIN_OMEGA = 2

_EPS = np.finfo(np.float64).eps


def ols_line(y, lo: int, hi: int):
    """Least-squares line of ``y[i]`` against rank ``i`` for ``i`` in ``[lo, hi]``.

    Ranks are 1-based and inclusive. Returns ``(intercept, slope, sse)``.
    """
    y = np.asarray(y)
    if lo < 1 or hi > y.size or hi < lo:
        raise EmptySegment(f"segment [{lo}, {hi}] is empty or outside 1..{y.size}")
    seg = y[lo - 1:hi].astype(np.float64)
    m = seg.size
    if m == 1:
        return float(seg[0]), 0.0, 0.0
    x = np.arange(lo, hi + 1, dtype=np.float64)
    x_mean = (lo + hi) / 2.0
    y_mean = seg.mean()
    dx = x - x_mean
    slope = float(np.dot(dx, seg - y_mean) / np.dot(dx, dx))
    intercept = float(y_mean - slope * x_mean)
    resid = seg - intercept - slope * x
    return intercept, slope, float(np.dot(resid, resid))


def _segment_sse(m, sx, sxx, sz, szz, sxz):
    """Vectorised SSE of a line fit from raw moment sums (float)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        x_mean = sx / m
        sxx_c = sxx - sx * x_mean
        sxz_c = sxz - x_mean * sz
        szz_c = szz - sz * sz / m
        sse = szz_c - np.where(sxx_c > 0, sxz_c * sxz_c / sxx_c, 0.0)
    return np.maximum(sse, 0.0)


def split_scores(y: np.ndarray, omega: int):
    """Approximate total SSE for every split ``k`` in ``[omega, n - omega]``.

    Returns ``(ks, scores, slack)`` where ``slack`` bounds the absolute
    rounding error of each score. Left segments use the rank ``i`` as
    regressor, right segments the reversed rank ``n + 1 - i``; both keep the
    regressor small near the segment origin, which is where short segments
    would otherwise lose precision.
    """
    n = y.size
    z = y.astype(np.float64)
    z = z - z.mean()
    scale = np.max(np.abs(z))
    if scale > 0:
        z = z / scale
    x = np.arange(1, n + 1, dtype=np.float64) / n

    def prefix(v):
        return np.concatenate(([0.0], np.cumsum(v)))

    ks = np.arange(omega, n - omega + 1)
    # left: ranks 1..k
    m_l = ks.astype(np.float64)
    left = _segment_sse(
        m_l, prefix(x)[ks], prefix(x * x)[ks], prefix(z)[ks], prefix(z * z)[ks], prefix(x * z)[ks]
    )
    # right: ranks k+1..n, regressor counted from the top
    zr = z[::-1]
    mr = n - ks
    right = _segment_sse(
        mr.astype(np.float64), prefix(x)[mr], prefix(x * x)[mr], prefix(zr)[mr],
        prefix(zr * zr)[mr], prefix(x * zr)[mr],
    )
    scores = left + right
    slack = 64.0 * _EPS * (n + 2) * (float(np.dot(z, z)) + float(np.abs(z).sum()) + 1.0)
    return ks, scores, slack


class _ExactMoments:
    """Integer prefix moments of ``(i, y_i)`` for exact segment SSE."""

    def __init__(self, y):
        # object dtype keeps Python's unbounded ints; int64 would overflow y*y
        vals = np.asarray(y).astype(object)
        ranks = np.arange(1, vals.size + 1).astype(object)
        zero = np.zeros(1, dtype=object)
        self.n = int(vals.size)
        self.sy = np.concatenate((zero, np.cumsum(vals)))
        self.syy = np.concatenate((zero, np.cumsum(vals * vals)))
        self.sxy = np.concatenate((zero, np.cumsum(ranks * vals)))

    def sse(self, lo, hi) -> Fraction:
        m = hi - lo + 1
        if m == 1:
            return Fraction(0)
        sx = (lo + hi) * m // 2
        sxx = hi * (hi + 1) * (2 * hi + 1) // 6 - (lo - 1) * lo * (2 * lo - 1) // 6
        sy = self.sy[hi] - self.sy[lo - 1]
        syy = self.syy[hi] - self.syy[lo - 1]
        sxy = self.sxy[hi] - self.sxy[lo - 1]
        d = m * sxx - sx * sx
        cross = m * sxy - sx * sy
        return Fraction(d * (m * syy - sy * sy) - cross * cross, m * d)

    def total(self, k) -> Fraction:
        return self.sse(1, k) + self.sse(k + 1, self.n)


def _exact_argmin(y, candidates) -> int:
    moments = _ExactMoments(y)
    best_k, best = None, None
    for k in sorted(int(c) for c in candidates):
        score = moments.total(k)
        if best is None or score <= best:
            best_k, best = k, score
    return best_k


def estimate_changepoint(trace: OrderedTaskTrace, omega: int = DEFAULT_OMEGA) -> ChangePointFit:
    if omega < MIN_OMEGA:
        raise InvalidOmega(f"omega must be >= {MIN_OMEGA}, got {omega}")
    y = trace.y
    n = y.size
    if n < 2 * omega:
        raise TraceTooShort(n, omega)
    if y[0] == y[-1]:
        # every split fits exactly; the tie-break picks the largest
        k = n - omega
        return ChangePointFit(t_hat=k, left=(float(y[0]), 0.0), right=(float(y[0]), 0.0),
                              sse=0.0, omega=omega)
    ks, scores, slack = split_scores(y, omega)
    threshold = scores.min() + 2.0 * slack
    candidates = ks[scores <= threshold]
    k = int(candidates[0]) if candidates.size == 1 else _exact_argmin(y, candidates)
    b0, b1, sse_l = ols_line(y, 1, k)
    b2, b3, sse_r = ols_line(y, k + 1, n)
    return ChangePointFit(t_hat=k, left=(b0, b1), right=(b2, b3), sse=sse_l + sse_r, omega=omega)
