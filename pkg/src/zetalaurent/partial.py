"""Blocked float64 partial sums of slowly (conditionally) convergent series.

Arithmetic sums such as ``sum (1 - Lambda(m)) ln^k m / m`` converge like
the error term of the prime number theorem, so their partial sums oscillate.
:func:`averaged_partial_sums` returns the plain partial sum at ``N`` together
with logarithmic (``dm/m``-weighted) averages of the partial-sum function over
the last two decades ``[N/10, N]`` and ``[N/100, N/10]``.  The difference of
the two averages is the error model used by callers.  :func:`riesz_mean`
is the sharper alternative for sums that start at ``m = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

BLOCK = 1 << 20


@dataclass(frozen=True)
class PartialSumResult:
    N: int
    final: np.ndarray          # F(N) per component
    average: np.ndarray        # log-average of F over [N/10, N]
    previous: np.ndarray       # log-average of F over [N/100, N/10]

    @property
    def model_error(self) -> np.ndarray:
        return 2.0 * np.abs(self.average - self.previous)


def averaged_partial_sums(
    N: int,
    terms: Callable[[int, int, np.ndarray], np.ndarray],
    offset: Callable[[np.ndarray], np.ndarray] | None = None,
    start: int = 1,
) -> PartialSumResult:
    """Partial sums ``F(m) = sum_{start <= j <= m} t_j - offset(m)`` and their decade averages.

    ``terms(lo, hi, m)`` returns an array of shape ``(ncomp, hi - lo)`` for the
    integers ``m = lo..hi-1`` (passed as float64); ``offset(m)`` has the same
    shape and is subtracted pointwise (e.g. the growing main term).
    """
    if N < 100:
        raise ValueError("decade averaging needs N >= 100")
    w1_lo, w0_lo = max(N // 10, start), max(N // 100, start)
    running = None
    acc = {"cur": None, "prev": None}
    wsum = {"cur": 0.0, "prev": 0.0}
    final = None
    for lo in range(start, N + 1, BLOCK):
        hi = min(N + 1, lo + BLOCK)
        m = np.arange(lo, hi, dtype=np.float64)
        t = np.atleast_2d(terms(lo, hi, m))
        c = np.cumsum(t, axis=1)
        if running is None:
            running = np.zeros(t.shape[0])
            acc = {"cur": np.zeros(t.shape[0]), "prev": np.zeros(t.shape[0])}
        c += running[:, None]
        running = c[:, -1].copy()
        F = c - np.atleast_2d(offset(m)) if offset is not None else c
        for name, a, b in (("prev", w0_lo, w1_lo - 1), ("cur", w1_lo, N)):
            s, e = max(a, lo), min(b, hi - 1)
            if s <= e:
                sl = slice(s - lo, e - lo + 1)
                w = 1.0 / m[sl]
                acc[name] += (F[:, sl] * w).sum(axis=1)
                wsum[name] += math.fsum(w)
        if hi == N + 1:
            final = F[:, -1].copy()
    return PartialSumResult(N, final, acc["cur"] / wsum["cur"], acc["prev"] / wsum["prev"])


RIESZ_ORDER = 3
RIESZ_BLOCK = 1 << 18


def riesz_mean(
    M: int,
    terms: Callable[[int, int, np.ndarray], np.ndarray],
    order: int = RIESZ_ORDER,
    start: int = 1,
) -> np.ndarray:
    """Riesz mean ``sum_{start <= m <= M} t_m (1 - m/M)^order``.

    For Dirichlet series whose continuation is regular at the summation
    point, the mean differs from the limit by contributions ``~ M^(rho-1)``
    from the poles of the continuation, damped by
    ``Gamma(rho - 1)/Gamma(rho + order)``; for von Mangoldt sums these are
    the zeta zeros and the damping makes the mean usable where the plain
    partial sums oscillate.  ``terms`` has the same contract as in
    :func:`averaged_partial_sums`.
    """
    if M < start:
        raise ValueError("M must be >= start")
    total = None
    for lo in range(start, M + 1, RIESZ_BLOCK):
        hi = min(M + 1, lo + RIESZ_BLOCK)
        m = np.arange(lo, hi, dtype=np.float64)
        w = (1.0 - m / M) ** order
        s = np.sum(np.atleast_2d(terms(lo, hi, m)) * w, axis=1)
        total = s if total is None else total + s
    return total
