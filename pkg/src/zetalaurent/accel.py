"""Series acceleration at arbitrary precision.

:func:`levin_transform` is the closed-form Levin transform ``L_k^(0)``
built from ``k + 2`` terms in one pass, which keeps the cost linear in the
number of terms; the binomial weights it uses cancel, so callers provide a
precision of roughly ``3k`` bits on top of the target.
:func:`alternating_sum` is the Cohen-Villegas-Zagier scheme for
``sum (-1)^m a_m`` with completely monotone ``a_m``.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import mpmath
from mpmath import mpf

LEVIN_VARIANTS = ("t", "u", "v")


def levin_transform(terms: Sequence, variant: str = "v", beta: int = 1):
    """Levin ``t``/``u``/``v`` estimate of ``sum terms`` at the current mpmath precision."""
    if variant not in LEVIN_VARIANTS:
        raise ValueError(f"variant must be one of {LEVIN_VARIANTS}")
    if len(terms) < 3:
        raise ValueError("need at least three terms")
    a = [mpmath.mpmathify(x) for x in terms]
    k = len(a) - 2
    partial, acc = [], mpf(0)
    for x in a:
        acc += x
        partial.append(acc)
    num = den = mpf(0)
    for j in range(k + 1):
        if variant == "u":
            w = (j + beta) * a[j]
        elif variant == "t":
            w = a[j]
        else:
            w = a[j] * a[j + 1] / (a[j] - a[j + 1])
        c = (-1) ** j * math.comb(k, j) * (mpf(beta + j) / (beta + k)) ** (k - 1) / w
        num += c * partial[j]
        den += c
    return num / den


def alternating_sum(a: Callable[[int], object], n: int | None = None):
    """``sum_{m>=0} (-1)^m a(m)`` by the Cohen-Villegas-Zagier weights.

    The error is about ``5.83^-n`` times ``|a(0)|``; by default ``n`` matches
    the current precision.
    """
    if n is None:
        n = int(mpmath.mp.prec * math.log(2) / math.log(3 + math.sqrt(8))) + 4
    d = (3 + mpmath.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b, c, s = mpf(-1), -d, mpf(0)
    for k in range(n):
        c = b - c
        s += c * a(k)
        b = b * (k + n) * (k - n) / ((k + mpf(1) / 2) * (k + 1))
    return s / d
