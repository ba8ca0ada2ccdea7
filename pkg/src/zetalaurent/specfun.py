"""Special functions used throughout the package.

Gamma-family functions, the incomplete beta function and polylogarithms are
delegated to :mod:`mpmath`.  The exponential integral and the Bernoulli
numbers are implemented here: ``Ei`` switches between its convergent series
and its asymptotic expansion depending on the working precision, and
Bernoulli numbers are exact rationals.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

import mpmath
from mpmath import mpf

from .mpcore import DomainError, PrecisionContext, default_context


def _ctx(ctx):
    return ctx or default_context()


def _is_nonpositive_integer(z) -> bool:
    z = mpmath.mpmathify(z)
    return mpmath.im(z) == 0 and mpmath.re(z) <= 0 and mpmath.re(z) == mpmath.floor(mpmath.re(z))


def digamma(z, ctx: PrecisionContext | None = None):
    with _ctx(ctx).workprec():
        if _is_nonpositive_integer(z):
            raise DomainError(f"digamma has a pole at {z}")
        return mpmath.digamma(z)


def trigamma(z, ctx: PrecisionContext | None = None):
    with _ctx(ctx).workprec():
        if _is_nonpositive_integer(z):
            raise DomainError(f"trigamma has a pole at {z}")
        return mpmath.psi(1, z)


def log_gamma(z, ctx: PrecisionContext | None = None):
    """Principal branch of ``ln Gamma(z)``."""
    with _ctx(ctx).workprec():
        if _is_nonpositive_integer(z):
            raise DomainError(f"log-gamma has a pole at {z}")
        return mpmath.loggamma(z)


def beta_generalized(z1, z2, x, y, ctx: PrecisionContext | None = None):
    """``int_{z1}^{z2} t^(x-1) (1-t)^(y-1) dt`` for ``0 <= z1 <= z2 <= 1``."""
    with _ctx(ctx).workprec():
        z1, z2 = mpf(z1), mpf(z2)
        if not 0 <= z1 <= z2 <= 1:
            raise DomainError("beta_generalized needs 0 <= z1 <= z2 <= 1")
        if not (mpmath.re(x) > 0 and mpmath.re(y) > 0):
            raise DomainError("beta_generalized needs Re x > 0 and Re y > 0")
        return mpmath.betainc(x, y, z1, z2)


def polylog_unit(q, x, ctx: PrecisionContext | None = None):
    """``Li_q(x) = sum x^k / k^q`` for ``0 <= x <= 1``; ``Li_1(1)`` diverges."""
    with _ctx(ctx).workprec():
        x = mpf(x)
        if not 0 <= x <= 1:
            raise DomainError("polylog_unit needs 0 <= x <= 1")
        if x == 0:
            return mpf(0)
        if x == 1 and q <= 1:
            raise DomainError("Li_q(1) diverges for q <= 1")
        if x == 1:
            return mpmath.zeta(q)
        return mpmath.polylog(q, x)


# ---------------------------------------------------------------- exponential integral

def expint_ei(x, ctx: PrecisionContext | None = None):
    """Exponential integral ``Ei(x)`` (principal value) for real ``x != 0``.

    For ``|x|`` up to about the working precision in nats the power series
    is summed with enough guard bits to absorb its cancellation; beyond that
    the asymptotic expansion is truncated at its smallest term, which is then
    far below the working epsilon.
    """
    ctx = _ctx(ctx)
    with ctx.workprec():
        x = mpf(x)
        if x == 0:
            raise DomainError("Ei(0) is undefined")
        bits = ctx.bits
        switch = bits * math.log(2) + 10
        if abs(x) <= switch:
            return +_ei_series(x, bits)
        return +_ei_asymptotic(x, bits)


def _ei_series(x: mpf, bits: int) -> mpf:
    # Ei(x) = gamma + ln|x| + sum x^k / (k k!); terms peak near e^|x|,
    # and for x < 0 the result itself is only about e^x / |x|
    extra = int((1 if x > 0 else 2) * abs(x) / math.log(2)) + 20
    with mpmath.workprec(bits + extra):
        x = mpf(x)
        eps = mpf(2) ** (-(bits + extra))
        term = mpf(1)
        total = mpf(0)
        k = 1
        while True:
            term *= x / k
            add = term / k
            total += add
            if k > abs(x) and abs(add) < eps * (abs(total) + 1):
                break
            k += 1
        return mpmath.euler + mpmath.log(abs(x)) + total


def _ei_asymptotic(x: mpf, bits: int) -> mpf:
    # Ei(x) ~ e^x / x * sum k! / x^k
    with mpmath.workprec(bits + 20):
        x = mpf(x)
        eps = mpf(2) ** (-(bits + 20))
        total = mpf(1)
        term = mpf(1)
        k = 1
        while True:
            new = term * k / x
            if abs(new) >= abs(term) or abs(new) < eps:
                break
            term = new
            total += term
            k += 1
        return mpmath.exp(x) / x * total


# ---------------------------------------------------------------- Bernoulli

class _BernoulliTable:
    def __init__(self):
        self._lock = threading.Lock()
        self._b = [Fraction(1)]

    def get(self, n: int) -> Fraction:
        with self._lock:
            b = self._b
            while len(b) <= n:
                m = len(b)
                # sum_{k=0}^{m} C(m+1, k) B_k = 0
                s = sum(math.comb(m + 1, k) * b[k] for k in range(m))
                b.append(-s / (m + 1))
            return b[n]


_bernoulli = _BernoulliTable()


def bernoulli_number(n: int) -> Fraction:
    """Exact ``B_n`` with the convention ``B_1 = -1/2``."""
    if n < 0:
        raise DomainError("Bernoulli index must be >= 0")
    return _bernoulli.get(n)


def bernoulli_poly(n: int, x, ctx: PrecisionContext | None = None):
    with _ctx(ctx).workprec():
        if isinstance(x, Fraction):
            return sum(math.comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1))
        x = mpmath.mpmathify(x)
        total = 0
        for k in range(n + 1):
            b = bernoulli_number(k)
            if b:
                total += math.comb(n, k) * (mpf(b.numerator) / b.denominator) * x ** (n - k)
        return total


def periodized_bernoulli(k: int, t, ctx: PrecisionContext | None = None):
    """``P_k(t) = B_k(t - floor t)``; ``P_1`` is ``-1/2`` at the integers."""
    if k < 1:
        raise DomainError("periodized Bernoulli index must be >= 1")
    with _ctx(ctx).workprec():
        if isinstance(t, Fraction):
            frac = t - math.floor(t)
        else:
            t = mpf(t)
            frac = t - mpmath.floor(t)
        return bernoulli_poly(k, frac, ctx)


def bernoulli_mpf(n: int, ctx: PrecisionContext | None = None) -> mpf:
    b = bernoulli_number(n)
    with _ctx(ctx).workprec():
        return mpf(b.numerator) / b.denominator
