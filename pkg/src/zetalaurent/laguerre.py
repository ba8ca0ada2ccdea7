"""Associated Laguerre polynomials and the transforms built on them.

``L_n^alpha(x) = sum_k (-1)^k C(n+alpha, n-k) x^k / k!``.  Coefficients are
kept as exact rationals up to degree :data:`EXACT_DEGREE_LIMIT`; above that
evaluation uses the three-term recurrence.  Power-series evaluation at large
``x`` cancels heavily, so it runs at a precision widened by the ratio of the
largest term to the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .mpcore import DomainError, PrecisionContext, cancellation_guard, default_context

EXACT_DEGREE_LIMIT = 512


@dataclass(frozen=True)
class LaguerrePoly:
    n: int
    alpha: int
    coefficients: tuple  # exact Fractions, index k is the x**k coefficient

    def __call__(self, x, ctx: PrecisionContext | None = None):
        return laguerre_eval(self.n, self.alpha, x, ctx)

    def exact(self, x: Fraction) -> Fraction:
        return _horner(self.coefficients, Fraction(x))


def _check(n: int, alpha: int):
    if n < 0 or alpha < 0:
        raise DomainError("Laguerre degree and order must be >= 0")


@lru_cache(maxsize=4096)
def laguerre_coefficients(n: int, alpha: int = 0) -> tuple:
    _check(n, alpha)
    return tuple(
        Fraction((-1) ** k * math.comb(n + alpha, n - k), math.factorial(k)) for k in range(n + 1)
    )


def laguerre_poly(n: int, alpha: int = 0) -> LaguerrePoly:
    return LaguerrePoly(n, alpha, laguerre_coefficients(n, alpha))


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def laguerre_exact(n: int, alpha: int, x) -> Fraction:
    """Exact value at a rational point."""
    return _horner(laguerre_coefficients(n, alpha), Fraction(x))


def laguerre_eval(n: int, alpha: int, x, ctx: PrecisionContext | None = None,
                  method: str = "series"):
    """``L_n^alpha(x)`` for real or complex ``x`` at ``ctx`` precision.

    ``method='series'`` sums the exact-coefficient power series under a
    cancellation guard; ``'recurrence'`` runs the three-term recurrence.
    Degrees above :data:`EXACT_DEGREE_LIMIT` always use the recurrence.
    """
    _check(n, alpha)
    ctx = ctx or default_context()
    if method not in ("series", "recurrence"):
        raise DomainError(f"unknown Laguerre evaluation method {method!r}")
    if method == "recurrence" or n > EXACT_DEGREE_LIMIT:
        return _eval_recurrence(n, alpha, x, ctx)
    return _eval_series(n, alpha, x, ctx)


def _max_term(coeffs, ax: float) -> float:
    # log-domain so huge degrees / arguments do not overflow
    if ax == 0:
        return 1.0
    lx = math.log(ax)
    best = -math.inf
    for k, c in enumerate(coeffs):
        if c:
            best = max(best, math.log(abs(c.numerator)) - math.log(c.denominator) + k * lx)
    return best


def _eval_series(n, alpha, x, ctx):
    coeffs = laguerre_coefficients(n, alpha)
    with ctx.workprec():
        x = mpmath.mpmathify(x)
        ax = float(abs(x))
    log_max = _max_term(coeffs, ax)
    # first pass assumes an O(1) result, second pass refines if it was tiny
    guarded = cancellation_guard(ctx, mpmath.exp(max(log_max, 0)))
    value = _series_at(coeffs, x, guarded)
    with guarded.workprec():
        mag = abs(value)
    if mag < 1 and mag != 0:
        floor_mag = max(mag, ctx.tol * mpf(2) ** -8)
        ratio = mpmath.exp(max(log_max, 0)) / floor_mag
        refined = cancellation_guard(ctx, ratio)
        if refined.bits > guarded.bits:
            value = _series_at(coeffs, x, refined)
    with ctx.workprec():
        return +value


def _series_at(coeffs, x, ctx):
    with ctx.workprec():
        x = mpmath.mpmathify(x)
        acc = mpf(0)
        for c in reversed(coeffs):
            acc = acc * x + mpf(c.numerator) / c.denominator
        return acc


def _eval_recurrence(n, alpha, x, ctx):
    with cancellation_guard(ctx, 2 ** min(n, 4096) if abs(complex(x)) > 0 else 1).workprec():
        x = mpmath.mpmathify(x)
        prev, cur = mpf(1), 1 + alpha - x
        if n == 0:
            out = prev
        else:
            for k in range(1, n):
                prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
            out = cur
    with ctx.workprec():
        return +out


def laguerre_table(n_max: int, alpha: int, x, ctx: PrecisionContext | None = None) -> list:
    """``[L_0^alpha(x), ..., L_{n_max}^alpha(x)]`` by recurrence in guarded precision."""
    _check(n_max, alpha)
    ctx = ctx or default_context()
    with cancellation_guard(ctx, mpf(2) ** min(n_max, 4096)).workprec():
        x = mpmath.mpmathify(x)
        out = [mpf(1)]
        if n_max >= 1:
            out.append(1 + alpha - x)
        for k in range(1, n_max):
            out.append(((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1))
    with ctx.workprec():
        return [+v for v in out]


def laguerre_float_table(n_max: int, alpha: int, x: np.ndarray) -> np.ndarray:
    """Float64 table ``T[n, i] = L_n^alpha(x[i])`` for ``n <= n_max``.

    Used for the long arithmetic sums where a float64 recurrence at moderate
    ``x`` is ample and multiprecision per term would be prohibitive.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((n_max + 1,) + x.shape, dtype=np.float64)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def lemma_binomial_sum(n: int, nu: int, w) -> Fraction:
    """``sum_{j=nu}^n (-1)^(j-1) C(n,j) w^(j-nu)/(j-nu)!`` exactly."""
    w = Fraction(w)
    return sum(
        Fraction((-1) ** (j - 1) * math.comb(n, j), math.factorial(j - nu)) * w ** (j - nu)
        for j in range(nu, n + 1)
    )


# ---------------------------------------------------------------- asymptotics and transforms

def laguerre_fejer(n: int, x, ctx: PrecisionContext | None = None):
    """Large-degree approximation of ``L_{n-1}^1(x)`` for ``x > 0``; error ``O(n^(-1/4))``."""
    ctx = ctx or default_context()
    if n < 2:
        raise DomainError("laguerre_fejer needs n >= 2")
    with ctx.workprec():
        x = mpf(x)
        if x <= 0:
            raise DomainError("laguerre_fejer needs x > 0")
        m = n - 1
        return (mpmath.exp(x / 2) * x ** mpf(-0.75) * mpf(m) ** mpf(0.25)
                * mpmath.cos(2 * mpmath.sqrt(m * x) - 3 * mpmath.pi / 4) / mpmath.sqrt(mpmath.pi))


def laguerre_laplace(n: int, rho, ctx: PrecisionContext | None = None):
    """``int_0^inf e^(-rho u) L_{n-1}^1(u) du = 1 - (1 - 1/rho)^n``."""
    if n < 1:
        raise DomainError("laguerre_laplace needs n >= 1")
    ctx = ctx or default_context()
    with ctx.workprec():
        rho = mpmath.mpmathify(rho)
        if rho == 0:
            raise DomainError("laguerre_laplace is singular at rho = 0")
        return 1 - (1 - 1 / rho) ** n


def laguerre_laplace_zeros(n: int, ctx: PrecisionContext | None = None) -> list:
    """Zeros ``(1 + i cot(pi j / n))/2``, ``j = 1..n-1``; real parts are exactly 1/2."""
    if n < 1:
        raise DomainError("laguerre_laplace_zeros needs n >= 1")
    ctx = ctx or default_context()
    with ctx.workprec():
        half = mpf(1) / 2
        zeros = []
        for j in range(1, n):
            im = mpf(0) if 2 * j == n else mpmath.cot(mpmath.pi * j / n) / 2
            zeros.append(mpc(half, im))
        return zeros


def laguerre_mellin(n: int, s, ctx: PrecisionContext | None = None):
    """``int_0^1 x^(s-1) L_{n-1}^1(-ln x) dx`` as the terminating sum ``sum_j (-1)^(j-1) C(n,j) s^-j``."""
    if n < 1:
        raise DomainError("laguerre_mellin needs n >= 1")
    ctx = ctx or default_context()
    with ctx.workprec():
        s = mpmath.mpmathify(s)
        if s == 0:
            raise DomainError("laguerre_mellin has a pole at s = 0")
        inv = 1 / s
        total = 0
        p = 1
        for j in range(1, n + 1):
            p *= inv
            total += (-1) ** (j - 1) * math.comb(n, j) * p
        return total


def laguerre_mellin_scaled(n: int, s, ctx: PrecisionContext | None = None):
    """``s^n`` times :func:`laguerre_mellin`; satisfies ``f(s) = (-1)^(n+1) f(1-s)``."""
    ctx = ctx or default_context()
    with ctx.workprec():
        s = mpmath.mpmathify(s)
        return s ** n * laguerre_mellin(n, s, ctx)
