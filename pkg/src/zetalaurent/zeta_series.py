"""Globally convergent lambda-parameterized series for zeta and Hurwitz zeta.

The Riemann zeta series is

    zeta(s) = 1/((1 - 2^(1-s)) (1+lam)) sum_k r^k sum_{j<=k} (-1)^j C(k,j) lam^-j (j+1)^-s

with ``r = lam/(1+lam)`` and ``Re lam > 0``; it converges for every
``s != 1``.  The outer terms decay like ``rho^k`` with
``rho = max(|lam|, |lam-1|)/|1+lam|`` (times a polynomial in ``k`` when
``Re s < 0``) while each inner alternating sum cancels from a magnitude
around ``(1 + 1/|lam|)^k``, which sets the guard bits.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath import mpf

from .mpcore import (
    ConvergenceError,
    DomainError,
    PrecisionContext,
    cancellation_guard,
    default_context,
)
from .quad import Domain, IntegralSpec, integrate

DENOM_FLOOR = mpf("1e-6")


def check_lambda(lam, ctx: PrecisionContext):
    """Validate and convert ``lam`` (``Re lam > 0``, away from ``|lam/(1+lam)| = 1``)."""
    with ctx.workprec():
        if isinstance(lam, Fraction):
            lam = mpf(lam.numerator) / lam.denominator
        else:
            lam = mpmath.mpmathify(lam)
        if not mpmath.re(lam) > 0:
            raise DomainError("lambda must have positive real part")
        if abs(lam / (1 + lam)) >= 1 - mpf(10) ** -6:
            raise DomainError("lambda too close to the divergence boundary |lambda/(1+lambda)| = 1")
        return lam


def lambda_envelope(lam) -> float:
    """Geometric rate of the outer sum: ``max(|lam|, |lam-1|) / |1+lam|``."""
    lam = complex(lam)
    return max(abs(lam), abs(lam - 1)) / abs(1 + lam)


def binomial_outer_sum(weights_fn, lam, ctx: PrecisionContext, ncomp: int, *, tol=None,
                       growth: float = 0.0, max_terms: int = 20000):
    """``sum_k r^k sum_{j=0}^k (-1)^j C(k,j) lam^-j g(j)`` for vector-valued ``g``.

    ``weights_fn(j)`` returns the ``ncomp`` values ``g(j)``; ``growth`` is the
    polynomial degree of ``|g(j)|`` (``-Re s`` for ``(j+1)^-s``), used to size
    the guard and the a-priori length.  The sum stops once five consecutive
    outer terms each fall below ``tol/10`` and the geometric envelope bounds
    the rest below ``tol``.  Returns ``(values, tail_bound, terms_used)``.
    """
    tol = ctx.tol if tol is None else tol
    rho = lambda_envelope(lam)
    digits = -math.log(float(tol))
    k_est = 40
    if rho > 0:
        k_est += int(digits / -math.log(rho))
        # polynomial factor k^growth delays the geometric decay
        if growth > 0:
            k_est += int(2 * growth * math.log(k_est + 1) / -math.log(rho))
    grow_bits = math.log2(1 + 1 / abs(complex(lam))) * k_est + max(growth, 0) * math.log2(k_est + 2)
    guarded = cancellation_guard(ctx, mpf(2) ** int(grow_bits + 8))
    with guarded.workprec():
        lam_w = mpmath.mpmathify(lam)
        r = lam_w / (1 + lam_w)
        inv_lam = 1 / lam_w
        g, pw = [], []
        totals = [mpf(0)] * ncomp
        quiet = 0
        rk = mpf(1)
        k = 0
        last = mpf(0)
        while True:
            while len(g) <= k:
                j = len(g)
                g.append(weights_fn(j))
                pw.append(inv_lam ** j)
            inner = [0] * ncomp
            for j in range(k + 1):
                c = (-1) ** j * math.comb(k, j) * pw[j]
                gj = g[j]
                for i in range(ncomp):
                    inner[i] += c * gj[i]
            mag = mpf(0)
            for i in range(ncomp):
                t = rk * inner[i]
                totals[i] += t
                mag = max(mag, abs(t))
            last = mag
            quiet = quiet + 1 if mag < tol / 10 else 0
            if quiet >= 5 and rho < 1 and mag * rho / (1 - rho) < tol:
                break
            k += 1
            if k > max_terms or k > 4 * k_est:
                raise ConvergenceError(
                    f"binomial series did not converge in {k} terms (lambda={lam})",
                    estimates=(list(totals), last),
                )
            rk *= r
        tail = last * rho / (1 - rho)
    with ctx.workprec():
        return [+t for t in totals], +mpf(abs(tail)), k + 1


def _prefactor(s, ctx):
    with ctx.workprec():
        s = mpmath.mpmathify(s)
        if s == 1:
            raise DomainError("zeta has a pole at s = 1")
        d = 1 - mpmath.power(2, 1 - s)
        if abs(d) <= DENOM_FLOOR:
            raise DomainError(f"|1 - 2^(1-s)| = {mpmath.nstr(abs(d), 3)} is too small at s = {s}")
        return s, d


def _growth(s) -> float:
    return max(0.0, -float(mpmath.re(s)))


def zeta_lambda(s, lam=Fraction(1, 2), ctx: PrecisionContext | None = None, *, full: bool = False):
    """``zeta(s)`` from the lambda-parameterized binomial series (any ``s != 1``).

    With ``full=True`` returns ``(value, tail_bound, terms_used)``.
    """
    ctx = ctx or default_context()
    lam = check_lambda(lam, ctx)
    s, d = _prefactor(s, ctx)
    with ctx.workprec():
        scale = abs(d) * abs(1 + lam)
        neg_s = -s

        def g(j):
            return [mpmath.power(j + 1, neg_s)]

        (total,), tail, terms = binomial_outer_sum(g, lam, ctx, 1, tol=ctx.tol * scale / 4,
                                                   growth=_growth(s))
        value = total / (d * (1 + lam))
        value = _realify(value, s, lam)
        if full:
            return value, tail / scale, terms
        return value


def _realify(v, *args):
    if isinstance(v, mpmath.mpc) and all(mpmath.im(mpmath.mpmathify(a)) == 0 for a in args):
        return v.real
    return v


def zeta_prime_lambda(s, lam=Fraction(1, 2), ctx: PrecisionContext | None = None):
    """``zeta'(s)`` from the differentiated binomial series."""
    ctx = ctx or default_context()
    lam = check_lambda(lam, ctx)
    s, d = _prefactor(s, ctx)
    with ctx.workprec():
        scale = abs(d) * abs(1 + lam)
        neg_s = -s

        def g(j):
            p = mpmath.power(j + 1, neg_s)
            return [p, mpmath.log(j + 1) * p]

        (z_sum, l_sum), _, _ = binomial_outer_sum(g, lam, ctx, 2, tol=ctx.tol * scale / 8,
                                                  growth=_growth(s) + 1)
        zeta_s = z_sum / (d * (1 + lam))
        two = mpmath.power(2, 1 - s)
        value = -(two * mpmath.log(2) * zeta_s + l_sum / (1 + lam)) / d
        return _realify(value, s, lam)


def zeta_prime_at_zero(lam=Fraction(1, 2), ctx: PrecisionContext | None = None):
    """``zeta'(0) = -ln 2 + 1/(1+lam) sum_k r^k sum_j (-1)^j C(k,j) lam^-j ln(1+j)``."""
    ctx = ctx or default_context()
    lam = check_lambda(lam, ctx)
    with ctx.workprec():
        (total,), _, _ = binomial_outer_sum(lambda j: [mpmath.log(j + 1)], lam, ctx, 1,
                                            tol=ctx.tol * abs(1 + lam) / 4, growth=0.5)
        return _realify(-mpmath.log(2) + total / (1 + lam), lam)


def zeta_negative_integers(n: int, lam=Fraction(1, 2), ctx: PrecisionContext | None = None):
    """``zeta(-n)`` from the series; equals ``(-1)^n B_{n+1}/(n+1)``."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return zeta_lambda(-n, lam, ctx)


def hurwitz_lambda(s, a, lam=1, ctx: PrecisionContext | None = None, max_terms: int = 512):
    """``zeta(s, a) = sum_k lam^k/(1+lam)^(k+1) sum_j C(k,j) lam^-j (a+j)^-s`` for ``Re s > 1``.

    The terms are positive and decay only like ``k^-s``, so the partial sums
    are accelerated with Levin's u-transform.  The number of terms grows
    from 64 until the accelerated values from ``K`` and ``7K/8`` terms agree
    within tolerance.
    """
    ctx = ctx or default_context()
    lam = check_lambda(lam, ctx)
    with ctx.workprec():
        s = mpmath.mpmathify(s)
        a = mpmath.mpmathify(a) if not isinstance(a, Fraction) else mpf(a.numerator) / a.denominator
        if not mpmath.re(s) > 1:
            raise DomainError("the Hurwitz series needs Re s > 1")
        if not mpmath.re(a) > 0:
            raise DomainError("the Hurwitz series needs Re a > 0")
    K = 64
    while True:
        est, short = _hurwitz_levin(s, a, lam, K, 2 * ctx.bits + 3 * K)
        if abs(est - short) < ctx.tol:
            break
        if K >= max_terms:
            raise ConvergenceError(
                f"Hurwitz series acceleration did not settle within {K} terms",
                estimates=(short, est),
            )
        K = min(max_terms, K * 3 // 2)
    with ctx.workprec():
        return _realify(+est, s, a, lam)


def _hurwitz_levin(s, a, lam, K: int, bits: int):
    """Levin-u values from the first ``K`` and the first ``7K/8`` partial sums."""
    # the transform loses digits roughly in proportion to K, hence bits ~ K
    with mpmath.workprec(bits):
        s, a, lam = mpmath.mpmathify(s), mpmath.mpmathify(a), mpmath.mpmathify(lam)
        inv = 1 / lam
        q = lam / (1 + lam)
        weighted = [inv ** j * mpmath.power(a + j, -s) for j in range(K)]
        partial = []
        qk = 1 / (1 + lam)
        total = mpf(0)
        for k in range(K):
            total += qk * mpmath.fsum(math.comb(k, j) * weighted[j] for j in range(k + 1))
            partial.append(total)
            qk *= q
        est = [mpmath.levin(method="levin", variant="u").update_psum(partial[:n])[0]
               for n in (K, K - K // 8)]
        return est[0], est[1]


def zeta_sech_kernel(s, ctx: PrecisionContext | None = None):
    """``zeta(s) = 1/(2(1-2^(1-s))) int_0^inf [(1/2-iw)^-s + (1/2+iw)^-s] sech(pi w) dw``."""
    ctx = ctx or default_context()
    s, d = _prefactor(s, ctx)
    with ctx.workprec():
        pi = mpmath.pi
        half = mpf(1) / 2
        neg_s = -s
        real_s = mpmath.im(s) == 0

        def integrand(w):
            e = mpmath.exp(-pi * w)
            sech = 2 * e / (1 + e * e)
            f = mpmath.power(mpmath.mpc(half, -w), neg_s) + mpmath.power(mpmath.mpc(half, w), neg_s)
            return (f.real if real_s else f) * sech

        tol = ctx.tol * 2 * abs(d) / 4
        val, _ = integrate(IntegralSpec(integrand, Domain.SECH2_SEMI_INFINITE, tol), ctx)
        return _realify(val / (2 * d), s)
