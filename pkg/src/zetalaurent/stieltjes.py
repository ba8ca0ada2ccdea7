"""Stieltjes constants ``gamma_k(a)`` and the ``eta_k`` coefficients.

``gamma_k(a)`` are the Laurent coefficients of the Hurwitz zeta function at
``s = 1``; ``eta_k`` those of ``-zeta'/zeta``.  Several independent routes
are provided so that they can be checked against each other:

* ``hermite``     Bose-kernel integral of the Hermite formula
* ``abel_plana``  the same after summing the first ``n`` terms explicitly
* ``jensen``      sech^2-kernel integral (``a > 1/2``)
* ``limit``       partial sums with an Euler-Maclaurin tail correction
* ``amore``       Bernoulli-number series from the lambda-parameterized
                  binomial representation of zeta (``a = 1``)
* ``trigamma``    integrals of ``ln^p t [psi'(1+t) - 1/(1+t)]`` (``a = 1``)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mpf

from .mpcore import (
    DomainError,
    ErrorEstimate,
    ErrorSource,
    PrecisionContext,
    UsageError,
    default_context,
)
from .numtheory import ArithTable, sieve_build
from .partial import averaged_partial_sums
from .quad import Domain, IntegralSpec, integrate
from .specfun import bernoulli_number
from .zeta_series import binomial_outer_sum, check_lambda

GAMMA_METHODS = ("hermite", "abel_plana", "jensen", "limit", "amore", "trigamma")
ETA_METHODS = ("limit", "from_gamma", "mobius")
LIMIT_N_CAP = 10**8


@dataclass(frozen=True)
class StieltjesResult:
    kind: str            # "gamma" or "eta"
    k: int
    a: object
    method: str
    value: mpf
    err: ErrorEstimate
    ctx_bits: int
    meta: dict = field(default_factory=dict, compare=False)


def _to_real(a, ctx) -> mpf:
    with ctx.workprec():
        if isinstance(a, Fraction):
            return mpf(a.numerator) / a.denominator
        v = mpmath.mpmathify(a)
        if isinstance(v, mpmath.mpc):
            if v.imag != 0:
                raise DomainError("complex a is not supported")
            v = v.real
        return v


def _validate(method: str, a: mpf, k: int):
    if method not in GAMMA_METHODS:
        raise UsageError(f"unknown gamma method {method!r}; choose from {', '.join(GAMMA_METHODS)}")
    if k < 0:
        raise DomainError("k must be >= 0")
    if not a > 0:
        raise UsageError(f"gamma_k(a) needs Re a > 0, got a = {a}")
    if method == "jensen" and not a > mpf(1) / 2:
        raise UsageError("the jensen method needs a > 1/2")
    if method in ("amore", "trigamma") and a != 1:
        raise UsageError(f"the {method} method is only available at a = 1")


def gamma_stieltjes(k: int, a=1, method: str = "hermite", ctx: PrecisionContext | None = None,
                    **params) -> StieltjesResult:
    """``gamma_k(a)`` by the chosen method.

    ``params``: ``n`` (abel_plana shift, default 10), ``N`` and ``em_order``
    (limit), ``lam`` (amore, default 1/2).
    """
    return gamma_table(k, a, method, ctx, k_min=k, **params)[0]


def gamma_table(k_max: int, a=1, method: str = "hermite", ctx: PrecisionContext | None = None,
                k_min: int = 0, **params) -> list[StieltjesResult]:
    """``[gamma_k(a)]`` for ``k_min <= k <= k_max``; quadrature methods share one node set."""
    ctx = ctx or default_context()
    a_val = _to_real(a, ctx)
    _validate(method, a_val, k_max)
    if k_min < 0 or k_min > k_max:
        raise DomainError("need 0 <= k_min <= k_max")
    ks = list(range(k_min, k_max + 1))
    if method == "hermite":
        vals, errs, meta = _abel_plana(ks, a_val, 0, ctx)
    elif method == "abel_plana":
        n = int(params.get("n", 10))
        if n < 1:
            raise UsageError("abel_plana shift n must be >= 1")
        vals, errs, meta = _abel_plana(ks, a_val, n, ctx)
    elif method == "jensen":
        vals, errs, meta = _jensen(ks, a_val, ctx)
    elif method == "limit":
        vals, errs, meta = _limit(ks, a_val, ctx, params.get("N"), int(params.get("em_order", 3)))
    elif method == "amore":
        vals, errs, meta = _amore(ks, ctx, params.get("lam", Fraction(1, 2)))
    else:
        vals, errs, meta = _trigamma(ks, ctx)
    return [
        StieltjesResult("gamma", k, a_val, method, v, e, ctx.bits, dict(meta))
        for k, v, e in zip(ks, vals, errs)
    ]


# ---------------------------------------------------------------- Hermite / Abel-Plana

def _abel_plana(ks, a, n, ctx):
    """Hermite formula at ``b = a + n`` plus the first ``n`` terms of the sum."""
    kmax = max(ks)
    with ctx.workprec():
        b = a + n
        lb = mpmath.log(b)
        two_pi = 2 * mpmath.pi

        def integrand(y):
            w = y / b
            L = mpmath.log(mpmath.mpc(b, -y))
            denom = (1 + w * w) * mpmath.expm1(two_pi * y)
            pref = mpmath.mpc(w, -1)
            out = []
            p = mpmath.mpc(1)
            for k in range(kmax + 1):
                if k >= ks[0]:
                    out.append((pref * p).real / denom)
                p *= L
            return out

        tols = [ctx.tol * b / 2 / 4] * len(ks)
        vals, errs = integrate(IntegralSpec(integrand, Domain.BOSE_SEMI_INFINITE, tols), ctx)
        out = []
        for k, v in zip(ks, vals):
            head = sum((mpmath.log(m + a) ** k / (m + a) for m in range(n)), mpf(0))
            out.append(head + lb ** k / (2 * b) - lb ** (k + 1) / (k + 1) + 2 * v / b)
        errs = [e.scaled(2 / b) for e in errs]
    return out, errs, {"shift": n}


# ---------------------------------------------------------------- Jensen

def _jensen_moments(pmax: int, c: mpf, ctx):
    """``Re int_0^inf ln^p(c - i t) sech^2(pi t / 2) dt`` for ``p = 0..pmax``."""
    with ctx.workprec():
        pi = mpmath.pi

        def integrand(t):
            e = mpmath.exp(-pi * t)
            sech2 = 4 * e / (1 + e) ** 2
            L = mpmath.log(mpmath.mpc(c, -t))
            out = []
            p = mpmath.mpc(1)
            for _ in range(pmax + 1):
                out.append(p.real * sech2)
                p *= L
            return out

        tols = [ctx.tol / 8] * (pmax + 1)
        return integrate(IntegralSpec(integrand, Domain.SECH2_SEMI_INFINITE, tols), ctx)


def _jensen(ks, a, ctx):
    kmax = max(ks)
    with ctx.workprec():
        c = 2 * a - 1
        J, Jerr = _jensen_moments(kmax + 1, c, ctx)
        ln2 = mpmath.log(2)
        half_pi = mpmath.pi / 2
        out, errs = [], []
        for m in ks:
            v = -half_pi / (m + 1) * J[m + 1]
            bound = half_pi / (m + 1) * Jerr[m + 1].absolute
            fm = mpmath.factorial(m)
            for j in range(1, m + 2):
                coef = half_pi * fm * ln2 ** j / mpmath.factorial(j) * (-1) ** (j + 1) / mpmath.factorial(m - j + 1)
                v += coef * J[m - j + 1]
                bound += abs(coef) * Jerr[m - j + 1].absolute
            out.append(v)
            errs.append(ErrorEstimate(bound, ErrorSource.QUADRATURE))
    return out, errs, {}


# ---------------------------------------------------------------- limit with Euler-Maclaurin tail

def _em_derivative_coeffs(k: int, r: int) -> list[int]:
    """Coefficients c_p with ``d^r/dx^r [ln^k x / x] = x^(-1-r) sum_p c_p ln^p x``."""
    c = [0] * (k + 1)
    c[k] = 1
    for q in range(r):
        new = [0] * (k + 1)
        for p, cp in enumerate(c):
            if cp:
                new[p] -= (1 + q) * cp
                if p:
                    new[p - 1] += p * cp
        c = new
    return c


def _em_term(k, j, x, lx):
    """``B_{2j}/(2j)! f^(2j-1)(x)`` for ``f = ln^k x / x``."""
    coeffs = _em_derivative_coeffs(k, 2 * j - 1)
    deriv = sum((cp * lx ** p for p, cp in enumerate(coeffs) if cp), mpf(0)) / x ** (2 * j)
    b = bernoulli_number(2 * j)
    return mpf(b.numerator) / b.denominator / mpmath.factorial(2 * j) * deriv


def _limit_value(k, a, N, em_order):
    # gamma_k(a) = sum_{m=0}^{N} f(m+a) - ln^{k+1}(N+a)/(k+1) - f(N+a)/2 - sum_j B_2j/(2j)! f^(2j-1)(N+a)
    x = N + a
    lx = mpmath.log(x)
    s = mpf(0)
    for m in range(N + 1):
        t = m + a
        s += mpmath.log(t) ** k / t
    v = s - lx ** (k + 1) / (k + 1) - lx ** k / (2 * x)
    for j in range(1, em_order + 1):
        v -= _em_term(k, j, x, lx)
    model = abs(_em_term(k, em_order + 1, x, lx))
    return v, model


def _limit(ks, a, ctx, N, em_order):
    if em_order < 0:
        raise UsageError("em_order must be >= 0")
    out, errs = [], []
    used = {}
    with ctx.workprec():
        for k in ks:
            if N is not None:
                n = int(N)
                if n < 1 or n > LIMIT_N_CAP:
                    raise UsageError(f"limit truncation N must be in [1, {LIMIT_N_CAP}]")
            else:
                n = 64
                while True:
                    x = n + a
                    model = abs(_em_term(k, em_order + 1, x, mpmath.log(x)))
                    if model < ctx.tol / 4 or 2 * n > LIMIT_N_CAP:
                        break
                    n *= 2
            v, model = _limit_value(k, a, n, em_order)
            out.append(v)
            errs.append(ErrorEstimate(model, ErrorSource.TRUNCATION))
            used[k] = n
    return out, errs, {"N": used, "em_order": em_order}


# ---------------------------------------------------------------- lambda-parameterized series

def _amore(ks, ctx, lam):
    lam = check_lambda(lam, ctx)
    kmax = max(ks)
    with ctx.workprec():
        ln2 = mpmath.log(2)

        def weights(j):
            lj = mpmath.log(j + 1)
            base = 1 / mpf(j + 1)
            return [lj ** l * base for l in range(1, kmax + 2)]

        T, tail, terms = binomial_outer_sum(weights, lam, ctx, kmax + 1, tol=ctx.tol / 16)
        T = [None] + T  # T[l] for l = 1..kmax+1
        opl = 1 + lam
        out, errs = [], []
        for m in ks:
            if m == 0:
                v = ln2 / 2 - T[1] / (opl * ln2)
            else:
                fm = mpmath.factorial(m)
                s = 0
                for l in range(1, m + 1):
                    b = bernoulli_number(m - l + 1)
                    if b:
                        s += (mpf(b.numerator) / b.denominator / mpmath.factorial(m - l + 1)
                              * ln2 ** (m - l) / mpmath.factorial(l) * T[l])
                b1 = bernoulli_number(m + 1)
                v = (-fm / opl * s - T[m + 1] / (opl * ln2 * (m + 1))
                     - mpf(b1.numerator) / b1.denominator / (m + 1) * ln2 ** (m + 1))
            if isinstance(v, mpmath.mpc):
                v = v.real
            out.append(v)
            scale = mpmath.factorial(m) * 4 / abs(opl) / ln2 + 1
            errs.append(ErrorEstimate(tail * scale, ErrorSource.TRUNCATION))
    return out, errs, {"lambda": str(lam), "terms": terms}


# ---------------------------------------------------------------- trigamma integrals

def _trigamma(ks, ctx):
    kmax = max(ks)
    with ctx.workprec():

        def integrand(t):
            base = mpmath.psi(1, 1 + t) - 1 / (1 + t)
            lt = mpmath.log(t)
            out = []
            p = mpf(1)
            for _ in range(kmax + 1):
                out.append(p * base)
                p *= lt
            return out

        tols = [ctx.tol / 8] * (kmax + 1)
        I, Ierr = integrate(IntegralSpec(integrand, Domain.SEMI_INFINITE_PLAIN, tols), ctx)
        pi2 = mpmath.pi ** 2
        out, errs = [], []
        for m in ks:
            fm = mpmath.factorial(m)
            v = mpf(0)
            bound = mpf(0)
            for k in range(m // 2 + 1):
                coef = fm * (-1) ** k * pi2 ** k / (mpmath.factorial(2 * k + 1) * mpmath.factorial(m - 2 * k))
                v += coef * I[m - 2 * k]
                bound += abs(coef) * Ierr[m - 2 * k].absolute
            out.append(v)
            errs.append(ErrorEstimate(bound, ErrorSource.QUADRATURE))
    return out, errs, {}


# ---------------------------------------------------------------- eta coefficients

def gamma_eta_recursion(gammas: list, ctx: PrecisionContext | None = None) -> list:
    """``[eta_0..eta_K]`` from ``[gamma_0..gamma_K]``.

    With ``Z(u) = u zeta(1+u) = sum z_m u^m`` (``z_0 = 1``,
    ``z_m = (-1)^(m-1) gamma_{m-1}/(m-1)!``) the coefficients of
    ``-zeta'/zeta(1+u) - 1/u`` are those of ``-Z'/Z``.
    """
    ctx = ctx or default_context()
    K = len(gammas) - 1
    with ctx.workprec():
        z = [mpf(1)] + [(-1) ** (m - 1) * mpmath.mpmathify(gammas[m - 1]) / mpmath.factorial(m - 1)
                        for m in range(1, K + 2)]
        # z_{K+1} needs gamma_K only; the last Q needs z_{K+1}
        Q = []
        for m in range(K + 1):
            Q.append((m + 1) * z[m + 1] - sum((z[i] * Q[m - i] for i in range(1, m + 1)), mpf(0)))
        return [-q for q in Q]


def eta_gamma_recursion(etas: list, ctx: PrecisionContext | None = None) -> list:
    """Inverse of :func:`gamma_eta_recursion`."""
    ctx = ctx or default_context()
    K = len(etas) - 1
    with ctx.workprec():
        Q = [-mpmath.mpmathify(e) for e in etas]
        z = [mpf(1)]
        for m in range(K + 1):
            z.append(sum((z[i] * Q[m - i] for i in range(m + 1)), mpf(0)) / (m + 1))
        return [(-1) ** (m - 1) * z[m] * mpmath.factorial(m - 1) for m in range(1, K + 2)]


def _float_blocks(table: ArithTable, N: int, block: int = 1 << 20):
    for start in range(1, N + 1, block):
        stop = min(N + 1, start + block)
        m = np.arange(start, stop, dtype=np.float64)
        yield start, stop, m


def _eta_limit(ks, ctx, N, table, average):
    # F_k(N) = (-1)^k/k! [ sum_{m<=N} Lambda(m) ln^k m / m - ln^{k+1} N/(k+1) ] -> eta_k
    if average not in ("log", "none"):
        raise UsageError("average must be 'log' or 'none'")
    if table is None or table.limit < N:
        table = sieve_build(N, divisors=False)
    kmax = max(ks)
    signs = np.array([(-1) ** k / math.factorial(k) for k in range(kmax + 1)])

    def terms(lo, hi, m):
        lm = np.log(m)
        base = table.lambda_float(lo, hi) / m
        return signs[:, None] * np.array([base * lm ** k for k in range(kmax + 1)])

    def offset(m):
        lm = np.log(m)
        return signs[:, None] * np.array([lm ** (k + 1) / (k + 1) for k in range(kmax + 1)])

    res = averaged_partial_sums(N, terms, offset)
    picked = res.average if average == "log" else res.final
    out, errs = [], []
    with ctx.workprec():
        for k in ks:
            out.append(mpf(float(picked[k])))
            errs.append(ErrorEstimate(mpf(float(res.model_error[k])), ErrorSource.MODEL))
    return out, errs, {"N": N, "average": average}


def _eta_mobius(ks, ctx, N, table, gammas):
    # eta_0 = (1/2) sum mu(k) ln^2 k / k; higher orders from the Moebius expansion
    if table is None or table.limit < N:
        table = sieve_build(N, divisors=False)
    kmax = max(ks)
    pmax = kmax + 2
    sums = [[] for _ in range(pmax + 1)]
    for start, stop, m in _float_blocks(table, N):
        mu = table.mu[start:stop].astype(np.float64)
        nz = mu != 0
        lm = np.log(m[nz])
        w = mu[nz] / m[nz]
        p = np.ones_like(lm)
        for q in range(pmax + 1):
            sums[q].append(math.fsum(w * p))
            p = p * lm
    with ctx.workprec():
        M = [mpf(math.fsum(s)) for s in sums]  # M[q] = sum_{k<=N} mu(k) ln^q k / k
        out, errs = [], []
        for l in ks:
            if l == 0:
                v = M[2] / 2
            else:
                v = M[l + 2] / mpmath.factorial(l + 2)
                for p in range(1, l + 1):
                    v += M[p] / mpmath.factorial(p) * gammas[l - p + 1] / mpmath.factorial(l - p)
                v *= (-1) ** l
            out.append(v)
            errs.append(ErrorEstimate(mpmath.inf, ErrorSource.MODEL))  # no bound claimed
    return out, errs, {"N": N, "exploratory": True}


def eta(k: int, method: str = "from_gamma", ctx: PrecisionContext | None = None, **params) -> StieltjesResult:
    return eta_table(k, method, ctx, k_min=k, **params)[0]


def eta_table(k_max: int, method: str = "from_gamma", ctx: PrecisionContext | None = None,
              k_min: int = 0, **params) -> list[StieltjesResult]:
    """``eta_k`` for ``k_min <= k <= k_max``.

    ``from_gamma`` (reference) applies :func:`gamma_eta_recursion` to Hermite
    values; ``limit`` uses the von Mangoldt partial sums up to ``N`` (default
    10**7), log-averaged over the last decade unless ``average='none'``;
    ``mobius`` is exploratory and reports no error bound.
    """
    ctx = ctx or default_context()
    if method not in ETA_METHODS:
        raise UsageError(f"unknown eta method {method!r}; choose from {', '.join(ETA_METHODS)}")
    if k_min < 0 or k_min > k_max:
        raise DomainError("need 0 <= k_min <= k_max")
    ks = list(range(k_min, k_max + 1))
    if method == "from_gamma":
        gt = params.get("gammas")
        if gt is None:
            res = gamma_table(k_max, 1, "hermite", ctx)
            gt = [r.value for r in res]
            gerr = max(r.err.absolute for r in res)
        else:
            gerr = mpf(0)
        etas = gamma_eta_recursion(list(gt[:k_max + 1]), ctx)
        vals = [etas[k] for k in ks]
        errs = [ErrorEstimate(gerr * (k + 2) * 4, ErrorSource.QUADRATURE) for k in ks]
        meta = {}
    elif method == "limit":
        N = int(params.get("N", 10**7))
        vals, errs, meta = _eta_limit(ks, ctx, N, params.get("table"), params.get("average", "log"))
    else:
        N = int(params.get("N", 10**6))
        gt = params.get("gammas")
        if gt is None or len(gt) < k_max + 2:
            gt = [r.value for r in gamma_table(k_max + 1, 1, "hermite", ctx)]
        vals, errs, meta = _eta_mobius(ks, ctx, N, params.get("table"), gt)
    return [StieltjesResult("eta", k, None, method, v, e, ctx.bits, dict(meta))
            for k, v, e in zip(ks, vals, errs)]
