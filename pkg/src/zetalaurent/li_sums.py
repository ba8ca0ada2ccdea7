"""Li-criterion sums and their decomposition.

    S_2(n)      = -sum_{m=1}^n C(n,m) eta_{m-1}
    S_gamma(n)  = sum_{k=1}^n (-1)^k C(n,k) gamma_{k-1}/(k-1)!
                = int_1^inf L^1_{n-1}(ln t)/t dP_1(t)
    S_Lambda(n) = sum_{m>=1} (1 - Lambda(m))/m L^1_{n-1}(ln m) = n + S_2Lambda(n)

and ``S_2 = S_gamma + S_Lambda``.

``dP_1`` is read with ``P_1`` increasing with unit slope between integers and
dropping by one at each integer ``m >= 1`` (the drop at ``t = 1`` included),
so ``S_gamma(n) = lim_N [int_1^N f - sum_{m<=N} f(m)]`` for
``f(t) = L^1_{n-1}(ln t)/t``; at ``n = 1`` this is ``ln N - H_N -> -gamma``.

The arithmetic sums converge only conditionally.  They are evaluated as
Riesz means of order :data:`~zetalaurent.partial.RIESZ_ORDER`, whose
deviation from the limit is governed by the zeta zeros; the tail model in
:func:`s_lambda_tail_model` encodes that deviation with the Fejer envelope
of the Laguerre factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .laguerre import laguerre_coefficients, laguerre_float_table
from .mpcore import (
    DomainError,
    ErrorEstimate,
    ErrorSource,
    PrecisionContext,
    PrecisionError,
    UsageError,
    cancellation_guard,
    default_context,
    make_context,
)
from .numtheory import ArithTable, sieve_build
from .partial import RIESZ_ORDER, riesz_mean
from .quad import Domain, IntegralSpec, integrate
from .specfun import bernoulli_number
from .stieltjes import gamma_eta_recursion, gamma_table

S_GAMMA_METHODS = ("binomial", "stieltjes_integral", "hermite_integral", "sech_integral")
S2_METHODS = ("from_eta", "corollary6", "mobius")

MAX_BITS = 8192
# kappa! * 2 sum_{Im rho > 0} |Gamma(rho - 1)/Gamma(rho + kappa)| for kappa = 3,
# from the first 200 zeros (4.384e-4), rounded up
ZERO_SUM_CONSTANT = 4.4e-4
TAIL_SAFETY = 2.0
EM_START = 32
DEFAULT_TRUNC = 10**6


@dataclass(frozen=True)
class LiSumRecord:
    n: int
    s2: mpf
    s_gamma: mpf
    s_lambda: mpf
    s2_lambda_osc: mpf
    trunc_M: int
    decomposition_residual: mpf
    tail_model: float
    meta: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class GrowthFit:
    exponent: float
    amplitude: float
    residual: float          # rms deviation of ln|S_gamma + n| from the fitted line
    points: tuple            # the (n, |S_gamma(n) + n|) local maxima used


class DegenerateFitError(ArithmeticError):
    """All sampled values are indistinguishable from zero."""


# ---------------------------------------------------------------- Stieltjes constants at guarded precision

def _log_weight(n: int, k: int) -> float:
    # ln(C(n,k)/(k-1)!)
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) - math.lgamma(k)


def _max_weight(n_max: int) -> float:
    return max(math.exp(_log_weight(n_max, k)) for k in range(1, n_max + 1))


def _gamma_bits_estimate(k_max: int, tol) -> int:
    # ln|gamma_k| stays below k (ln ln k - 1) + 2 ln(k + 2) on the ranges used here;
    # the result is checked against the computed values afterwards
    lg = max((k * max(0.0, math.log(math.log(k)) - 1) if k >= 3 else 0.0) + 2 * math.log(k + 2)
             for k in range(k_max + 1))
    return int(math.ceil((lg - float(mpmath.log(tol))) / math.log(2))) + 32


def binomial_gammas(n_max: int, ctx: PrecisionContext | None = None, max_bits: int = MAX_BITS):
    """``gamma_0..gamma_{n_max-1}`` accurate enough for the binomial ``S_gamma(n)``, ``n <= n_max``.

    The binomial weights ``C(n,k)/(k-1)!`` amplify errors in ``gamma_{k-1}``,
    so the constants are computed to ``tol / (4 n_max max_k C(n_max,k)/(k-1)!)``
    at a precision that resolves that tolerance next to ``|gamma_k|``.
    Returns ``(values, gamma_context)``.
    """
    ctx = ctx or default_context()
    if n_max < 1:
        raise DomainError("n must be >= 1")
    with mpmath.workprec(64):
        tol_g = ctx.tol / (4 * n_max * mpf(_max_weight(n_max)))
    bits = max(ctx.bits, _gamma_bits_estimate(n_max - 1, tol_g))
    while True:
        if bits > max_bits:
            raise PrecisionError(f"S_gamma up to n = {n_max} exceeds the precision cap of {max_bits} bits",
                                 bits)
        gctx = make_context(bits, tol_g)
        vals = [r.value for r in gamma_table(n_max - 1, 1, "hermite", gctx)]
        with gctx.workprec():
            top = max(abs(v) for v in vals)
            need = int(math.ceil(float(mpmath.log(max(top, 1) / tol_g, 2)))) + 32
        if need <= bits:
            return vals, gctx
        bits = need


def _plain_gammas(k_max: int, ctx: PrecisionContext, gammas=None):
    if gammas is not None:
        if len(gammas) <= k_max:
            raise UsageError(f"need gamma_0..gamma_{k_max}, got {len(gammas)} values")
        return [getattr(g, "value", g) for g in gammas[:k_max + 1]]
    return [r.value for r in gamma_table(k_max, 1, "hermite", ctx)]


# ---------------------------------------------------------------- S_gamma

def s_gamma(n: int, method: str = "binomial", ctx: PrecisionContext | None = None, *,
            full: bool = False, **params):
    """``S_gamma(n)`` by one of :data:`S_GAMMA_METHODS`.

    With ``full=True`` returns ``(value, ErrorEstimate)``.
    """
    value, err = s_gamma_table(n, method, ctx, n_min=n, **params)[0]
    return (value, err) if full else value


def s_gamma_table(n_max: int, method: str = "binomial", ctx: PrecisionContext | None = None, *,
                  n_min: int = 1, gammas=None, max_bits: int = MAX_BITS) -> list:
    """``[(S_gamma(n), ErrorEstimate)]`` for ``n_min <= n <= n_max``.

    ``binomial`` needs the Stieltjes constants: pass ``gammas`` (values or
    :class:`~zetalaurent.stieltjes.StieltjesResult`) or let them be computed
    at the escalated precision of :func:`binomial_gammas`.
    """
    ctx = ctx or default_context()
    if method not in S_GAMMA_METHODS:
        raise UsageError(f"unknown S_gamma method {method!r}; choose from {', '.join(S_GAMMA_METHODS)}")
    if n_min < 1 or n_max < n_min:
        raise DomainError("need 1 <= n_min <= n_max")
    if method == "binomial":
        out = _binomial(n_max, ctx, gammas, max_bits)
    elif method == "stieltjes_integral":
        out = _unit_interval_form(n_max, 1, ctx)
    elif method == "hermite_integral":
        out = _hermite_form(n_max, ctx)
    else:
        out = _sech_form(n_max, ctx)
    return out[n_min - 1:]


def _binomial(n_max, ctx, gammas, max_bits):
    if gammas is None:
        vals, gctx = binomial_gammas(n_max, ctx, max_bits)
        gerr = [gctx.tol] * n_max
    else:
        if len(gammas) < n_max:
            raise UsageError(f"binomial S_gamma({n_max}) needs gamma_0..gamma_{n_max - 1}")
        vals = [getattr(g, "value", g) for g in gammas[:n_max]]
        gerr = [getattr(getattr(g, "err", None), "absolute", 0) for g in gammas[:n_max]]
    with mpmath.workprec(64):
        terms_mag = [[mpf(math.comb(n, k)) / mpmath.factorial(k - 1) * abs(vals[k - 1])
                      for k in range(1, n + 1)] for n in range(1, n_max + 1)]
    # first pass sized by the largest term, second by the observed cancellation
    top = max(max(t) for t in terms_mag)
    work = cancellation_guard(ctx, max(1, top))
    results = _binomial_sums(n_max, vals, work)
    with mpmath.workprec(64):
        ratio = max(max(t) / max(abs(r), ctx.tol) for t, r in zip(terms_mag, results))
    guarded = cancellation_guard(ctx, max(1, ratio))
    if guarded.bits > work.bits:
        results = _binomial_sums(n_max, vals, guarded)
    out = []
    with ctx.workprec():
        for n, r in enumerate(results, start=1):
            prop = sum((mpf(math.comb(n, k)) / mpmath.factorial(k - 1) * gerr[k - 1]
                        for k in range(1, n + 1)), mpf(0))
            if prop > ctx.tol:
                extra = int(math.ceil(float(mpmath.log(prop / ctx.tol, 2))))
                raise PrecisionError(
                    f"the supplied Stieltjes constants limit S_gamma({n}) to an error of "
                    f"{mpmath.nstr(prop, 3)}", ctx.bits + extra)
            out.append((+r, ErrorEstimate(prop, ErrorSource.CANCELLATION)))
    return out


def _binomial_sums(n_max, vals, work):
    with work.workprec():
        g = [mpmath.mpmathify(v) / mpmath.factorial(k) for k, v in enumerate(vals)]
        return [mpmath.fsum((-1) ** k * math.comb(n, k) * g[k - 1] for k in range(1, n + 1))
                for n in range(1, n_max + 1)]


def _laguerre_rows(n_max: int, alpha: int, x):
    """``[L^alpha_0(x), ..., L^alpha_{n_max}(x)]`` by the three-term recurrence."""
    out = [mpf(1)]
    if n_max >= 1:
        out.append(1 + alpha - x)
    for k in range(1, n_max):
        out.append(((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1))
    return out


def _unit_interval_form(n_max, alpha, ctx, N=EM_START):
    """``int_1^inf L^alpha_{n-1}(ln t)/t dP_1(t)`` for ``n = 1..n_max``.

    Smooth parts ``int_m^{m+1} f`` by quadrature on each unit interval,
    jumps ``-f(m)`` at the integers, and for ``m >= N`` the Euler-Maclaurin
    tail ``-f(N)/2 + sum_j B_2j/(2j)! f^(2j-1)(N)``.
    """
    work = cancellation_guard(ctx, mpf(2) ** min(n_max, 1024))
    with work.workprec():
        def f_all(t):
            rows = _laguerre_rows(n_max - 1, alpha, mpmath.log(t))
            return [r / t for r in rows]

        total = [mpf(0)] * n_max
        qerr = [mpf(0)] * n_max
        tol = ctx.tol / (4 * N)
        for m in range(1, N):
            vals, errs = integrate(IntegralSpec(f_all, Domain.UNIT_INTERVAL, [tol] * n_max,
                                                bounds=(m, m + 1)), work)
            jumps = f_all(mpf(m))
            for i in range(n_max):
                total[i] += vals[i] - jumps[i]
                qerr[i] += errs[i].absolute
        out = []
        for n in range(1, n_max + 1):
            tail, terr = _em_tail(laguerre_coefficients(n - 1, alpha), mpf(N), ctx.tol / 8)
            out.append((total[n - 1] + tail, qerr[n - 1] + terr))
    with ctx.workprec():
        return [(+v, ErrorEstimate(+e, ErrorSource.QUADRATURE)) for v, e in out]


def _em_tail(coeffs, N: mpf, tol):
    """``-f(N)/2 + sum_j B_2j/(2j)! f^(2j-1)(N)`` for ``f(t) = P(ln t)/t``."""
    c = [mpf(q.numerator) / q.denominator for q in coeffs]
    u = mpmath.log(N)

    def value(cs, q):
        acc = mpf(0)
        for a in reversed(cs):
            acc = acc * u + a
        return acc / N ** q

    def deriv(cs, q):
        # d/dt [t^-q sum c_p ln^p t] = t^-(q+1) sum [(p+1) c_{p+1} - q c_p] ln^p t
        nxt = [(p + 1) * cs[p + 1] - q * cs[p] for p in range(len(cs) - 1)] + [-q * cs[-1]]
        return nxt, q + 1

    total = -value(c, 1) / 2
    cs, q = deriv(c, 1)
    last = mpmath.inf
    for j in range(1, 200):
        b = bernoulli_number(2 * j)
        term = mpf(b.numerator) / b.denominator / mpmath.factorial(2 * j) * value(cs, q)
        if abs(term) > last:
            break  # asymptotic series has started to diverge
        total += term
        last = abs(term)
        if last < tol / 100:
            break
        cs, q = deriv(*deriv(cs, q))
    return total, last


def _hermite_form(n_max, ctx):
    """``-n/2 - 2 Re int_0^inf (y - i) L^1_{n-1}(ln(1 - iy)) / ((1 + y^2)(e^{2 pi y} - 1)) dy``."""
    work = cancellation_guard(ctx, mpf(2) ** min(n_max, 1024))
    with work.workprec():
        two_pi = 2 * mpmath.pi

        def integrand(y):
            z = mpmath.log(mpc(1, -y))
            rows = _laguerre_rows(n_max - 1, 1, z)
            pref = mpc(y, -1)
            denom = (1 + y * y) * mpmath.expm1(two_pi * y)
            return [(pref * r).real / denom for r in rows]

        tols = [ctx.tol / 8] * n_max
        vals, errs = integrate(IntegralSpec(integrand, Domain.BOSE_SEMI_INFINITE, tols), work)
        out = [(-mpf(n) / 2 - 2 * v, e.scaled(2)) for n, v, e in zip(range(1, n_max + 1), vals, errs)]
    with ctx.workprec():
        return [(+v, e) for v, e in out]


def _sech_form(n_max, ctx):
    """sech^2 kernel form with the Laguerre arguments taken at ``ln(1 - it)``:

    ``-(pi/2) int_0^inf {Re[L_n(z) - 1] + sum_{j=1}^n ln^j 2/j! Re L^j_{n-j}(z)} sech^2(pi t/2) dt``.
    """
    work = cancellation_guard(ctx, mpf(2) ** min(n_max, 1024))
    with work.workprec():
        pi = mpmath.pi
        ln2 = mpmath.log(2)
        scale = [ln2 ** j / mpmath.factorial(j) for j in range(n_max + 1)]

        def integrand(t):
            z = mpmath.log(mpc(1, -t))
            e = mpmath.exp(-pi * t)
            sech2 = 4 * e / (1 + e) ** 2
            # table[j][m] = L^j_m(z)
            table = [_laguerre_rows(n_max - j, j, z) for j in range(n_max + 1)]
            out = []
            for n in range(1, n_max + 1):
                acc = (table[0][n] - 1).real
                for j in range(1, n + 1):
                    acc += scale[j] * table[j][n - j].real
                out.append(acc * sech2)
            return out

        tols = [ctx.tol / (2 * pi)] * n_max
        vals, errs = integrate(IntegralSpec(integrand, Domain.SECH2_SEMI_INFINITE, tols), work)
        out = [(-pi / 2 * v, e.scaled(pi / 2)) for v, e in zip(vals, errs)]
    with ctx.workprec():
        return [(+v, e) for v, e in out]


# ---------------------------------------------------------------- S_Lambda

def s_lambda_tail_model(n: int, M: int) -> float:
    """Model of ``|S_Lambda(n) - Riesz mean at M|``.

    The zero at ``rho`` contributes about ``M^(rho-1) L^1_{n-1}(ln M)`` times
    the Riesz damping factor; the Laguerre factor is bounded by the larger
    of its value at ``ln M`` and its Fejer envelope
    ``pi^(-1/2) e^(x/2) x^(-3/4) n^(1/4)`` to cover sign changes.
    """
    x = math.log(M)
    lag = abs(float(laguerre_float_table(n - 1, 1, np.array([x]))[n - 1, 0]))
    envelope = math.exp(x / 2) * x ** -0.75 * n ** 0.25 / math.sqrt(math.pi)
    return TAIL_SAFETY * ZERO_SUM_CONSTANT * max(lag, envelope) / math.sqrt(M)


def _arith_table(table: ArithTable | None, M: int, divisors: bool = False) -> ArithTable:
    if table is not None and table.limit >= M and (table.d is not None or not divisors):
        return table
    return sieve_build(M, divisors=divisors)


def s_lambda_table(n_max: int, trunc_M: int = DEFAULT_TRUNC, ctx: PrecisionContext | None = None, *,
                   table: ArithTable | None = None) -> list:
    """``[(S_Lambda(n), ErrorEstimate)]`` for ``n = 1..n_max`` as Riesz means at ``trunc_M``."""
    ctx = ctx or default_context()
    if n_max < 1:
        raise DomainError("n must be >= 1")
    if trunc_M < 10 * n_max:
        raise DomainError("trunc_M must be at least 10 n")
    table = _arith_table(table, trunc_M)

    def terms(lo, hi, m):
        lag = laguerre_float_table(n_max - 1, 1, np.log(m))
        return lag * ((1.0 - table.lambda_float(lo, hi)) / m)

    sums = riesz_mean(trunc_M, terms)
    with ctx.workprec():
        return [(mpf(float(sums[n - 1])),
                 ErrorEstimate(mpf(s_lambda_tail_model(n, trunc_M)), ErrorSource.MODEL))
                for n in range(1, n_max + 1)]


def s_lambda(n: int, trunc_M: int = DEFAULT_TRUNC, ctx: PrecisionContext | None = None, *,
             table: ArithTable | None = None):
    """``(S_Lambda(n), ErrorEstimate)``; the estimate is the tail model (source ``model``)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if trunc_M < 10 * n:
        raise DomainError("trunc_M must be at least 10 n")
    ctx = ctx or default_context()
    table = _arith_table(table, trunc_M)

    def terms(lo, hi, m):
        lag = laguerre_float_table(n - 1, 1, np.log(m))[n - 1]
        return lag * ((1.0 - table.lambda_float(lo, hi)) / m)

    value = riesz_mean(trunc_M, terms)[0]
    with ctx.workprec():
        return mpf(float(value)), ErrorEstimate(mpf(s_lambda_tail_model(n, trunc_M)), ErrorSource.MODEL)


# ---------------------------------------------------------------- S_2

def s2(n: int, method: str = "from_eta", ctx: PrecisionContext | None = None, *,
       etas=None, gammas=None, trunc_M: int | None = None, table: ArithTable | None = None,
       full: bool = False):
    """``S_2(n)`` by one of :data:`S2_METHODS`.

    ``from_eta`` (reference) uses ``etas`` when given, which must then hold
    ``eta_0..eta_{n-1}``; otherwise they come from Hermite Stieltjes
    constants.  ``corollary6`` is the divisor-function series, summed as a
    Riesz mean up to ``trunc_M`` (default ``10**5``).  ``mobius`` is the
    Moebius series as plain partial sums up to ``trunc_M`` (default
    ``10**6``); it is exploratory and reports an infinite error.
    """
    ctx = ctx or default_context()
    if method not in S2_METHODS:
        raise UsageError(f"unknown S_2 method {method!r}; choose from {', '.join(S2_METHODS)}")
    if n < 1:
        raise DomainError("n must be >= 1")
    if method == "from_eta":
        value, err = _s2_from_eta(n, ctx, etas, gammas)
    elif method == "corollary6":
        value, err = _s2_corollary6(n, ctx, gammas, trunc_M or 10**5, table)
    else:
        value, err = _s2_mobius(n, ctx, gammas, trunc_M or 10**6, table)
    return (value, err) if full else value


def s2_from_etas(n_max: int, etas, ctx: PrecisionContext | None = None) -> list:
    """``[S_2(1), ..., S_2(n_max)]`` from ``eta_0..eta_{n_max-1}``."""
    ctx = ctx or default_context()
    if etas is None or len(etas) < n_max:
        raise UsageError(f"S_2({n_max}) needs eta_0..eta_{n_max - 1}")
    etas = [getattr(e, "value", e) for e in etas[:n_max]]
    with mpmath.workprec(64):
        top = max(mpf(math.comb(n_max, m)) * abs(etas[m - 1]) for m in range(1, n_max + 1))
    with cancellation_guard(ctx, max(1, top)).workprec():
        out = [-mpmath.fsum(math.comb(n, m) * etas[m - 1] for m in range(1, n + 1))
               for n in range(1, n_max + 1)]
    with ctx.workprec():
        return [+v for v in out]


def _s2_from_eta(n, ctx, etas, gammas):
    if etas is None:
        g = _plain_gammas(n - 1, ctx.with_bits(ctx.bits + n), gammas)
        etas = gamma_eta_recursion(g, ctx.with_bits(ctx.bits + n))
    return s2_from_etas(n, etas, ctx)[-1], ErrorEstimate(ctx.tol, ErrorSource.QUADRATURE)


def _s2_corollary6(n, ctx, gammas, M, table):
    g = _plain_gammas(max(n - 1, 0), ctx, gammas)
    table = _arith_table(table, M, divisors=True)
    with ctx.workprec():
        euler = mpmath.euler
        B = C = D = mpf(0)
        for k in range(2, n + 1):
            w = (-1) ** k * math.comb(n, k) / mpmath.factorial(k - 1)
            B += -2 * w * g[k - 1] / (k - 1)
            C += -2 * euler * w * g[k - 2]
            D += w * mpmath.fsum(math.comb(k - 2, l) * g[l] * g[k - 2 - l] for l in range(k - 1))
        gam = float(euler)
        head = euler * n + B + C + D
    slope = -math.comb(n, 2)   # limit of (L^1_{n-1}(x) - n)/x at x = 0

    def terms(lo, hi, m):
        x = np.log(m)
        lag = laguerre_float_table(n - 1, 1, x)[n - 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(m > 1, (lag - n) / np.where(m > 1, x, 1.0), float(slope))
        d = table.d[lo:hi].astype(np.float64)
        return ratio / m * (d - table.lambda_float(lo, hi) * x - 2 * gam)

    arith = riesz_mean(M, terms)[0]
    with ctx.workprec():
        value = head + mpf(float(arith))
        # same zero-driven deviation as S_Lambda, with one extra 1/ln M from the division
        model = 2 * s_lambda_tail_model(n, M) + n * n / M
        return value, ErrorEstimate(mpf(model), ErrorSource.MODEL)


def _s2_mobius(n, ctx, gammas, N, table):
    g = _plain_gammas(n, ctx, gammas)
    table = _arith_table(table, N)
    with ctx.workprec():
        # polynomial in x = ln k: sum_{p=1}^{n-1} x^p/p! sum_{l=p+1}^n (-1)^l C(n,l) gamma_{l-p}/(l-p-1)!
        coef = [0.0] * n
        for p in range(1, n):
            c = mpmath.fsum((-1) ** l * math.comb(n, l) * g[l - p] / mpmath.factorial(l - p - 1)
                            for l in range(p + 1, n + 1))
            coef[p] = float(c / mpmath.factorial(p))
    total = 0.0
    for lo in range(2, N + 1, 1 << 18):
        hi = min(N + 1, lo + (1 << 18))
        mu = table.mu[lo:hi].astype(np.float64)
        nz = mu != 0
        k = np.arange(lo, hi, dtype=np.float64)[nz]
        x = np.log(k)
        lag = laguerre_float_table(n, 1, x)[n]
        poly = np.zeros_like(x)
        for p in range(n - 1, 0, -1):
            poly = (poly + coef[p]) * x
        total += math.fsum(mu[nz] / k * (x * (lag / (n + 1) - 1) + poly))
    with ctx.workprec():
        return mpf(total), ErrorEstimate(mpmath.inf, ErrorSource.MODEL)


# ---------------------------------------------------------------- records

def li_sum_table(n_max: int, trunc_M: int = DEFAULT_TRUNC, ctx: PrecisionContext | None = None, *,
                 table: ArithTable | None = None, max_bits: int = MAX_BITS) -> list[LiSumRecord]:
    """:class:`LiSumRecord` for ``n = 1..n_max`` sharing one Stieltjes table and one sieve."""
    ctx = ctx or default_context()
    if n_max < 1:
        raise DomainError("n must be >= 1")
    gammas, gctx = binomial_gammas(n_max, ctx, max_bits)
    sg = s_gamma_table(n_max, "binomial", ctx, gammas=gammas)
    etas = gamma_eta_recursion(gammas, gctx)
    s2v = s2_from_etas(n_max, etas, ctx)
    sl = s_lambda_table(n_max, trunc_M, ctx, table=table)
    out = []
    with ctx.workprec():
        for n in range(1, n_max + 1):
            g, _ = sg[n - 1]
            lam, lerr = sl[n - 1]
            out.append(LiSumRecord(
                n=n, s2=s2v[n - 1], s_gamma=g, s_lambda=lam, s2_lambda_osc=lam - n,
                trunc_M=trunc_M, decomposition_residual=s2v[n - 1] - g - lam,
                tail_model=float(lerr.absolute), meta={"gamma_bits": gctx.bits},
            ))
    return out


# ---------------------------------------------------------------- averages

def averages(M: int, ctx: PrecisionContext | None = None, *, trunc_M: int = DEFAULT_TRUNC,
             table: ArithTable | None = None):
    """``((1/M) sum_{n<=M} S_gamma(n), (1/M) sum_{n<=M} S_Lambda(n))``."""
    ctx = ctx or default_context()
    if M < 1:
        raise DomainError("M must be >= 1")
    sg = s_gamma_table(M, "binomial", ctx)
    sl = s_lambda_table(M, max(trunc_M, 10 * M), ctx, table=table)
    with ctx.workprec():
        return (mpmath.fsum(v for v, _ in sg) / M, mpmath.fsum(v for v, _ in sl) / M)


def average_gamma_laguerre2(M: int, ctx: PrecisionContext | None = None, *,
                            method: str = "binomial", gammas=None):
    """``(1/M) sum_{n<=M} S_gamma(n)`` through ``L^2_{M-1}``.

    ``binomial``: ``(1/M) sum_k (-1)^k C(M+1,k+1) gamma_{k-1}/(k-1)!``;
    ``stieltjes_integral``: ``(1/M) int_1^inf L^2_{M-1}(ln t)/t dP_1(t)``.
    """
    ctx = ctx or default_context()
    if M < 1:
        raise DomainError("M must be >= 1")
    if method == "stieltjes_integral":
        value = _unit_interval_form(M, 2, ctx)[M - 1][0]
        with ctx.workprec():
            return value / M
    if method != "binomial":
        raise UsageError("method must be 'binomial' or 'stieltjes_integral'")
    if gammas is None:
        gammas, _ = binomial_gammas(M + 1, ctx)
    g = [getattr(v, "value", v) for v in gammas]
    with cancellation_guard(ctx, mpf(2) ** (M + 2)).workprec():
        total = mpmath.fsum((-1) ** k * math.comb(M + 1, k + 1) * g[k - 1] / mpmath.factorial(k - 1)
                            for k in range(1, M + 1))
    with ctx.workprec():
        return total / M


# ---------------------------------------------------------------- asymptotics and growth

def s_gamma_asymptotic(n: int, N: int, ctx: PrecisionContext | None = None, *, full: bool = False):
    """``-sum_{nu<=N} L^1_{n-1}(ln nu)/nu - L_n(ln N) + 1 + L^1_{n-1}(ln N)/(2N)``.

    The neglected remainder is modelled by the next Euler-Maclaurin term,
    ``|f'(N)|/12`` with ``f(t) = L^1_{n-1}(ln t)/t``, doubled.
    """
    if n < 1 or N < 2:
        raise DomainError("need n >= 1 and N >= 2")
    ctx = ctx or default_context()
    with cancellation_guard(ctx, mpf(2) ** n).workprec():
        total = mpf(0)
        for nu in range(1, N + 1):
            total += _laguerre_rows(n - 1, 1, mpmath.log(nu))[n - 1] / nu
        lN = mpmath.log(N)
        l1 = _laguerre_rows(n - 1, 1, lN)[n - 1]
        l2 = _laguerre_rows(n - 2, 2, lN)[n - 2] if n >= 2 else mpf(0)
        value = -total - _laguerre_rows(n, 0, lN)[n] + 1 + l1 / (2 * N)
        model = abs(l1 + l2) / N ** 2 / 6
    with ctx.workprec():
        value = +value
        err = ErrorEstimate(+model, ErrorSource.TRUNCATION)
    return (value, err) if full else value


def growth_fit(n_min: int = 10, n_max: int = 200, ctx: PrecisionContext | None = None, *,
               values=None) -> GrowthFit:
    """Fit ``|S_gamma(n) + n| ~ A n^b`` through the local maxima over ``[n_min, n_max]``.

    ``values`` may supply ``S_gamma(1..n_max)``; otherwise the binomial form
    is evaluated at auto-escalated precision.
    """
    if not 10 <= n_min < n_max:
        raise DomainError("need 10 <= n_min < n_max")
    ctx = ctx or default_context()
    if values is None:
        values = [v for v, _ in s_gamma_table(n_max, "binomial", ctx)]
    ns = np.arange(n_min, n_max + 1)
    with ctx.workprec():
        y = np.array([float(abs(values[n - 1] + n)) for n in ns])
    if np.all(y < 10 * float(ctx.tol)):
        raise DegenerateFitError("all |S_gamma(n) + n| are below 10 tol")
    peaks = [i for i in range(1, len(y) - 1) if y[i] >= y[i - 1] and y[i] >= y[i + 1]]
    if len(peaks) < 2:
        raise DegenerateFitError("fewer than two local maxima in range")
    X, Y = np.log(ns[peaks]), np.log(y[peaks])
    slope, intercept = np.polyfit(X, Y, 1)
    resid = float(np.sqrt(np.mean((Y - (slope * X + intercept)) ** 2)))
    pts = tuple((int(ns[i]), float(y[i])) for i in peaks)
    return GrowthFit(float(slope), float(math.exp(intercept)), resid, pts)
