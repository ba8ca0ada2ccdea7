"""Registry of identities between Stieltjes constants, eta coefficients,
arithmetic sums and special-function integrals, each run as a residual test.

Every entry evaluates two or more sides by unrelated routes (quadrature
against finite sums, Gamma-function closed forms, accelerated series,
Riesz means of arithmetic sums) and reports the largest disagreement.

Convergence classes:

* ``fast``: both sides converge geometrically or better; tolerance 1e-10.
* ``slow_conditional``: one side is an arithmetic sum that converges only
  conditionally.  It is evaluated as a Riesz mean of order 3 at truncation
  ``M`` (default ``10**6``).  Tolerances derive from the residuals of a
  pre-build run at ``M = 10**5, 10**6, 10**7`` kept in :data:`PREBUILD`.
* ``exploratory``: Moebius-weighted sums, reported but never gated.
"""

from __future__ import annotations

import enum
import math
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np
from mpmath import mpf

from .accel import alternating_sum, levin_transform
from .mpcore import (
    ConvergenceError,
    PrecisionContext,
    UsageError,
    default_context,
    make_context,
)
from .numtheory import ArithTable, sieve_build
from .partial import riesz_mean
from .quad import Domain, IntegralSpec, integrate
from .specfun import bernoulli_number, expint_ei, log_gamma, polylog_unit
from .stieltjes import eta_table, gamma_eta_recursion, gamma_table
from .zeta_series import (
    binomial_outer_sum,
    check_lambda,
    zeta_lambda,
    zeta_negative_integers,
    zeta_prime_at_zero,
    zeta_prime_lambda,
)


class ConvergenceClass(str, enum.Enum):
    FAST = "fast"
    SLOW = "slow_conditional"
    EXPLORATORY = "exploratory"


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    anchor: str                        # the statement being checked
    parameters: dict                   # name -> tuple of allowed / default values
    lhs: str                           # how each side is computed
    rhs: str
    tol: float
    convergence_class: ConvergenceClass
    runner: Callable = field(repr=False, compare=False)
    truncation: int | None = None      # default M for slow_conditional entries

    def grid(self) -> list[dict]:
        """All default parameter points (cartesian product of ``parameters``)."""
        points = [{}]
        for name, values in self.parameters.items():
            points = [dict(p, **{name: v}) for p in points for v in values]
        return points


@dataclass(frozen=True)
class IdentityReport:
    id: str
    params: dict
    lhs: object
    rhs: object
    residual: float
    tol: float
    passed: bool
    runtime: float
    convergence_class: str
    sides: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------- shared inputs

_lock = threading.Lock()
_sieve: dict = {}


def _table(M: int) -> ArithTable:
    # one sieve (with divisor counts) is kept and reused while it is large enough
    with _lock:
        t = _sieve.get("table")
        if t is None or t.limit < M:
            t = sieve_build(M, divisors=True)
            _sieve["table"] = t
        return t


@lru_cache(maxsize=8)
def _gammas(k_max: int, bits: int, method: str = "hermite"):
    ctx = make_context(bits, mpf(2) ** (24 - bits))
    return tuple(r.value for r in gamma_table(k_max, 1, method, ctx))


def _etas(k_max: int, bits: int):
    g = _gammas(k_max, bits)
    return tuple(gamma_eta_recursion(list(g), make_context(bits + 32, mpf(2) ** (-bits))))


def _to_mp(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


def _quad(f, lo, hi, ctx, domain=Domain.UNIT_INTERVAL, tol=None):
    tol = ctx.tol / 16 if tol is None else tol
    if domain is Domain.UNIT_INTERVAL:
        spec = IntegralSpec(f, domain, tol, bounds=(lo, hi))
    else:
        spec = IntegralSpec(f, domain, tol, bounds=(lo,))
    return integrate(spec, ctx)[0]


def _riesz(M: int, kernel: Callable, start: int = 1) -> float:
    table = _table(M)

    def terms(lo, hi, m):
        return kernel(table, lo, hi, m)

    return float(riesz_mean(M, terms, start=start)[0])


# ---------------------------------------------------------------- slow_conditional runners

def _run_p1k(p, ctx, M):
    k = p["k"]
    g = _gammas(k + 1, ctx.bits)
    e = _etas(k + 1, ctx.bits)
    s = _riesz(M, lambda t, lo, hi, m: (1 - t.lambda_float(lo, hi)) * np.log(m) ** k / m)
    with ctx.workprec():
        left = (-1) ** k * g[k] / mpmath.factorial(k) - e[k]
        right = (-1) ** k * mpf(s) / mpmath.factorial(k)
    return {"laurent": left, "arithmetic": right}


def _run_c1(p, ctx, M):
    s = _riesz(M, lambda t, lo, hi, m: (1 - t.lambda_float(lo, hi)) / m)
    with ctx.workprec():
        return {"2 gamma": 2 * mpmath.euler, "arithmetic": mpf(s)}


def _run_e47(p, ctx, M):
    e = _etas(2, ctx.bits)
    s = _riesz(M, lambda t, lo, hi, m: (1 - t.lambda_float(lo, hi)) * np.log(m) / m)
    with ctx.workprec():
        return {"eta_1": e[1], "arithmetic": mpmath.euler ** 2 / 3 + 2 * mpf(s) / 3}


def log_zeta_constant(ctx: PrecisionContext | None = None):
    """``lim_{s->1} [ln zeta(s) - int_s^inf (zeta(y) - 1) dy]`` from zeta values alone."""
    ctx = ctx or default_context()
    with ctx.workprec():
        near = mpmath.quad(lambda y: mpmath.zeta(y) - 1 - 1 / (y - 1), [1, 2])
        far = mpmath.quad(lambda y: mpmath.zeta(y) - 1, [2, 4, 16, mpmath.inf])
        return -near - far


def _run_c11rem(p, ctx, M):
    def kernel(t, lo, hi, m):
        return (t.lambda_float(lo, hi) - 1) / (m * np.log(m))

    s = _riesz(M, kernel, start=2)
    return {"zeta integral": log_zeta_constant(ctx), "arithmetic": mpf(s)}


def _divisor_kernel(m_pow: int, with_lambda: bool):
    gam = float(mpmath.euler)

    def kernel(t, lo, hi, m):
        x = np.log(m)
        d = t.d[lo:hi].astype(np.float64)
        inner = d - (t.lambda_float(lo, hi) * x if with_lambda else x) - 2 * gam
        return x ** m_pow / m * inner

    return kernel


def _gamma_products(g, m):
    return mpmath.fsum(math.comb(m, l) * g[l] * g[m - l] for l in range(m + 1))


def _run_p4a(p, ctx, M):
    m = p["m"]
    g = _gammas(m + 1, ctx.bits)
    s = _riesz(M, _divisor_kernel(m, False))
    with ctx.workprec():
        right = -(1 + mpf(2) / (m + 1)) * g[m + 1] - 2 * mpmath.euler * g[m] + _gamma_products(g, m)
        return {"stieltjes": right, "divisor sum": mpf(s)}


def _run_p4b_sum(p, ctx, M):
    m = p["m"]
    g = _gammas(m + 1, ctx.bits)
    e = _etas(m + 1, ctx.bits)
    s = _riesz(M, _divisor_kernel(m, True))
    with ctx.workprec():
        right = ((-1) ** m * mpmath.factorial(m + 1) * e[m + 1] - 2 * g[m + 1] / (m + 1)
                 - 2 * mpmath.euler * g[m] + _gamma_products(g, m))
        return {"stieltjes/eta": right, "divisor sum": mpf(s)}


# ---------------------------------------------------------------- fast runners

# the Laurent coefficients decay like 3^-n (the trivial zero at -2 is the nearest singularity)
LAURENT_TERMS = 44


def _run_p1s2(p, ctx, M):
    j = p["j"]
    K = LAURENT_TERMS
    g = _gammas(K, ctx.bits)
    e = _etas(K, ctx.bits)
    with ctx.workprec():
        left = mpf(0)
        for n in range(j, K + 1):
            poch = mpmath.rf(-n, j)
            left += ((-1) ** n * g[n] / mpmath.factorial(n) - e[n]) * poch
        # (-1)^j [zeta^(j)(2) + (zeta'/zeta)^(j)(2)] from mpmath derivatives
        z = [mpmath.zeta(2, derivative=i) for i in range(4)]
        log_deriv = [z[1] / z[0],
                     z[2] / z[0] - (z[1] / z[0]) ** 2,
                     z[3] / z[0] - 3 * z[1] * z[2] / z[0] ** 2 + 2 * (z[1] / z[0]) ** 3]
        right = (-1) ** j * (z[j] + log_deriv[j])
        return {"laurent series": left, "zeta derivatives": right}


def _run_c10(p, ctx, M):
    K = LAURENT_TERMS
    g = _gammas(K, ctx.bits)
    e = _etas(K, ctx.bits)
    with ctx.workprec():
        left = mpmath.fsum(((-1) ** n * g[n] / mpmath.factorial(n) - e[n]) * n for n in range(1, K + 1))
        z0 = zeta_lambda(2, Fraction(1, 2), ctx)
        z1 = zeta_prime_lambda(2, Fraction(1, 2), ctx)
        z2 = mpmath.zeta(2, derivative=2)
        right = z1 + z2 / z0 - (z1 / z0) ** 2
        return {"laurent series": left, "lambda series": right}


def _run_c4p(p, ctx, M):
    g = _gammas(1, ctx.bits)
    with ctx.workprec():
        value = g[0] ** 2 - 2 * g[1]
    return {"gamma^2 - 2 gamma_1": value, "positivity": max(value, mpf(0))}


def _run_p4b(p, ctx, M):
    e = _etas(1, ctx.bits)
    gj = _gammas(1, ctx.bits, "jensen")
    with ctx.workprec():
        return {"eta_1 (Hermite + recursion)": e[1], "gamma^2 + 2 gamma_1 (Jensen)": gj[0] ** 2 + 2 * gj[1]}


def _run_l2(p, ctx, M):
    x, y, lam = (_to_mp(p[k]) for k in ("x", "y", "lam"))
    n = p["n"]
    check_lambda(lam, ctx)
    with ctx.workprec():
        def g(l):
            return [mpmath.log((y + l) / (x + l))]

        (outer,), _, _ = binomial_outer_sum(g, lam, ctx, 1, tol=ctx.tol / 16)
        integral = _quad(lambda u: (u ** (y - 1) - u ** (x - 1)) / (mpmath.log(u) * (1 + u)), 0, 1, ctx)
        alt = alternating_sum(lambda m: mpmath.log((y + m) / (x + m)))
        closed = (log_gamma((y + 1) / 2, ctx) - log_gamma(y / 2, ctx)
                  - log_gamma((x + 1) / 2, ctx) + log_gamma(x / 2, ctx))
        finite = mpmath.fsum((-1 / lam) ** l * math.comb(n, l) * mpmath.log((y + l) / (x + l))
                             for l in range(n + 1))
        finite_q = _quad(lambda u: (u ** (y - 1) - u ** (x - 1)) / mpmath.log(u) * (1 - u / lam) ** n,
                         0, 1, ctx)
        return {
            "double sum": outer,
            "integral": (lam + 1) * integral,
            "alternating sum": (lam + 1) * alt,
            "Gamma form": (lam + 1) * closed,
            # the finite-n pair is shifted onto the same scale so one residual covers both checks
            "finite sum - finite integral": outer + (finite - finite_q),
        }


def _run_c15(p, ctx, M):
    part = p["part"]
    lam = _to_mp(p["lam"])
    with ctx.workprec():
        if part == "a":
            y = lam  # the parameter doubles as y here
            return {"integral": _quad(lambda u: (u ** y - 1) / mpmath.log(u), 0, 1, ctx),
                    "log": mpmath.log(y + 1)}
        if part == "b":
            k = p["k"]
            finite = mpmath.fsum((-1) ** j * math.comb(k, j) * lam ** -j * mpmath.log(j + 1)
                                 for j in range(k + 1))
            c = (1 - 1 / lam) ** k
            integral = _quad(lambda u: ((1 - u / lam) ** k - c) / mpmath.log(u), 0, 1, ctx)
            return {"finite sum": finite, "integral": integral}
        if part == "c":
            check_lambda(lam, ctx)
            (outer,), _, _ = binomial_outer_sum(lambda j: [mpmath.log(j + 1)], lam, ctx, 1,
                                                tol=ctx.tol / 16, growth=0.5)
            return {"double sum": outer, "closed form": (lam + 1) / 2 * mpmath.log(2 / mpmath.pi)}
        integral = _quad(lambda u: (1 - u) / ((1 + u) * mpmath.log(u)), 0, 1, ctx)
        return {"integral": integral, "log(2/pi)": mpmath.log(2 / mpmath.pi)}


def _run_w(p, ctx, M):
    part, lam = p["part"], p["lam"]
    with ctx.workprec():
        if part == "worpitsky":
            n = p["n"]
            b = bernoulli_number(n + 1)
            exact = (-1) ** n * (mpf(b.numerator) / b.denominator) / (n + 1)
            return {"lambda series": zeta_negative_integers(n, lam, ctx), "Bernoulli": exact}
        if part == "zeta0":
            return {"lambda series": zeta_lambda(0, lam, ctx), "-1/2": mpf(-1) / 2}
        return {"lambda series": zeta_prime_at_zero(lam, ctx), "-ln(2 pi)/2": -mpmath.log(2 * mpmath.pi) / 2}


# stopping rule for the accelerated sums: half the fast-class tolerance
LEVIN_TOL = 5e-11


# the binomial series below is shared by the polylog integral and the Beta-function entry
@lru_cache(maxsize=32)
def _polylog_binomial_sum(q: int, m: int, t: Fraction, tol: float, k_max: int = 4000):
    """``sum_{n>=m} (n-m+1)^-q sum_j (-1)^j C(n,j) ln(t+j)`` by Levin-v acceleration.

    The inner sums come from a forward-difference table of ``ln(t+j)``.  The
    outer terms decay like ``n^-(q+t)/ln n``, too slowly for plain summation,
    so ``K`` grows by 3/2 until the transforms at ``K`` and the previous
    stage agree within ``tol``.  Returns ``(value, difference, K)``.
    """
    prev = None
    K = 400
    while True:
        bits = 3 * K + 200
        with mpmath.workprec(bits):
            tt = mpf(t.numerator) / t.denominator
            row = [mpmath.log(tt + j) for j in range(K + m + 1)]
            inner = [row[0]]
            for _ in range(1, K + m):
                row = [row[j] - row[j + 1] for j in range(len(row) - 1)]
                inner.append(row[0])
            terms = [inner[n] / mpf(n - m + 1) ** q for n in range(m, m + K)]
            est = levin_transform(terms, "v")
        if prev is not None and abs(est - prev) < tol:
            return est, abs(est - prev), K
        if K >= k_max:
            raise ConvergenceError(f"polylog binomial series not settled at K = {K}", estimates=(prev, est))
        prev = est
        K = min(k_max, K * 3 // 2)


def _run_p8(p, ctx, M):
    q, m, t = p["q"], p["m"], Fraction(p["t"])
    with ctx.workprec():
        tt = _to_mp(t)

        def f(u):
            return u ** (tt - 1) / mpmath.log(u) * (1 - u) ** (m - 1) * polylog_unit(q, 1 - u, ctx)

        left = _quad(f, 0, 1, ctx)
    right, diff, K = _polylog_binomial_sum(q, m, t, LEVIN_TOL)
    with ctx.workprec():
        return {"integral": left, "binomial series": +right}, {"K": K, "levin_change": float(diff)}


def _run_c8(p, ctx, M):
    m, t = p["m"], Fraction(p["t"])
    right, diff, K = _polylog_binomial_sum(1, m, t, LEVIN_TOL)
    with ctx.workprec():
        tt = _to_mp(t)
        beta = mpmath.exp(log_gamma(tt, ctx) + log_gamma(m, ctx) - log_gamma(tt + m, ctx))
        return {"-B(t,m)": -beta, "binomial series": +right}, {"K": K, "levin_change": float(diff)}


def _run_p9(p, ctx, M):
    case = p["case"]
    with ctx.workprec():
        if case == "li":
            z2, a = _to_mp(p["z2"]), _to_mp(p["a"])
            l2, lz = mpmath.log(2), mpmath.log(z2)
            x_integral = _quad(lambda x: (z2 ** x - 2 ** x) / x, a, 1, ctx)
            u_integral = _quad(lambda u: (1 - u ** (a - 1)) / mpmath.log(u), 2, z2, ctx)
            ei = (expint_ei(lz, ctx) - expint_ei(l2, ctx)
                  - expint_ei(a * lz, ctx) + expint_ei(a * l2, ctx))
            return {"x-integral of B": x_integral, "u-integral": u_integral, "Ei form": ei}
        z1, z2 = (_to_mp(v) for v in p["z"])
        y = p["y"]
        t, a = _to_mp(p["t"]), _to_mp(p["a"])

        def f(u):
            return (u ** (t - 1) - u ** (a - 1)) / mpmath.log(u) * (1 - u) ** (y - 1)

        left = _quad(f, z1, z2, ctx)
        l1, l2 = mpmath.log(z1), mpmath.log(z2)
        right = mpf(0)
        for j in range(y):
            c = (-1) ** j * mpmath.binomial(y - 1, j)
            right += c * (expint_ei((a + j) * l1, ctx) - expint_ei((t + j) * l1, ctx)
                          - expint_ei((a + j) * l2, ctx) + expint_ei((t + j) * l2, ctx))
        return {"integral": left, "Ei sum": right}


def _run_e97(p, ctx, M):
    n, t = p["n"], _to_mp(Fraction(p["t"]))
    with ctx.workprec():
        left = _quad(lambda u: u ** (t - 1) * (1 - u) ** n / mpmath.log(u), 0, 1, ctx)
        right = mpmath.fsum((-1) ** j * math.comb(n, j) * mpmath.log(t + j) for j in range(n + 1))
        return {"integral": left, "binomial log sum": right}


# ---------------------------------------------------------------- exploratory runners

def _run_p5eta(p, ctx, M):
    l = p["l"]
    ref = eta_table(l, "from_gamma", ctx)[l].value
    g = list(_gammas(l + 2, ctx.bits))
    mob = eta_table(l, "mobius", ctx, N=M, gammas=g)[l].value
    return {"eta (Stieltjes)": ref, "eta (Moebius sum)": mob}


def _run_c7(p, ctx, M):
    from .li_sums import s2
    n = p["n"]
    g = list(_gammas(n + 1, ctx.bits))
    return {"S_2 (eta)": s2(n, "from_eta", ctx, gammas=g),
            "S_2 (Moebius sum)": s2(n, "mobius", ctx, gammas=g, trunc_M=M, table=_table(M))}


# ---------------------------------------------------------------- registry

# Residuals of the slow_conditional entries at M = 1e5, 1e6, 1e7 (Riesz order 3,
# 256 bits), produced by scripts/prebuild_slow.py before the tolerances were set.
PREBUILD = {
    "P1.k": {"k=0": (-3.94e-05, -3.78e-06, -4.08e-07),
             "k=1": (-2.93e-07, -2.31e-06, +2.13e-07),
             "k=2": (+4.69e-05, +2.09e-05, -1.28e-06)},
    "C1": {"": (-3.94e-05, -3.78e-06, -4.08e-07)},
    "C11rem": {"": (+1.34e-05, +1.33e-06, +1.35e-07)},
    "E47": {"": (+1.96e-07, +1.54e-06, -1.42e-07)},
    "P4a": {"m=0": (+2.75e-06, +2.75e-07, +2.75e-08),
            "m=1": (-7.97e-07, -7.97e-08, -7.97e-09),
            "m=2": (-2.02e-07, -2.02e-08, -2.02e-09)},
    "P4b.sum": {"m=0": (+3.05e-06, +2.58e-06, -1.86e-07),
                "m=1": (+9.29e-05, +4.17e-05, -2.56e-06),
                "m=2": (+1.18e-03, +5.73e-04, -4.62e-05)},
}


def slow_tol(identity_id: str) -> float:
    """Ten times the worst pre-build residual at ``M <= 10**6``, rounded up to 1, 2 or 5 times a power of ten."""
    worst = 10 * max(max(abs(r[0]), abs(r[1])) for r in PREBUILD[identity_id].values())
    e = math.floor(math.log10(worst))
    for m in (1, 2, 5, 10):
        if m * 10.0 ** e >= worst:
            return m * 10.0 ** e


_F, _S, _X = ConvergenceClass.FAST, ConvergenceClass.SLOW, ConvergenceClass.EXPLORATORY
_HALF = Fraction(1, 2)

_REGISTRY: tuple[IdentitySpec, ...] = (
    IdentitySpec("P1.k", "(-1)^k gamma_k/k! - eta_k = (-1)^k/k! sum_m (1 - Lambda(m)) ln^k m / m",
                 {"k": (0, 1, 2)}, "Hermite gamma_k, eta_k by recursion", "Riesz mean of the arithmetic sum",
                 slow_tol("P1.k"), _S, _run_p1k, 10**6),
    IdentitySpec("P1.s2", "sum_n [(-1)^n gamma_n/n! - eta_n] (-n)_j = sum_k (1 - Lambda(k)) ln^j k / k^2",
                 {"j": (0, 1, 2)}, "Laurent coefficients to n = 44",
                 "zeta and its derivatives at s = 2", 1e-10, _F, _run_p1s2),
    IdentitySpec("C1", "2 gamma = sum_m (1 - Lambda(m)) / m", {}, "Euler constant",
                 "Riesz mean of the arithmetic sum", slow_tol("C1"), _S, _run_c1, 10**6),
    IdentitySpec("C11rem", "sum_{n>=2} (Lambda(n) - 1)/(n ln n) = gamma - C_{1,1}", {},
                 "zeta-function integrals", "Riesz mean of the arithmetic sum", slow_tol("C11rem"), _S, _run_c11rem, 10**6),
    IdentitySpec("E47", "eta_1 = gamma^2/3 + (2/3) sum_m (1 - Lambda(m)) ln m / m", {},
                 "eta_1 by recursion", "Riesz mean of the arithmetic sum", slow_tol("E47"), _S, _run_e47, 10**6),
    IdentitySpec("P4a", "sum_n ln^m n/n [d(n) - ln n - 2 gamma] = -(1 + 2/(m+1)) gamma_{m+1} - 2 gamma gamma_m"
                 " + sum_l C(m,l) gamma_l gamma_{m-l}",
                 {"m": (0, 1, 2)}, "Hermite gamma_k", "Riesz mean of the divisor sum", slow_tol("P4a"), _S, _run_p4a, 10**6),
    IdentitySpec("C4p", "gamma^2 - 2 gamma_1 > 0", {}, "Hermite gamma_0, gamma_1", "zero", 1e-10, _F, _run_c4p),
    IdentitySpec("P4b", "eta_1 = gamma^2 + 2 gamma_1 (the constant side of the Lambda-weighted divisor sum)",
                 {}, "Hermite gamma_k and the eta recursion", "Jensen gamma_k", 1e-10, _F, _run_p4b),
    IdentitySpec("P4b.sum", "sum_n ln^m n/n [d(n) - Lambda(n) ln n - 2 gamma] = (-1)^m (m+1)! eta_{m+1}"
                 " - 2 gamma_{m+1}/(m+1) - 2 gamma gamma_m + sum_l C(m,l) gamma_l gamma_{m-l}",
                 {"m": (0, 1, 2)}, "Hermite gamma_k and the eta recursion", "Riesz mean of the divisor sum",
                 slow_tol("P4b.sum"), _S, _run_p4b_sum, 10**6),
    IdentitySpec("L2", "sum_n r^n sum_l (-1/lam)^l C(n,l) ln((y+l)/(x+l)) = (lam+1) int_0^1"
                 " (u^(y-1) - u^(x-1))/((1+u) ln u) du = (lam+1) sum_m (-1)^m ln((y+m)/(x+m))"
                 " = (lam+1) ln[Gamma((y+1)/2) Gamma(x/2) / (Gamma(y/2) Gamma((x+1)/2))]",
                 {"x": (1, 2, Fraction(3, 2)), "y": (2, Fraction(3, 2), 1), "lam": (_HALF, 1, 2), "n": (3,)},
                 "binomial double sum; finite sum at n", "quadrature, alternating series, log-Gamma",
                 1e-10, _F, _run_l2),
    IdentitySpec("C15", "int_0^1 (u^y - 1)/ln u du = ln(y+1); finite log sums as integrals;"
                 " sum_k r^k sum_j (-1)^j C(k,j) lam^-j ln(j+1) = (lam+1)/2 ln(2/pi)",
                 {"part": ("a", "b", "c", "d"), "lam": (_HALF, 1, 2), "k": (6,)},
                 "quadrature or binomial double sum", "closed forms or finite sums", 1e-10, _F, _run_c15),
    IdentitySpec("P8", "int_0^1 u^(t-1)/ln u (1-u)^(m-1) Li_q(1-u) du"
                 " = sum_{n>=m} (n-m+1)^-q sum_j (-1)^j C(n,j) ln(t+j)",
                 {"q": (1, 2), "m": (1, 2), "t": (1, Fraction(3, 2))},
                 "quadrature", "Levin-accelerated finite binomial sums", 1e-10, _F, _run_p8),
    IdentitySpec("C8", "-B(t,m) = sum_{n>=m} (n-m+1)^-1 sum_j (-1)^j C(n,j) ln(t+j)",
                 {"m": (1, 2), "t": (1, Fraction(3, 2))},
                 "log-Gamma", "Levin-accelerated finite binomial sums", 1e-10, _F, _run_c8),
    IdentitySpec("P9", "int_{z1}^{z2} (u^(t-1) - u^(a-1))/ln u (1-u)^(y-1) du as an Ei sum;"
                 " int_a^1 B(2,z2,x,1) dx = int_2^{z2} (1 - u^(a-1))/ln u du",
                 {"case": ("ei",), "z": ((Fraction(1, 4), _HALF), (_HALF, Fraction(3, 4))), "y": (1, 2, 3),
                  "t": (Fraction(3, 2),), "a": (_HALF,)},
                 "quadrature", "exponential integrals", 1e-10, _F, _run_p9),
    IdentitySpec("E97", "int_0^1 u^(t-1) (1-u)^n / ln u du = sum_j (-1)^j C(n,j) ln(t+j)",
                 {"n": (1, 2, 3, 4, 5, 6), "t": (1, Fraction(3, 2), 2)},
                 "quadrature", "finite binomial log sum", 1e-10, _F, _run_e97),
    IdentitySpec("W", "lambda series: zeta(-n) = (-1)^n B_{n+1}/(n+1), zeta(0) = -1/2,"
                 " zeta'(0) = -ln(2 pi)/2",
                 {"part": ("worpitsky", "zeta0", "zeta_prime0"), "lam": (1, _HALF, 2), "n": (0, 1, 2, 5, 10)},
                 "lambda-parameterized binomial series", "Bernoulli numbers and closed forms",
                 1e-10, _F, _run_w),
    IdentitySpec("C10", "zeta'(s) + (zeta'/zeta)'(s) = sum_n n [(-1)^n gamma_n/n! - eta_n] (s-1)^(n-1) at s = 2",
                 {}, "Laurent coefficients to n = 44", "lambda series for zeta, zeta'", 1e-10, _F, _run_c10),
    IdentitySpec("P5.eta", "eta_l from Moebius-weighted log sums plus Stieltjes constants",
                 {"l": (0, 1)}, "eta from Stieltjes constants", "plain Moebius partial sums",
                 1e-1, _X, _run_p5eta, 10**6),
    IdentitySpec("C7", "S_2(n) from Moebius-weighted Laguerre sums", {"n": (1, 2, 3)},
                 "S_2 from eta", "plain Moebius partial sums", 1e-1, _X, _run_c7, 10**6),
)

# secondary parameter points that the cartesian grid does not express
_EXTRA_POINTS = {
    "P9": [{"case": "li", "z2": z2, "a": a} for z2 in (3, 5) for a in (_HALF, 2)],
}


def list_identities() -> list[IdentitySpec]:
    return list(_REGISTRY)


def get_identity(identity_id: str) -> IdentitySpec:
    for spec in _REGISTRY:
        if spec.id == identity_id:
            return spec
    raise UsageError(f"unknown identity {identity_id!r}")


def parameter_points(spec: IdentitySpec) -> list[dict]:
    points = [p for p in spec.grid() if _valid_point(spec.id, p)]
    return points + _EXTRA_POINTS.get(spec.id, [])


def _valid_point(identity_id: str, p: dict) -> bool:
    if identity_id == "L2":
        return p["x"] != p["y"]
    if identity_id == "C15":
        # lam doubles as y in part (a); part (d) has no parameter
        return p["part"] != "d" or p["lam"] == 1
    if identity_id == "W":
        if p["part"] == "worpitsky":
            return p["lam"] == 1
        return p["n"] == 0
    return True


def _normalize(spec: IdentitySpec, params: dict | None) -> dict:
    if params is None:
        return parameter_points(spec)[0]
    allowed = parameter_points(spec)
    if params not in allowed:
        merged = dict(allowed[0], **params)
        if merged not in allowed:
            raise UsageError(f"parameters {params} outside the declared ranges of {spec.id}")
        params = merged
    return params


def run_identity(identity_id: str, params: dict | None = None, ctx: PrecisionContext | None = None, *,
                 truncation: int | None = None, tol_scale: float = 1.0) -> IdentityReport:
    """Evaluate both sides of one identity at one parameter point."""
    spec = get_identity(identity_id)
    ctx = ctx or default_context()
    params = _normalize(spec, params)
    M = truncation or spec.truncation
    start = time.perf_counter()
    out = spec.runner(params, ctx, M)
    sides, meta = out if isinstance(out, tuple) else (out, {})
    names = list(sides)
    with ctx.workprec():
        ref = sides[names[0]]
        diffs = {n: abs(sides[n] - ref) for n in names[1:]}
        worst = max(diffs, key=lambda n: diffs[n])
        residual = float(sides[worst] - ref)
    tol = spec.tol * tol_scale
    if M is not None:
        meta = dict(meta, truncation=M)
    return IdentityReport(
        id=spec.id, params=params, lhs=ref, rhs=sides[worst], residual=residual, tol=tol,
        passed=abs(residual) <= tol, runtime=time.perf_counter() - start,
        convergence_class=spec.convergence_class.value, sides=dict(sides), meta=meta,
    )


def _run_point(args):
    identity_id, p, ctx, truncation, tol_scale = args
    return run_identity(identity_id, p, ctx, truncation=truncation, tol_scale=tol_scale)


def run_all(convergence_classes=frozenset({"fast"}), ctx: PrecisionContext | None = None, *,
            truncation: int | None = None, tol_scale: float = 1.0,
            workers: int | None = 1) -> list[IdentityReport]:
    """Run every parameter point of every identity in the selected classes.

    Failures are recorded in the reports, not raised.  ``workers > 1`` spreads
    the points over a process pool (``None`` uses every CPU); the report order
    is the registry order either way.
    """
    classes = {ConvergenceClass(c) for c in convergence_classes}
    jobs = [(spec.id, p, ctx, truncation, tol_scale)
            for spec in _REGISTRY if spec.convergence_class in classes
            for p in parameter_points(spec)]
    if workers == 1 or len(jobs) < 2:
        return [_run_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_point, jobs))
