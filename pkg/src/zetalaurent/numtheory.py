"""Arithmetic functions: von Mangoldt, Moebius, divisor counts, strict/exact tau_k.

The sieve stores the von Mangoldt function symbolically as ``(p, k)`` for
``n = p**k`` so that ``ln p`` is evaluated only when a precision is known.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .mpcore import DomainError, PrecisionContext, default_context

MAX_SIEVE_LIMIT = 300_000_000
LINNIK_LIMIT = 10**6


class SieveResourceError(MemoryError):
    """Requested sieve does not fit the configured memory bound."""


@dataclass(frozen=True, eq=False)
class ArithTable:
    """Exact tables of Lambda (as prime/exponent pairs), mu and d for ``n <= limit``.

    ``lam_p[n]`` is the prime ``p`` when ``n = p**lam_k[n]``, else 0.
    Index 0 is unused.
    """

    limit: int
    lam_p: np.ndarray
    lam_k: np.ndarray
    mu: np.ndarray
    d: np.ndarray | None

    def __post_init__(self):
        for arr in (self.lam_p, self.lam_k, self.mu, self.d):
            if arr is not None:
                arr.setflags(write=False)

    def lambda_pair(self, n: int) -> tuple[int, int] | None:
        p = int(self.lam_p[n])
        return (p, int(self.lam_k[n])) if p else None

    def lambda_value(self, n: int, ctx: PrecisionContext | None = None):
        ctx = ctx or default_context()
        p = int(self.lam_p[n])
        with ctx.workprec():
            return mpmath.log(p) if p else mpmath.mpf(0)

    def lambda_float(self, start: int = 1, stop: int | None = None) -> np.ndarray:
        """Float64 values of Lambda(n) for ``start <= n < stop``."""
        stop = self.limit + 1 if stop is None else stop
        p = self.lam_p[start:stop]
        out = np.zeros(p.shape, dtype=np.float64)
        nz = p > 0
        out[nz] = np.log(p[nz].astype(np.float64))
        return out

    def mertens(self, n: int | None = None) -> int:
        n = self.limit if n is None else n
        return int(self.mu[1:n + 1].sum(dtype=np.int64))


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if is_p[p]:
            is_p[p * p::2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def sieve_build(limit: int, ctx: PrecisionContext | None = None, *, divisors: bool = True) -> ArithTable:
    """Sieve Lambda, mu and (optionally) d for all ``n <= limit``."""
    if limit < 2:
        raise DomainError("sieve limit must be >= 2")
    if limit > MAX_SIEVE_LIMIT:
        raise SieveResourceError(f"sieve limit {limit} exceeds memory bound {MAX_SIEVE_LIMIT}")
    n = int(limit)
    primes = primes_upto(n)

    lam_p = np.zeros(n + 1, dtype=np.int64)
    lam_k = np.zeros(n + 1, dtype=np.int8)
    e, base = 1, primes
    while base.size:
        powers = base ** e
        lam_p[powers] = base
        lam_k[powers] = e
        e += 1
        base = base[base <= int(round(n ** (1.0 / e))) + 1]
        base = base[base ** e <= n]

    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    d = np.ones(n + 1, dtype=np.int32) if divisors else None
    rem = np.arange(n + 1, dtype=np.int64)
    for p in primes[primes <= math.isqrt(n)]:
        p = int(p)
        cnt = np.ones((n // p), dtype=np.int64)
        q = p
        while q * p <= n:
            cnt[q - 1::q] += 1
            q *= p
        mu[p::p] *= np.where(cnt == 1, -1, 0).astype(np.int8)
        if d is not None:
            d[p::p] *= (cnt + 1).astype(np.int32)
        rem[p::p] //= p ** cnt
    # what remains is 1 or a single prime factor above sqrt(n)
    big = rem > 1
    mu[big] *= -1
    if d is not None:
        d[big] *= 2
        d[0] = 0
    return ArithTable(n, lam_p, lam_k, mu, d)


# ---------------------------------------------------------------- factorization

def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise DomainError("n must be >= 1")
    out: dict[int, int] = {}
    m = n
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    f = 5
    while f * f <= m:
        for p in (f, f + 2):
            while m % p == 0:
                out[p] = out.get(p, 0) + 1
                m //= p
        f += 6
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """``(p, k)`` when ``n = p**k`` with ``k >= 1``, else None."""
    if n < 2:
        return None
    fac = factorize(n)
    if len(fac) != 1:
        return None
    (p, k), = fac.items()
    return p, k


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisor_count(n: int) -> int:
    return math.prod(e + 1 for e in factorize(n).values())


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


# ---------------------------------------------------------------- tau functions

@lru_cache(maxsize=None)
def tau_strict(k: int, n: int) -> int:
    """Number of ordered factorizations ``n = n_1 ... n_k`` with every ``n_i >= 2``."""
    if k < 0 or n < 1:
        raise DomainError("tau_strict needs k >= 0 and n >= 1")
    if k == 0:
        return 1 if n == 1 else 0
    if n < 2**k:
        return 0
    return sum(tau_strict(k - 1, n // d) for d in divisors(n) if d >= 2)


def tau_exact(k: int, n: int) -> int:
    """Number of ordered factorizations of ``n`` into ``k`` factors ``>= 1``."""
    if k < 0 or n < 1:
        raise DomainError("tau_exact needs k >= 0 and n >= 1")
    if k == 0:
        return 1 if n == 1 else 0
    return math.prod(math.comb(e + k - 1, k - 1) for e in factorize(n).values())


def tau_strict_inclusion_exclusion(k: int, n: int) -> int:
    return sum((-1) ** (k - l) * math.comb(k, l) * tau_exact(l, n) for l in range(k + 1))


# ---------------------------------------------------------------- von Mangoldt

class _LcmRatios:
    """Cached ratios LCM(1..n)/LCM(1..n-1) from exact integer LCMs."""

    def __init__(self):
        self._lock = threading.Lock()
        self._ratios = [1, 1]  # n = 0 (unused), n = 1
        self._lcm = 1

    def ratio(self, n: int) -> int:
        with self._lock:
            while len(self._ratios) <= n:
                m = len(self._ratios)
                new = math.lcm(self._lcm, m)
                self._ratios.append(new // self._lcm)
                self._lcm = new
            return self._ratios[n]


_lcm_ratios = _LcmRatios()


def lcm_ratio(n: int) -> int:
    """``exp(Lambda(n))`` as the exact integer LCM(1..n)/LCM(1..n-1)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return _lcm_ratios.ratio(n)


def linnik_ratio(n: int) -> Fraction:
    """``Lambda(n)/ln n`` from Linnik's identity with strict divisor functions (exact)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if n > LINNIK_LIMIT:
        raise DomainError(f"Linnik's identity is limited to n <= {LINNIK_LIMIT}")
    if n == 1:
        return Fraction(0)
    kmax = n.bit_length() - 1  # floor(log2 n)
    return -sum(Fraction((-1) ** k, k) * tau_strict(k, n) for k in range(1, kmax + 1))


def von_mangoldt(n: int, method: str = "sieve", ctx: PrecisionContext | None = None,
                 table: ArithTable | None = None):
    """Lambda(n) at ``ctx`` precision via ``sieve``, ``lcm`` or ``linnik``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    ctx = ctx or default_context()
    with ctx.workprec():
        if method == "sieve":
            if table is not None and n <= table.limit:
                pk = table.lambda_pair(n)
            else:
                pk = prime_power(n)
            return mpmath.log(pk[0]) if pk else mpmath.mpf(0)
        if method == "lcm":
            return mpmath.log(lcm_ratio(n))
        if method == "linnik":
            r = linnik_ratio(n)
            if r == 0:
                return mpmath.mpf(0)
            return mpmath.mpf(r.numerator) / r.denominator * mpmath.log(n)
    raise DomainError(f"unknown von Mangoldt method {method!r}")


def chebyshev_psi(table: ArithTable, x: int | None = None) -> float:
    x = table.limit if x is None else x
    return math.fsum(table.lambda_float(1, x + 1))
