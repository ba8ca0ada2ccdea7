"""Multiprecision numeric contract shared by every module.

All numerics run on :mod:`mpmath` values (``mpf`` for reals, ``mpc`` for
complex numbers).  A :class:`PrecisionContext` fixes the working precision
in bits and the target absolute tolerance; functions enter it with
``with ctx.workprec():`` so that the global mpmath precision is restored on
exit.  Complex logarithms and powers use mpmath's principal branch
(argument in ``(-pi, pi]``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Union

import mpmath
from mpmath import mpc, mpf

MIN_BITS = 64
GUARD_BITS = 16

Real = Union[int, float, str, mpf]
Number = Union[int, float, complex, str, mpf, mpc]


class ZetaLaurentError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ZetaLaurentError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UsageError(ZetaLaurentError, ValueError):
    """Incompatible options (e.g. a method that does not support a parameter)."""


class ConvergenceError(ZetaLaurentError, ArithmeticError):
    """An iterative or adaptive procedure failed to reach its tolerance.

    ``estimates`` carries the last two approximations that were compared.
    """

    def __init__(self, message: str, estimates: tuple = ()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class PrecisionError(ZetaLaurentError, ArithmeticError):
    """The working precision cannot resolve the requested quantity."""

    def __init__(self, message: str, required_bits: int):
        super().__init__(f"{message} (requires at least {required_bits} bits)")
        self.required_bits = required_bits


@dataclass(frozen=True)
class GuardPolicy:
    """Maps a cancellation estimate (largest term / expected result) to extra bits."""

    fixed_bits: int = GUARD_BITS
    bits_per_bit: float = 1.0

    def extra_bits(self, magnitude_ratio) -> int:
        r = mpmath.mpf(magnitude_ratio)
        log2_ratio = float(mpmath.log(r, 2)) if r > 1 else 0.0
        return int(math.ceil(self.bits_per_bit * log2_ratio)) + self.fixed_bits


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (``bits``) plus target absolute tolerance (``tol``)."""

    bits: int
    tol: mpf
    guard_policy: GuardPolicy = field(default_factory=GuardPolicy)

    def workprec(self):
        return mpmath.workprec(self.bits)

    @property
    def dps(self) -> int:
        return mpmath.libmp.prec_to_dps(self.bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return replace(self, bits=int(bits))

    def with_tol(self, tol: Real) -> "PrecisionContext":
        return make_context(self.bits, tol, self.guard_policy)

    def eps(self) -> mpf:
        return mpf(2) ** (1 - self.bits)

    def __repr__(self) -> str:
        return f"PrecisionContext(bits={self.bits}, tol={mpmath.nstr(self.tol, 3)})"


def make_context(bits: int, tol: Real, guard_policy: GuardPolicy | None = None) -> PrecisionContext:
    """Build a context; rejects ``bits < 64`` and tolerances not representable at ``bits``."""
    if int(bits) != bits or bits < MIN_BITS:
        raise DomainError(f"precision must be an integer >= {MIN_BITS} bits, got {bits!r}")
    bits = int(bits)
    with mpmath.workprec(bits):
        t = mpf(tol)
        if not t > 0:
            raise DomainError(f"tolerance must be positive, got {tol!r}")
        if t <= mpf(2) ** (-bits):
            raise DomainError(f"tolerance {tol!r} is below the resolution of {bits} bits")
    return PrecisionContext(bits, t, guard_policy or GuardPolicy())


def cancellation_guard(ctx: PrecisionContext, magnitude_ratio) -> PrecisionContext:
    """Return ``ctx`` widened by ``ceil(log2(magnitude_ratio)) + 16`` bits (never narrowed)."""
    return ctx.with_bits(ctx.bits + ctx.guard_policy.extra_bits(magnitude_ratio))


def default_context() -> PrecisionContext:
    return make_context(256, mpf("1e-20"))


class ErrorSource(str, enum.Enum):
    TRUNCATION = "truncation"
    QUADRATURE = "quadrature"
    CANCELLATION = "cancellation"
    MODEL = "model"


@dataclass(frozen=True)
class ErrorEstimate:
    absolute: mpf
    source: ErrorSource

    def __post_init__(self):
        if self.absolute < 0:
            raise ValueError("error estimate must be nonnegative")

    def __add__(self, other: "ErrorEstimate") -> "ErrorEstimate":
        # the combined estimate is labelled by its dominant contribution
        src = self.source if self.absolute >= other.absolute else other.source
        return ErrorEstimate(self.absolute + other.absolute, src)

    def scaled(self, factor) -> "ErrorEstimate":
        return ErrorEstimate(abs(mpf(factor)) * self.absolute, self.source)

    @classmethod
    def zero(cls, source: ErrorSource = ErrorSource.TRUNCATION) -> "ErrorEstimate":
        return cls(mpf(0), source)


def to_mpf(x: Real) -> mpf:
    return x if isinstance(x, mpf) else mpf(x)


def to_mpc(x: Number) -> mpc:
    if isinstance(x, mpc):
        return x
    if isinstance(x, str):
        return parse_complex(x)
    return mpc(x)


def parse_complex(text: str) -> mpc:
    """Parse ``"re,im"`` (or a bare real) at the current precision."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return mpc(mpf(parts[0]), 0)
    if len(parts) != 2:
        raise UsageError(f"cannot parse complex value {text!r}; expected 're,im'")
    return mpc(mpf(parts[0]), mpf(parts[1]))


def decimal_digits(bits: int) -> int:
    return max(bits // 3, 20)


def to_decimal(x: Real, ctx: PrecisionContext) -> str:
    """Decimal string with ``bits/3`` significant digits (round-trips at ``ctx.bits``)."""
    with ctx.workprec():
        s = mpmath.nstr(mpf(x), decimal_digits(ctx.bits), strip_zeros=False,
                        min_fixed=-1, max_fixed=1)
    if "." not in s and s not in ("+inf", "-inf", "nan"):
        mant, _, exp = s.partition("e")
        s = mant + ".0" + ("e" + exp if exp else "")
    return s


def from_decimal(text: str, ctx: PrecisionContext) -> mpf:
    with ctx.workprec():
        return mpf(text)


def serialize(x: Number, ctx: PrecisionContext) -> dict:
    """JSON-ready form of a real or complex value with its precision metadata."""
    if isinstance(x, mpc) or isinstance(x, complex):
        z = to_mpc(x)
        return {"re": to_decimal(z.real, ctx), "im": to_decimal(z.imag, ctx), "bits": ctx.bits}
    return {"value": to_decimal(x, ctx), "bits": ctx.bits}


def deserialize(data: dict, ctx: PrecisionContext | None = None) -> Number:
    bits = int(data.get("bits", 256))
    c = ctx or make_context(max(bits, MIN_BITS), mpf(2) ** (8 - max(bits, MIN_BITS)))
    with c.workprec():
        if "value" in data:
            return mpf(data["value"])
        return mpc(mpf(data["re"]), mpf(data["im"]))


def ulp(x: mpf, bits: int) -> mpf:
    if x == 0:
        return mpf(2) ** (-bits)
    return mpf(2) ** (int(mpmath.floor(mpmath.log(abs(x), 2))) + 1 - bits)
