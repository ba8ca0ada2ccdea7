"""Double-exponential quadrature at arbitrary precision.

Finite intervals use the tanh-sinh map, semi-infinite ones the exp-sinh map.
Each level halves the step and only evaluates the new (odd) nodes; the
result is accepted once two successive levels agree within tolerance.
Vector-valued integrands (sequences) are integrated componentwise on a
shared node set, which is how tables over ``k`` are built in one pass.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import mpmath
from mpmath import mpf

from .mpcore import ConvergenceError, ErrorEstimate, ErrorSource, PrecisionContext, default_context


class Domain(str, enum.Enum):
    BOSE_SEMI_INFINITE = "bose_semi_infinite"      # integrand carries 1/(e^{2 pi y} - 1)
    SECH2_SEMI_INFINITE = "sech2_semi_infinite"    # integrand carries sech^2(pi t / 2) or sech(pi t)
    UNIT_INTERVAL = "unit_interval"                # [0, 1] or explicit finite bounds
    SEMI_INFINITE_PLAIN = "semi_infinite_plain"    # algebraic or slower decay


@dataclass(frozen=True)
class IntegralSpec:
    """What to integrate and how accurately.

    ``tol`` may be a sequence for vector integrands (one absolute tolerance
    per component).  ``bounds`` overrides the default ``[0, 1]`` /
    ``[0, inf)`` range.  With ``complement=True`` finite-interval integrands
    are called as ``f(x, b - x)`` so endpoint behaviour at ``b`` is resolved
    without cancellation.
    """

    integrand: Callable
    domain: Domain
    tol: object
    max_levels: int = 12
    rel_tol: object = 0
    bounds: tuple | None = None
    complement: bool = False

    def __post_init__(self):
        if self.max_levels < 4:
            raise ValueError("max_levels must be >= 4")
        tols = self.tol if isinstance(self.tol, (list, tuple)) else [self.tol]
        if any(not mpf(t) > 0 for t in tols):
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "domain", Domain(self.domain))


@dataclass
class QuadResult:
    value: object
    error: object
    levels: int
    history: list = field(default_factory=list)  # max component change per level
    nodes: int = 0


_FINITE = "ts"
_SEMI = "es"

_node_cache: dict = {}
_node_lock = threading.Lock()


def _node_kind(domain: Domain) -> str:
    return _FINITE if domain is Domain.UNIT_INTERVAL else _SEMI


def _t_cap(kind: str, bits: int) -> float:
    # beyond these |t| the node map leaves the representable/useful range
    if kind == _FINITE:
        return math.asinh(2.0 * bits * math.log(2) / math.pi) + 0.5
    return math.asinh(4.0 * bits * math.log(2) / math.pi)


def _level_nodes(kind: str, level: int, bits: int):
    """Nodes (t, x, xc, w) on the level's new grid points, ordered by increasing |t|."""
    key = (kind, level, bits)
    with _node_lock:
        hit = _node_cache.get(key)
    if hit is not None:
        return hit
    h = mpf(2) ** (-level)
    cap = _t_cap(kind, bits)
    jmax = int(cap * 2**level) + 1
    step = 1 if level == 1 else 2
    start = 0 if level == 1 else 1
    pos, neg = [], []
    with mpmath.workprec(bits + 20):
        half_pi = mpmath.pi / 2
        for j in range(start, jmax + 1, step):
            for sign, bucket in ((1, pos), (-1, neg)):
                if j == 0 and sign < 0:
                    continue
                t = sign * j * h
                sh, ch = mpmath.sinh(t), mpmath.cosh(t)
                if kind == _SEMI:
                    x = mpmath.exp(half_pi * sh)
                    w = half_pi * ch * x
                    xc = None
                else:
                    u = half_pi * sh
                    x = 1 / (1 + mpmath.exp(-2 * u))
                    xc = 1 / (1 + mpmath.exp(2 * u))
                    w = 2 * half_pi * ch * x * xc
                bucket.append((float(t), +x, xc if xc is None else +xc, +w))
    nodes = (tuple(pos), tuple(neg))
    with _node_lock:
        _node_cache[key] = nodes
    return nodes


def _as_list(v):
    if isinstance(v, (list, tuple)):
        return list(v), True
    return [v], False


def _mag(v) -> mpf:
    return abs(v)


def integrate(spec: IntegralSpec, ctx: PrecisionContext | None = None, *, full: bool = False):
    """Integrate ``spec`` at ``ctx`` precision.

    Returns ``(value, ErrorEstimate)``; vector integrands give lists of both.
    With ``full=True`` a :class:`QuadResult` with the per-level history is
    returned instead.  Raises :class:`ConvergenceError` after ``max_levels``.
    """
    ctx = ctx or default_context()
    kind = _node_kind(spec.domain)
    with ctx.workprec():
        lo, hi = _resolve_bounds(spec)
        f = spec.integrand

        def point(x, xc, w):
            if kind == _SEMI:
                return lo + x, w
            span = hi - lo
            return (lo + span * x, span * xc), span * w

        def evaluate(node):
            _, x, xc, w = node
            pt, ww = point(x, xc, w)
            if kind == _FINITE:
                val = f(pt[0], pt[1]) if spec.complement else f(pt[0])
            else:
                val = f(pt)
            return val, ww

        total = None
        vector = False
        ncomp = 1
        tols = None
        rtol = None
        t_lo, t_hi = None, None
        prev = None
        history = []
        nodes_used = 0
        last_two = (None, None)
        for level in range(1, spec.max_levels + 1):
            pos, neg = _level_nodes(kind, level, ctx.bits)
            if level == 1:
                # first pass fixes the truncation window from integrand decay
                val0, w0 = evaluate(pos[0])
                vals0, vector = _as_list(val0)
                ncomp = len(vals0)
                tols, rtol = _tolerances(spec, ncomp)
                thresh = [t * mpf(2) ** -24 for t in tols]
                total = [w0 * v for v in vals0]
                t_hi, nu = _scan_window(pos[1:], evaluate, total, thresh)
                t_lo, nl = _scan_window(neg, evaluate, total, thresh)
                nodes_used += 1 + nu + nl
            else:
                nu = _sum_window(pos, t_hi, evaluate, total)
                nl = _sum_window(neg, t_lo, evaluate, total)
                nodes_used += nu + nl
            h = mpf(2) ** (-level)
            est = [h * s for s in total]
            if prev is not None:
                diffs = [abs(a - b) for a, b in zip(est, prev)]
                history.append(max(diffs))
                ok = all(d <= max(t, r * abs(e)) for d, t, r, e in zip(diffs, tols, rtol, est))
                if ok and level >= 3:
                    errs = [ErrorEstimate(d, ErrorSource.QUADRATURE) for d in diffs]
                    value = est if vector else est[0]
                    err = errs if vector else errs[0]
                    if full:
                        return QuadResult(value, err, level, history, nodes_used)
                    return value, err
            last_two = (prev, est)
            prev = est
        raise ConvergenceError(
            f"quadrature did not converge in {spec.max_levels} levels on {spec.domain.value}",
            estimates=(last_two[0], last_two[1]),
        )


def _tolerances(spec: IntegralSpec, ncomp: int):
    if isinstance(spec.tol, (list, tuple)):
        if len(spec.tol) != ncomp:
            raise ValueError("tolerance vector length does not match integrand output")
        tols = [mpf(t) for t in spec.tol]
    else:
        tols = [mpf(spec.tol)] * ncomp
    if isinstance(spec.rel_tol, (list, tuple)):
        rtol = [mpf(r) for r in spec.rel_tol]
    else:
        rtol = [mpf(spec.rel_tol)] * ncomp
    return tols, rtol


def _scan_window(nodes, evaluate, sums, thresh):
    """Accumulate nodes outward until two consecutive terms fall below ``thresh``."""
    quiet = 0
    last_t = 0.0
    used = 0
    for node in nodes:
        val, w = evaluate(node)
        vals, _ = _as_list(val)
        used += 1
        small = True
        for i, v in enumerate(vals):
            term = w * v
            sums[i] += term
            if _mag(term) > thresh[i]:
                small = False
        last_t = node[0]
        quiet = quiet + 1 if small else 0
        if quiet >= 2 and abs(last_t) >= 1:
            break
    return last_t, used


def _sum_window(nodes, t_edge, evaluate, sums):
    used = 0
    limit = abs(t_edge)
    for node in nodes:
        if abs(node[0]) > limit:
            break
        val, w = evaluate(node)
        vals, _ = _as_list(val)
        for i, v in enumerate(vals):
            sums[i] += w * v
        used += 1
    return used


def _resolve_bounds(spec: IntegralSpec):
    if spec.domain is Domain.UNIT_INTERVAL:
        lo, hi = spec.bounds if spec.bounds is not None else (0, 1)
        return mpf(lo), mpf(hi)
    lo = spec.bounds[0] if spec.bounds is not None else 0
    return mpf(lo), mpmath.inf


def quad_value(f: Callable, domain, ctx: PrecisionContext | None = None, tol=None, **kw):
    """Convenience wrapper returning only the value."""
    ctx = ctx or default_context()
    spec = IntegralSpec(f, Domain(domain), ctx.tol if tol is None else tol, **kw)
    return integrate(spec, ctx)[0]
