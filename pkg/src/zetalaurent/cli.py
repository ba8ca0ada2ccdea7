"""Command-line front end.

Subcommands: ``gamma``, ``eta``, ``s2``, ``zeta``, ``identities``, ``bench``
and ``cache``.  Every command prints one table as ``json``, ``csv`` or
``plain`` text.  Exit status is 0 on success, 1 when a computation fails or
an identity misses its tolerance, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from . import __version__
from .cache import CacheFile, CacheWriter, cached_gamma_table, default_path, write_cache
from .mpcore import (
    ConvergenceError,
    DomainError,
    PrecisionError,
    UsageError,
    ZetaLaurentError,
    make_context,
    parse_complex,
    to_decimal,
)

FORMATS = ("json", "csv", "plain")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class OutputTable:
    columns: list[tuple[str, str]]          # (name, unit); unit "" when dimensionless
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def render(self, fmt: str) -> str:
        names = [c[0] for c in self.columns]
        if fmt == "json":
            doc = {"meta": self.meta, "columns": [{"name": n, "unit": u} for n, u in self.columns],
                   "rows": [dict(zip(names, r)) for r in self.rows]}
            return json.dumps(doc, indent=1) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
            w.writerow(names)
            w.writerows([[_plain(v) for v in r] for r in self.rows])
            return buf.getvalue()
        cells = [names] + [[_plain(v) for v in r] for r in self.rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(names))]
        return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in cells)


def _plain(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse {text!r} as a rational number") from None


def _fraction_list(text: str) -> list[Fraction]:
    return [_fraction(t) for t in text.split(",") if t.strip()]


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = int(float(text))
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _ctx(args):
    return make_context(args.bits, mpf(args.tol))


def _meta(args, ctx) -> dict:
    return {"bits": ctx.bits, "tol": str(args.tol), "version": __version__}


def _dec(x, ctx) -> str:
    return to_decimal(x, ctx)


def _err(x) -> str:
    return mpmath.nstr(mpf(x), 3)


# ---------------------------------------------------------------- commands

def cmd_gamma(args) -> tuple[OutputTable, int]:
    from .stieltjes import GAMMA_METHODS, gamma_table

    ctx = _ctx(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in GAMMA_METHODS]
    if bad or not methods:
        raise UsageError(f"unknown method(s) {bad}; choose from {', '.join(GAMMA_METHODS)}")
    ref = args.reference or methods[0]
    a = _fraction(args.a)
    if a <= 0:
        raise UsageError("the shift a must be positive")
    results = {}
    for m in dict.fromkeys(methods + [ref]):
        if args.cache and m == "hermite":
            results[m] = cached_gamma_table(args.kmax, a, m, ctx, CacheWriter(args.cache_file))[0]
        else:
            results[m] = [(r.value, r.err.absolute) for r in gamma_table(args.kmax, a, m, ctx)]
    table = OutputTable([("k", ""), ("method", ""), ("value", ""), ("err", "abs"), ("agrees", "")],
                        meta=_meta(args, ctx) | {"a": str(a), "reference": ref, "agree_tol": args.agree_tol})
    ok = True
    with ctx.workprec():
        for m in methods:
            for k in range(args.kmax + 1):
                v, e = results[m][k]
                agrees = bool(abs(v - results[ref][k][0]) <= mpf(args.agree_tol))
                ok &= agrees
                table.add(k, m, _dec(v, ctx), _err(e), agrees)
    return table, EXIT_OK if ok else EXIT_FAIL


def cmd_eta(args) -> tuple[OutputTable, int]:
    from .stieltjes import eta_table

    ctx = _ctx(args)
    params = {"N": args.N} if args.N else {}
    res = eta_table(args.kmax, args.method, ctx, **params)
    table = OutputTable([("k", ""), ("method", ""), ("value", ""), ("err", "abs")], meta=_meta(args, ctx))
    for r in res:
        table.add(r.k, args.method, _dec(r.value, ctx), _err(r.err.absolute))
    return table, EXIT_OK


def cmd_s2(args) -> tuple[OutputTable, int]:
    from .li_sums import li_sum_table

    ctx = _ctx(args)
    recs = li_sum_table(args.nmax, args.trunc, ctx)
    cols = [("n", ""), ("s2", ""), ("s_gamma", ""), ("s_lambda", ""), ("s2_lambda_osc", ""),
            ("trunc_M", ""), ("residual", "abs"), ("tail_model", "abs")]
    table = OutputTable(cols, meta=_meta(args, ctx))
    for r in recs:
        # the arithmetic part is a double-precision sum
        table.add(r.n, _dec(r.s2, ctx), _dec(r.s_gamma, ctx), mpmath.nstr(r.s_lambda, 17),
                  mpmath.nstr(r.s2_lambda_osc, 17), r.trunc_M, _err(r.decomposition_residual), _err(r.tail_model))
    return table, EXIT_OK


def cmd_zeta(args) -> tuple[OutputTable, int]:
    from .zeta_series import hurwitz_lambda, zeta_lambda

    ctx = _ctx(args)
    lam = _fraction(args.lam)
    with ctx.workprec():
        s = parse_complex(args.s)
        if s.imag == 0:
            s = s.real
    if args.a is None:
        value = zeta_lambda(s, lam, ctx)
    else:
        value = hurwitz_lambda(s, _fraction(args.a), lam, ctx)
    table = OutputTable([("s", ""), ("a", ""), ("lambda", ""), ("re", ""), ("im", "")], meta=_meta(args, ctx))
    with ctx.workprec():
        z = mpmath.mpc(value)
        table.add(args.s, args.a or "1", str(lam), _dec(z.real, ctx), _dec(z.imag, ctx))
    return table, EXIT_OK


def cmd_identities(args) -> tuple[OutputTable, int]:
    from .identities import ConvergenceClass, run_all

    ctx = _ctx(args)
    classes = [c.strip() for c in args.classes.split(",") if c.strip()]
    valid = [c.value for c in ConvergenceClass]
    if any(c not in valid for c in classes):
        raise UsageError(f"classes must be among {', '.join(valid)}")
    reports = run_all(set(classes), ctx, truncation=args.truncation, tol_scale=args.tol_scale,
                      workers=args.workers)
    table = OutputTable([("id", ""), ("class", ""), ("params", ""), ("lhs", ""), ("rhs", ""),
                         ("residual", "abs"), ("tol", "abs"), ("pass", ""), ("truncation", "")],
                        meta=_meta(args, ctx))
    for r in reports:
        params = json.dumps({k: str(v) for k, v in r.params.items()}, sort_keys=True)
        table.add(r.id, r.convergence_class, params, _dec(r.lhs, ctx), _dec(r.rhs, ctx),
                  _err(abs(r.residual)), _err(r.tol), r.passed, r.meta.get("truncation"))
    gated = [r for r in reports if r.convergence_class != ConvergenceClass.EXPLORATORY.value]
    return table, EXIT_OK if all(r.passed for r in gated) else EXIT_FAIL


def cmd_bench(args) -> tuple[OutputTable, int]:
    from .stieltjes import gamma_table
    from .zeta_series import lambda_envelope

    ctx = _ctx(args)
    table = OutputTable([("lambda", ""), ("k", ""), ("terms", "outer sum"), ("envelope", "rate"),
                         ("value", ""), ("err", "abs")], meta=_meta(args, ctx))
    for lam in _fraction_list(args.lam):
        res = gamma_table(args.k, 1, "amore", ctx, k_min=args.k, lam=lam)[0]
        table.add(str(lam), args.k, res.meta["terms"], f"{lambda_envelope(lam):.6f}",
                  _dec(res.value, ctx), _err(res.err.absolute))
    return table, EXIT_OK


def cmd_cache(args) -> tuple[OutputTable, int]:
    from .cache import read_cache

    path = args.cache_file or default_path()
    ctx = _ctx(args)
    if args.action == "clear":
        write_cache(path, CacheFile())
    elif args.action == "fill":
        cached_gamma_table(args.kmax, _fraction(args.a), "hermite", ctx, CacheWriter(path))
    cache = read_cache(path)
    table = OutputTable([("kind", ""), ("k", ""), ("a", ""), ("method", ""), ("bits", ""),
                         ("value", ""), ("err", "abs")],
                        meta=_meta(args, ctx) | {"path": str(path), "cache_version": cache.version})
    for e in cache.sorted_entries():
        table.add(e.kind, e.k, e.a, e.method, e.bits, e.value, e.err)
    return table, EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bits", type=int, default=256, help="working precision in bits")
    common.add_argument("--tol", default="1e-20", help="target absolute tolerance")
    common.add_argument("--format", choices=FORMATS, default="plain")
    common.add_argument("--cache-file", default=None, help="cache path (default from STIELTJES_CACHE_DIR)")

    p = argparse.ArgumentParser(prog="zetalaurent", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", parents=[common], help="Stieltjes constants gamma_k(a)")
    g.add_argument("--kmax", type=_nonneg, required=True)
    g.add_argument("--a", default="1")
    g.add_argument("--methods", default="hermite", help="comma-separated method names")
    g.add_argument("--reference", default=None, help="method the others are compared with")
    g.add_argument("--agree-tol", type=float, default=1e-12)
    g.add_argument("--cache", action="store_true", help="serve hermite values from the cache")
    g.set_defaults(func=cmd_gamma)

    e = sub.add_parser("eta", parents=[common], help="eta_k coefficients")
    e.add_argument("--kmax", type=_nonneg, required=True)
    e.add_argument("--method", default="from_gamma", choices=("from_gamma", "limit", "mobius"))
    e.add_argument("--N", type=_positive, default=None, help="truncation for the arithmetic methods")
    e.set_defaults(func=cmd_eta)

    s = sub.add_parser("s2", parents=[common], help="Li-criterion sums S_2(n) and their decomposition")
    s.add_argument("--nmax", type=_positive, required=True)
    s.add_argument("--trunc", type=_positive, default=10**6, help="arithmetic truncation M")
    s.set_defaults(func=cmd_s2)

    z = sub.add_parser("zeta", parents=[common], help="zeta(s) or zeta(s, a) from the lambda series")
    z.add_argument("--s", required=True, help="'re,im' or a real number")
    z.add_argument("--a", default=None, help="Hurwitz shift (needs Re s > 1)")
    z.add_argument("--lambda", dest="lam", default="1/2")
    z.set_defaults(func=cmd_zeta)

    i = sub.add_parser("identities", parents=[common], help="run the identity registry")
    i.add_argument("--classes", default="fast")
    i.add_argument("--tol-scale", type=float, default=1.0)
    i.add_argument("--truncation", type=_positive, default=None)
    i.add_argument("--workers", type=int, default=1, help="process pool size (0 for every CPU)")
    i.set_defaults(func=cmd_identities)

    b = sub.add_parser("bench", parents=[common], help="outer-sum terms of the lambda series per lambda")
    b.add_argument("--lambda", dest="lam", default="1/2,1")
    b.add_argument("--k", type=_nonneg, default=1)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("cache", parents=[common], help="inspect or manage the constants cache")
    c.add_argument("action", choices=("show", "clear", "fill"))
    c.add_argument("--kmax", type=_nonneg, default=20)
    c.add_argument("--a", default="1")
    c.set_defaults(func=cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "workers", 1) == 0:
        args.workers = None
    try:
        table, code = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, ConvergenceError, ZetaLaurentError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(table.render(args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
