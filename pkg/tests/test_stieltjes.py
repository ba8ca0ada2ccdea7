from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from zetalaurent.mpcore import DomainError, UsageError, make_context
from zetalaurent.specfun import digamma
from zetalaurent.stieltjes import (
    eta_gamma_recursion,
    eta_table,
    gamma_eta_recursion,
    gamma_stieltjes,
    gamma_table,
)

HALF = Fraction(1, 2)


def oracle(k, a=1):
    # mpmath's own Stieltjes routine (Euler-Maclaurin based) at 400 bits
    with mpmath.workprec(400):
        if isinstance(a, Fraction):
            a = mpf(a.numerator) / a.denominator
        return mpmath.stieltjes(k, a)


@pytest.fixture(scope="module")
def tables():
    ctx = make_context(256, mpf("1e-20"))
    return {m: gamma_table(10, 1, m, ctx) for m in ("hermite", "abel_plana", "jensen")}


def test_examples(ctx256):
    with ctx256.workprec():
        assert abs(gamma_stieltjes(0, 1, "hermite", ctx256).value - mpmath.euler) < mpf("1e-20")
        assert abs(gamma_stieltjes(0, 2, "jensen", ctx256).value - (mpmath.euler - 1)) < mpf("1e-20")
        assert abs(gamma_stieltjes(0, 1, "amore", ctx256, lam=1).value - mpmath.euler) < mpf("1e-20")
        v = gamma_stieltjes(1, 1, "limit", ctx256, N=10**4).value
        assert abs(v - mpf("-0.0728158454836767")) < mpf("1e-15")


@pytest.mark.slow
def test_limit_example_at_one_million(ctx256):
    v = gamma_stieltjes(1, 1, "limit", ctx256, N=10**6).value
    assert abs(v - oracle(1)) < mpf("1e-20")


@pytest.mark.parametrize("method", ["hermite", "abel_plana", "jensen"])
def test_against_oracle(method, tables):
    for r in tables[method]:
        assert abs(r.value - oracle(r.k)) <= max(r.err.absolute, mpf("1e-20"))


def test_cross_method_within_combined_error(tables):
    for k in range(11):
        h = tables["hermite"][k]
        for m in ("abel_plana", "jensen"):
            o = tables[m][k]
            assert abs(h.value - o.value) <= h.err.absolute + o.err.absolute + mpf("1e-60")


def test_amore_half_matches_hermite(tables, ctx256):
    am = gamma_table(5, 1, "amore", ctx256, lam=HALF)
    for r in am:
        h = tables["hermite"][r.k]
        assert abs(r.value - h.value) <= r.err.absolute + h.err.absolute


@pytest.mark.parametrize("a", [HALF, 1, 2, Fraction(7, 2)])
def test_gamma0_is_minus_digamma(a, ctx256):
    methods = ["hermite", "abel_plana", "limit"]
    if a > HALF:
        methods.append("jensen")
    if a == 1:
        methods += ["amore", "trigamma"]
    with ctx256.workprec():
        target = -digamma(mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else a, ctx256)
        for m in methods:
            v = gamma_stieltjes(0, a, m, ctx256).value
            tol = mpf("1e-8") if m == "trigamma" else mpf("1e-12")
            assert abs(v - target) < tol, m


def test_trigamma_route(ctx256):
    for r in gamma_table(2, 1, "trigamma", ctx256):
        assert abs(r.value - oracle(r.k)) < mpf("1e-8")


def test_limit_consistency(ctx256):
    # N and 2N differ by less than the O(N^-(2-eps)) model
    for k in (0, 1, 2):
        N = 200
        a = gamma_stieltjes(k, 1, "limit", ctx256, N=N, em_order=0).value
        b = gamma_stieltjes(k, 1, "limit", ctx256, N=2 * N, em_order=0).value
        assert abs(a - b) < mpf(N) ** mpf(-1.9)


def test_abel_plana_shift_independence(ctx256):
    vals = [gamma_table(4, 1, "abel_plana", ctx256, n=n) for n in (5, 10, 20)]
    for k in range(5):
        assert abs(vals[0][k].value - vals[1][k].value) < mpf("1e-20")
        assert abs(vals[1][k].value - vals[2][k].value) < mpf("1e-20")


@settings(max_examples=8, deadline=None)
@given(st.floats(0.6, 6))
def test_shifted_constants_against_oracle(a):
    ctx = make_context(256, mpf("1e-20"))
    for r in gamma_table(3, a, "hermite", ctx):
        with mpmath.workprec(400):
            assert abs(r.value - mpmath.stieltjes(r.k, mpf(a))) < mpf("1e-18")


def test_usage_errors(ctx256):
    with pytest.raises(UsageError):
        gamma_stieltjes(1, 2, "amore", ctx256)
    with pytest.raises(UsageError):
        gamma_stieltjes(1, mpf(0.4), "jensen", ctx256)
    with pytest.raises(UsageError):
        gamma_stieltjes(1, -1, "hermite", ctx256)
    with pytest.raises(UsageError):
        gamma_stieltjes(1, 1, "nonsense", ctx256)
    with pytest.raises(DomainError):
        gamma_stieltjes(-1, 1, "hermite", ctx256)


def test_eta_examples(ctx256):
    g = [r.value for r in gamma_table(2, 1, "hermite", ctx256)]
    with ctx256.workprec():
        e = gamma_eta_recursion(g[:1], ctx256)
        assert e[0] == -g[0]
        e = gamma_eta_recursion(g[:2], ctx256)
        assert abs(e[1] - (g[0] ** 2 + 2 * g[1])) < mpf(2) ** -250
        assert abs(eta_table(0, "from_gamma", ctx256)[0].value + mpmath.euler) < mpf("1e-20")
    mob = eta_table(0, "mobius", ctx256, N=10**6)[0]
    assert abs(mob.value + mpmath.euler) < 0.05
    assert mob.meta["exploratory"]


def test_eta_limit_loose(ctx256):
    ref = eta_table(2, "from_gamma", ctx256)
    lim = eta_table(2, "limit", ctx256)
    for a, b in zip(ref, lim):
        assert abs(a.value - b.value) < 1e-2


def test_eta_against_log_derivative_oracle(ctx256):
    # -zeta'/zeta(1+u) - 1/u = sum eta_p u^p, compared at a small offset u
    ref = eta_table(4, "from_gamma", ctx256)
    with mpmath.workprec(400):
        f = lambda u: -mpmath.zeta(1 + u, derivative=1) / mpmath.zeta(1 + u) - 1 / u
        u = mpf("0.01")
        series = mpmath.fsum(r.value * u ** r.k for r in ref)
        assert abs(series - f(u)) < mpf("1e-11")


@pytest.mark.parametrize("K", [10, 15])
def test_round_trip(K, ctx256):
    g = [r.value for r in gamma_table(K, 1, "hermite", ctx256)]
    back = eta_gamma_recursion(gamma_eta_recursion(g, ctx256), ctx256)
    for x, y in zip(g, back):
        assert abs(x - y) < mpf("1e-20")
