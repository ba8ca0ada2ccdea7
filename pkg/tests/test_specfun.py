import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from zetalaurent.mpcore import DomainError, make_context
from zetalaurent.specfun import (
    bernoulli_number,
    bernoulli_poly,
    beta_generalized,
    digamma,
    expint_ei,
    log_gamma,
    periodized_bernoulli,
    polylog_unit,
    trigamma,
)

TOL = mpf("1e-20")


def euler_gamma_oracle(N=1000, terms=12):
    # H_N - ln N - 1/(2N) + sum B_2k/(2k N^2k)
    with mpmath.workprec(320):
        h = mpmath.fsum(mpf(1) / n for n in range(1, N + 1))
        s = h - mpmath.log(N) - mpf(1) / (2 * N)
        for k in range(1, terms + 1):
            s += mpmath.bernoulli(2 * k) / (2 * k * mpf(N) ** (2 * k))
        return s


def ei_series_oracle(x):
    with mpmath.workprec(320):
        x = mpf(x)
        s, term, k = mpf(0), mpf(1), 1
        while True:
            term *= x / k
            add = term / k
            s += add
            if abs(add) < mpf(10) ** -80:
                break
            k += 1
        return euler_gamma_oracle() + mpmath.log(abs(x)) + s


def test_digamma_values(ctx256):
    g = euler_gamma_oracle()
    with ctx256.workprec():
        assert abs(digamma(1, ctx256) + g) < TOL
        assert abs(digamma(mpf(1) / 2, ctx256) + g + 2 * mpmath.log(2)) < TOL
        assert abs(trigamma(1, ctx256) - mpmath.pi ** 2 / 6) < TOL


@pytest.mark.parametrize("fn", [digamma, trigamma, log_gamma])
@pytest.mark.parametrize("z", [0, -1, -7])
def test_poles(fn, z, ctx256):
    with pytest.raises(DomainError):
        fn(z, ctx256)


@settings(max_examples=20)
@given(st.floats(0.01, 0.99))
def test_reflection(x):
    with mpmath.workprec(256):
        x = mpf(x)
        lhs = digamma(1 - x) - digamma(x)
        assert abs(lhs - mpmath.pi * mpmath.cot(mpmath.pi * x)) < mpf(10) ** -20 * (1 + abs(lhs))


def test_log_gamma_principal_branch(ctx256):
    with ctx256.workprec():
        z = mpmath.mpc(-2.5, 0.1)
        v = log_gamma(z, ctx256)
        assert abs(mpmath.exp(v) - mpmath.gamma(z)) < mpf(10) ** -60


@pytest.mark.parametrize("args,expected", [((0, 1, 1, 1), 1), ((0, 1, 2, 3), Fraction(1, 12)),
                                           ((0, Fraction(1, 2), 1, 1), Fraction(1, 2))])
def test_beta_examples(args, expected, ctx256):
    args = [mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else a for a in args]
    with ctx256.workprec():
        exp = mpf(expected.numerator) / expected.denominator if isinstance(expected, Fraction) else mpf(expected)
        assert abs(beta_generalized(*args, ctx=ctx256) - exp) < TOL


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.2, 5))
def test_beta_symmetry(x, y):
    with mpmath.workprec(256):
        a = beta_generalized(0, 1, x, y)
        b = beta_generalized(0, 1, y, x)
        exact = mpmath.gamma(x) * mpmath.gamma(y) / mpmath.gamma(mpf(x) + y)
        assert abs(a - b) < mpf(10) ** -20 and abs(a - exact) < mpf(10) ** -20


def test_beta_domain():
    with pytest.raises(DomainError):
        beta_generalized(0.5, 0.25, 1, 1)


@pytest.mark.parametrize("x", [1, -1, 0.3, -7.5, 25, 39.9, 45, 80, -50])
def test_ei_against_series(x, ctx256):
    with ctx256.workprec():
        v = expint_ei(mpf(x), ctx256)
        ref = ei_series_oracle(x)
        assert abs(v - ref) <= TOL * max(1, abs(ref))


@pytest.mark.parametrize("bits", [64, 128, 256])
@pytest.mark.parametrize("x", [10, 60, 200, 400, -30, -300])
def test_ei_both_branches_against_mpmath(x, bits):
    # at 64 bits x = 60 and beyond take the asymptotic branch
    ctx = make_context(bits, mpf(2) ** (12 - bits))
    v = expint_ei(x, ctx)
    with mpmath.workprec(bits + 64):
        ref = mpmath.ei(x)
        assert abs(v - ref) <= ctx.tol * abs(ref)


def test_ei_examples(ctx256):
    assert float(expint_ei(1, ctx256)) == pytest.approx(1.8951178163559368, abs=1e-15)
    assert float(expint_ei(-1, ctx256)) == pytest.approx(-0.21938393439552028, abs=1e-15)
    with pytest.raises(DomainError):
        expint_ei(0, ctx256)


def test_polylog(ctx256):
    with ctx256.workprec():
        assert abs(polylog_unit(1, mpf(1) / 2, ctx256) - mpmath.log(2)) < TOL
        assert abs(polylog_unit(2, 1, ctx256) - mpmath.pi ** 2 / 6) < TOL
        assert polylog_unit(3, 0, ctx256) == 0
        direct = mpmath.fsum(mpf(0.7) ** k / mpf(k) ** 2.5 for k in range(1, 400))
        assert abs(polylog_unit(2.5, mpf(0.7), ctx256) - direct) < TOL
    with pytest.raises(DomainError):
        polylog_unit(1, 1, ctx256)


def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert all(bernoulli_number(2 * m + 1) == 0 for m in range(1, 20))


@pytest.mark.parametrize("n", range(1, 31))
def test_von_staudt_clausen(n):
    den = math.prod(p for p in range(2, 2 * n + 2)
                    if all(p % q for q in range(2, int(p ** 0.5) + 1)) and (2 * n) % (p - 1) == 0)
    assert bernoulli_number(2 * n).denominator == den


def test_bernoulli_poly_reflection(ctx256):
    # B_n(1) = (-1)^n B_n
    with ctx256.workprec():
        for n in range(12):
            b = bernoulli_number(n)
            assert abs(bernoulli_poly(n, 1, ctx256) - (-1) ** n * mpf(b.numerator) / b.denominator) < mpf(10) ** -60


def test_periodized_examples(ctx256):
    assert periodized_bernoulli(1, mpf(2.75), ctx256) == mpf(0.25)
    assert periodized_bernoulli(1, 3, ctx256) == mpf(-0.5)


@settings(max_examples=30)
@given(st.integers(1, 6), st.floats(0.05, 20))
def test_periodized_derivative(k, t):
    if abs(t - round(t)) < 0.02:
        return
    with mpmath.workprec(200):
        h = mpf(10) ** -20
        t = mpf(t)
        d = (periodized_bernoulli(k + 1, t + h) - periodized_bernoulli(k + 1, t - h)) / (2 * h)
        assert abs(d - (k + 1) * periodized_bernoulli(k, t)) < mpf(10) ** -15
