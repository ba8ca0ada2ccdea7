import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from zetalaurent.laguerre import (
    laguerre_coefficients,
    laguerre_eval,
    laguerre_exact,
    laguerre_fejer,
    laguerre_float_table,
    laguerre_laplace,
    laguerre_laplace_zeros,
    laguerre_mellin,
    laguerre_mellin_scaled,
    lemma_binomial_sum,
)
from zetalaurent.mpcore import DomainError, make_context
from zetalaurent.quad import Domain, IntegralSpec, integrate

TOL = mpf("1e-20")


def test_examples(ctx256):
    assert laguerre_exact(2, 1, 0) == 3
    assert laguerre_exact(1, 1, 1) == 1
    v, _ = integrate(IntegralSpec(lambda x: mpmath.exp(-x) * laguerre_eval(2, 1, x, ctx256),
                                  Domain.SEMI_INFINITE_PLAIN, TOL), ctx256)
    with ctx256.workprec():
        assert abs(v - 1) < TOL


@pytest.mark.parametrize("n", [1, 5, 17, 40])
@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_coefficients(n, alpha):
    c = laguerre_coefficients(n, alpha)
    for k, ck in enumerate(c):
        assert ck == Fraction((-1) ** k * math.comb(n + alpha, n - k), math.factorial(k))


@pytest.mark.parametrize("n", range(1, 12))
def test_value_at_zero(n):
    assert laguerre_exact(n - 1, 1, 0) == n


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 200), st.sampled_from([0, 1, 2]), st.floats(0, 20))
def test_series_recurrence_and_oracle(n, alpha, x):
    ctx = make_context(256, TOL)
    a = laguerre_eval(n, alpha, x, ctx, "series")
    b = laguerre_eval(n, alpha, x, ctx, "recurrence")
    with mpmath.workprec(600):
        ref = mpmath.laguerre(n, alpha, mpf(x))
    scale = max(1, abs(ref))
    assert abs(a - ref) <= TOL * scale and abs(b - ref) <= TOL * scale


def test_complex_argument(ctx256):
    z = mpmath.mpc(0.3, -1.2)
    with mpmath.workprec(400):
        ref = mpmath.laguerre(7, 1, z)
    assert abs(laguerre_eval(7, 1, z, ctx256) - ref) < TOL


def test_float_table_shape_and_values():
    x = np.linspace(0, 5, 11)
    t = laguerre_float_table(8, 1, x)
    assert t.shape == (9, 11)
    for n in range(9):
        exact = [float(laguerre_exact(n, 1, Fraction(xi).limit_denominator(10))) for xi in x]
        assert np.allclose(t[n], exact, rtol=1e-12, atol=1e-12)


@settings(max_examples=50)
@given(st.integers(1, 30), st.sampled_from([1, 2]), st.fractions(-5, 5, max_denominator=50))
def test_lemma_binomial_identity(n, nu, w):
    if nu > n:
        return
    lhs = lemma_binomial_sum(n, nu, w)
    assert lhs == (-1) ** (nu - 1) * laguerre_exact(n - nu, nu, w)


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("nu", [1, 2])
def test_laplace_value_by_quadrature(n, nu, ctx256):
    if nu > n:
        return
    v, _ = integrate(IntegralSpec(lambda x: mpmath.exp(-x) * laguerre_eval(n - nu, nu, x, ctx256),
                                  Domain.SEMI_INFINITE_PLAIN, TOL), ctx256)
    exact = Fraction(math.factorial(n - 1), math.factorial(n - nu) * math.factorial(nu - 1))
    with ctx256.workprec():
        assert abs(v - mpf(exact.numerator) / exact.denominator) < 10 * TOL


def test_fejer_error_decreases():
    ctx = make_context(256, TOL)
    errs = []
    for n in (50, 100, 200):
        errs.append(abs(laguerre_eval(n - 1, 1, 1, ctx) - laguerre_fejer(n, 1, ctx)) / mpf(n) ** 0.25)
    assert errs[0] > errs[1] > errs[2]


def test_fejer_phase():
    # sign changes of L_99^1 bracket the first cosine zeros of the asymptotic form
    ctx = make_context(256, TOL)
    n = 100
    for j in range(1, 6):
        x0 = ((mpmath.pi / 2 + j * mpmath.pi + 3 * mpmath.pi / 4) / 2) ** 2 / (n - 1)
        half = (mpmath.pi * mpmath.sqrt(x0 / (n - 1)) / 2)  # quarter of the local zero spacing
        lo = laguerre_eval(n - 1, 1, x0 - half, ctx)
        hi = laguerre_eval(n - 1, 1, x0 + half, ctx)
        assert lo * hi < 0


def test_fejer_domain(ctx256):
    assert mpmath.isfinite(laguerre_fejer(2, 1, ctx256))
    with pytest.raises(DomainError):
        laguerre_fejer(5, 0, ctx256)


def test_laplace_examples(ctx256):
    assert laguerre_laplace(7, 1, ctx256) == 1
    assert laguerre_laplace(2, 2, ctx256) == mpf(3) / 4
    with pytest.raises(DomainError):
        laguerre_laplace(3, 0, ctx256)


@pytest.mark.parametrize("n", [2, 4, 7, 10, 25])
def test_laplace_zeros(n, ctx256):
    zs = laguerre_laplace_zeros(n, ctx256)
    assert len(zs) == n - 1
    for z in zs:
        assert z.real == mpf(1) / 2
        assert abs(laguerre_laplace(n, z, ctx256)) <= TOL


def test_mellin_examples(ctx256):
    s = mpmath.mpc(0.3, 2)
    with ctx256.workprec():
        assert abs(laguerre_mellin(1, s, ctx256) - 1 / s) < TOL
        lhs = laguerre_mellin(5, s, ctx256)
        rhs = -(1 - 1 / s) ** 5 * laguerre_mellin(5, 1 - s, ctx256)
        assert abs(lhs - rhs) <= TOL
    v, _ = integrate(IntegralSpec(lambda x: x * laguerre_eval(2, 1, -mpmath.log(x), ctx256),
                                  Domain.UNIT_INTERVAL, TOL), ctx256)
    with ctx256.workprec():
        assert abs(v - laguerre_mellin(3, 2, ctx256)) < 10 * TOL
    with pytest.raises(DomainError):
        laguerre_mellin(3, 0, ctx256)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 10), st.floats(-5, 5), st.floats(-5, 5))
def test_mellin_functional_equation(n, re, im):
    ctx = make_context(256, TOL)
    s = mpmath.mpc(re, im)
    if abs(s) < 0.1 or abs(1 - s) < 0.1:
        return
    with ctx.workprec():
        a = laguerre_mellin_scaled(n, s, ctx)
        b = (-1) ** (n + 1) * laguerre_mellin_scaled(n, 1 - s, ctx)
        assert abs(a - b) <= TOL * max(1, abs(a))
