from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from zetalaurent.mpcore import ConvergenceError, DomainError, make_context
from zetalaurent.zeta_series import (
    binomial_outer_sum,
    hurwitz_lambda,
    zeta_lambda,
    zeta_negative_integers,
    zeta_prime_at_zero,
    zeta_prime_lambda,
    zeta_sech_kernel,
)

HALF, QUARTER = Fraction(1, 2), Fraction(1, 4)
TOL = mpf("1e-20")


def ref_zeta(s, a=1):
    with mpmath.workprec(400):
        if isinstance(a, Fraction):
            a = mpf(a.numerator) / a.denominator
        return mpmath.zeta(s, a)


def test_zeta_examples(ctx256):
    with ctx256.workprec():
        assert abs(zeta_lambda(2, HALF, ctx256) - mpmath.pi ** 2 / 6) < TOL
        assert abs(zeta_lambda(-1, 1, ctx256) + mpf(1) / 12) < TOL
    for lam in (QUARTER, HALF, 1, 2, Fraction(3)):
        assert abs(zeta_lambda(0, lam, ctx256) + mpf(1) / 2) < TOL


@pytest.mark.parametrize("s", [-3, -1, 0, 2, 3, mpmath.mpc(0.5, 1)])
def test_lambda_invariance(s, ctx256):
    vals = [zeta_lambda(s, lam, ctx256) for lam in (QUARTER, HALF, 1, 2)]
    for v in vals:
        assert abs(v - ref_zeta(s)) < TOL


def test_divergence_boundary(ctx256):
    with pytest.raises(DomainError):
        zeta_lambda(2, -1, ctx256)
    with pytest.raises(DomainError):
        zeta_lambda(2, mpmath.mpc(0, 1), ctx256)


def test_hurwitz_examples(ctx256):
    with ctx256.workprec():
        assert abs(hurwitz_lambda(2, 1, 1, ctx256) - mpmath.pi ** 2 / 6) < TOL
        assert abs(hurwitz_lambda(2, HALF, 1, ctx256) - mpmath.pi ** 2 / 2) < TOL
        assert abs(hurwitz_lambda(3, 2, HALF, ctx256) - (mpmath.zeta(3) - 1)) < TOL
    with pytest.raises(DomainError):
        hurwitz_lambda(1, 1, 1, ctx256)


@settings(max_examples=8, deadline=None)
@given(st.floats(1.3, 6), st.floats(0.2, 4), st.sampled_from([HALF, 1, 2]))
def test_hurwitz_against_oracle(s, a, lam):
    ctx = make_context(256, TOL)
    v = hurwitz_lambda(s, a, lam, ctx)
    assert abs(v - ref_zeta(s, a)) < 10 * TOL * max(1, abs(ref_zeta(s, a)))


def test_hurwitz_matches_zeta(ctx256):
    for s in (2, 3.5, mpmath.mpc(2, 1)):
        assert abs(hurwitz_lambda(s, 1, 1, ctx256) - zeta_lambda(s, 1, ctx256)) < 10 * TOL


def test_zeta_prime(ctx256):
    with ctx256.workprec():
        target = -mpmath.log(2 * mpmath.pi) / 2
        for lam in (HALF, 1):
            assert abs(zeta_prime_at_zero(lam, ctx256) - target) < TOL
    with ctx256.workprec():
        h = mpf("1e-8")
        fd = (zeta_lambda(2 + h, 1, ctx256) - zeta_lambda(2 - h, 1, ctx256)) / (2 * h)
        zp = zeta_prime_lambda(2, 1, ctx256)
        assert abs(zp - fd) < mpf("1e-14")
        with mpmath.workprec(400):
            assert abs(zp - mpmath.zeta(2, derivative=1)) < TOL


@pytest.mark.parametrize("n,lam,expected", [(1, 1, Fraction(-1, 12)), (2, HALF, 0), (3, 2, Fraction(1, 120))])
def test_negative_integer_examples(n, lam, expected, ctx256):
    with ctx256.workprec():
        assert abs(zeta_negative_integers(n, lam, ctx256) - mpf(expected.numerator) / expected.denominator) < TOL


def test_outer_sum_of_reciprocals_gives_log2(ctx256):
    for lam in (HALF, 1, 2):
        (v,), _, _ = binomial_outer_sum(lambda j: [1 / mpf(j + 1)], lam, ctx256, 1, tol=TOL)
        with ctx256.workprec():
            lam_m = mpf(lam.numerator) / lam.denominator if isinstance(lam, Fraction) else mpf(lam)
            assert abs(v - (lam_m + 1) * mpmath.log(2)) < TOL


def test_outer_sum_convergence_failure(ctx256):
    with pytest.raises(ConvergenceError):
        binomial_outer_sum(lambda j: [mpf(j + 1) ** 40], Fraction(1, 1000), ctx256, 1, tol=TOL, max_terms=50)


def test_sech_kernel(ctx256):
    with ctx256.workprec():
        assert abs(zeta_sech_kernel(2, ctx256) - mpmath.pi ** 2 / 6) < TOL
        assert abs(zeta_sech_kernel(-1, ctx256) - zeta_lambda(-1, HALF, ctx256)) < TOL
        s = mpmath.mpc(0.5, 14.134725)
        a = zeta_sech_kernel(s, ctx256)
        b = zeta_lambda(s, HALF, ctx256)
        assert abs(a) < 1e-6 and abs(a - b) < mpf("1e-15")
    with pytest.raises(DomainError):
        zeta_sech_kernel(1, ctx256)
    with pytest.raises(DomainError):
        zeta_sech_kernel(1 + 2j * mpmath.pi / mpmath.log(2), ctx256)
