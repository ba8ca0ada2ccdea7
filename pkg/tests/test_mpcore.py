import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from zetalaurent.mpcore import (
    DomainError,
    ErrorEstimate,
    ErrorSource,
    cancellation_guard,
    deserialize,
    from_decimal,
    make_context,
    parse_complex,
    serialize,
    to_decimal,
    ulp,
)


def test_make_context_echoes_bits():
    assert make_context(256, mpf("1e-30")).bits == 256
    assert make_context(64, mpf("1e-12")).bits == 64


@pytest.mark.parametrize("bits,tol", [(53, "1e-12"), (256, "0"), (256, "-1e-5"), (64, "1e-40")])
def test_make_context_rejects(bits, tol):
    with pytest.raises(DomainError):
        make_context(bits, mpf(tol))


@pytest.mark.parametrize("bits,ratio,floor", [(256, 1, 272), (256, mpf(2) ** 100, 372), (64, mpf(2) ** 64, 144)])
def test_guard_examples(bits, ratio, floor):
    assert cancellation_guard(make_context(bits, mpf("1e-12")), ratio).bits >= floor


@given(st.integers(64, 2048), st.floats(1, 1e300))
def test_guard_never_narrows(bits, ratio):
    ctx = make_context(bits, mpf(2) ** (8 - bits))
    assert cancellation_guard(ctx, ratio).bits >= bits + 16


@settings(max_examples=60)
@given(st.integers(64, 1024), st.integers(-10**30, 10**30), st.integers(-300, 300))
def test_decimal_round_trip_within_one_ulp(bits, mant, exp):
    ctx = make_context(bits, mpf(2) ** (8 - bits))
    with ctx.workprec():
        x = mpf(mant) * mpf(10) ** exp / 7
        back = from_decimal(to_decimal(x, ctx), ctx)
        assert abs(back - x) <= ulp(x, bits)


def test_decimal_format_has_point(ctx256):
    s = to_decimal(3, ctx256)
    assert "." in s and s.startswith("3.")


def test_serialize_complex_round_trip(ctx256):
    with ctx256.workprec():
        z = mpmath.mpc(1, -2) / 3
    back = deserialize(serialize(z, ctx256), ctx256)
    with ctx256.workprec():
        assert abs(back - z) < mpf(2) ** -250


def test_parse_complex():
    assert parse_complex("0,0") == 0
    assert parse_complex("1.5,-2") == mpmath.mpc(1.5, -2)
    assert parse_complex("3") == 3


def test_error_estimate_nonnegative():
    with pytest.raises(ValueError):
        ErrorEstimate(mpf(-1), ErrorSource.MODEL)
    total = ErrorEstimate(mpf(1), ErrorSource.QUADRATURE) + ErrorEstimate(mpf(3), ErrorSource.TRUNCATION)
    assert total.absolute == 4 and total.source is ErrorSource.TRUNCATION


def test_principal_branch_log(ctx256):
    with ctx256.workprec():
        assert mpmath.im(mpmath.log(mpmath.mpc(-1, 0))) == mpmath.pi
