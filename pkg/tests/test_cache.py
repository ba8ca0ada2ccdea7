import json
import warnings
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from zetalaurent.cache import (
    CACHE_VERSION,
    ENV_VAR,
    CacheEntry,
    CacheFile,
    CacheWarning,
    CacheWriter,
    cache_io,
    cached_gamma_table,
    default_path,
    entry_value,
    format_a,
)
from zetalaurent.mpcore import make_context, to_decimal


def entry(k=0, bits=256, value="0.5", a="1.0"):
    return CacheEntry("gamma", k, a, "hermite", value, bits, "1e-30")


def test_round_trip(tmp_path):
    path = tmp_path / "c.json"
    cache = CacheFile(entries=[entry(k) for k in range(3)] + [CacheEntry("eta", 0, "1.0", "from_gamma", "-0.5", 128, "0")])
    cache_io(path, "w", cache)
    back = cache_io(path, "r")
    assert back.version == CACHE_VERSION
    assert sorted(back.entries, key=lambda e: e.key) == sorted(cache.entries, key=lambda e: e.key)
    assert not list(tmp_path.glob("*.tmp"))


def test_corrupt_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with pytest.warns(CacheWarning):
        assert cache_io(path, "r").entries == []


def test_version_zero_ignored(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"version": 0, "entries": [vars(entry())]}))
    with pytest.warns(CacheWarning):
        assert cache_io(path, "r").entries == []


def test_missing_file_is_empty(tmp_path):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert cache_io(tmp_path / "absent.json").entries == []


def test_bad_mode(tmp_path):
    with pytest.raises(ValueError):
        cache_io(tmp_path / "c.json", "a")
    with pytest.raises(ValueError):
        cache_io(tmp_path / "c.json", "w")


def test_lookup_needs_enough_bits():
    c = CacheFile()
    c.add(entry(bits=128))
    assert c.lookup("gamma", 0, "1.0", "hermite", 256) is None
    c.add(entry(bits=512))
    hit = c.lookup("gamma", 0, "1.0", "hermite", 256)
    assert hit.bits == 512
    c.add(entry(bits=64))
    assert len(c.entries) == 1


def test_env_var(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert default_path().parent == tmp_path


def test_format_a():
    assert format_a(Fraction(1, 2)) == format_a("0.5") == format_a(0.5)
    assert format_a(1) == format_a(Fraction(2, 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(64, 600), st.floats(-1e6, 1e6, allow_nan=False).filter(lambda x: x != 0),
       st.integers(-200, 200))
def test_decimal_round_trip(bits, x, e):
    ctx = make_context(bits, mpf(2) ** (8 - bits))
    with ctx.workprec():
        v = mpf(x) * mpf(2) ** e / 3
        text = to_decimal(v, ctx)
    back = entry_value(entry(value=text, bits=bits), ctx)
    with ctx.workprec():
        assert back == v


def test_cached_table(tmp_path, ctx256):
    writer = CacheWriter(tmp_path / "c.json")
    first, hit = cached_gamma_table(3, 1, "hermite", ctx256, writer)
    assert not hit
    second, hit = cached_gamma_table(3, 1, "hermite", ctx256, writer)
    assert hit
    with ctx256.workprec():
        for (a, _), (b, _) in zip(first, second):
            assert a == b
        assert abs(second[0][0] - mpmath.euler) < mpf("1e-20")
    # a more precise request misses and upgrades the entries
    ctx = make_context(320, mpf("1e-25"))
    _, hit = cached_gamma_table(3, 1, "hermite", ctx, writer)
    assert not hit
    assert {e.bits for e in writer.read().entries} == {320}
