"""On-disk cache of computed constants.

A cache is one JSON file ``{"version": N, "entries": [...]}``.  Entries are
keyed by ``(kind, k, a, method)`` and carry the decimal value, the bit
precision it was computed at and its error estimate.  A lookup hits only
when the stored precision is at least the requested one.

Files with another version, or that fail to parse, are ignored with a
:class:`CacheWarning`.  Writes go to a temporary file in the same directory
that is then renamed over the target.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mpf

from .mpcore import PrecisionContext, default_context, from_decimal, to_decimal

CACHE_VERSION = 1
ENV_VAR = "STIELTJES_CACHE_DIR"
FILENAME = "constants.json"


class CacheWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CacheEntry:
    kind: str          # "gamma" or "eta"
    k: int
    a: str             # decimal form of the shift; "1" for eta
    method: str
    value: str
    bits: int
    err: str

    @property
    def key(self) -> tuple:
        return (self.kind, self.k, self.a, self.method)


@dataclass
class CacheFile:
    version: int = CACHE_VERSION
    entries: list[CacheEntry] = field(default_factory=list)

    def lookup(self, kind: str, k: int, a: str, method: str, bits: int) -> CacheEntry | None:
        hits = [e for e in self.entries if e.key == (kind, k, a, method) and e.bits >= bits]
        return max(hits, key=lambda e: e.bits) if hits else None

    def add(self, entry: CacheEntry) -> None:
        """Insert ``entry`` unless an entry with the same key and at least its precision exists."""
        for i, e in enumerate(self.entries):
            if e.key == entry.key:
                if entry.bits > e.bits:
                    self.entries[i] = entry
                return
        self.entries.append(entry)

    def sorted_entries(self) -> list[CacheEntry]:
        return sorted(self.entries, key=lambda e: (e.kind, e.a, e.method, e.k, e.bits))


def cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "zetalaurent"


def default_path() -> Path:
    return cache_dir() / FILENAME


def format_a(a) -> str:
    """Canonical decimal text of the shift parameter used in cache keys."""
    with mpmath.workprec(128):
        x = mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else mpf(a)
        return mpmath.nstr(x, 30)


def read_cache(path: str | os.PathLike) -> CacheFile:
    path = Path(path)
    if not path.exists():
        return CacheFile()
    try:
        data = json.loads(path.read_text())
        version = data["version"]
        if version != CACHE_VERSION:
            warnings.warn(f"ignoring cache {path}: version {version}, expected {CACHE_VERSION}",
                          CacheWarning, stacklevel=2)
            return CacheFile()
        entries = [CacheEntry(**e) for e in data["entries"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        warnings.warn(f"ignoring unreadable cache {path}: {exc}", CacheWarning, stacklevel=2)
        return CacheFile()
    return CacheFile(version, entries)


def write_cache(path: str | os.PathLike, cache: CacheFile) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"version": cache.version, "entries": [asdict(e) for e in cache.sorted_entries()]}
    fd, tmp = tempfile.mkstemp(prefix=path.name, suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def cache_io(path: str | os.PathLike, mode: str = "r", cache: CacheFile | None = None) -> CacheFile:
    """Read (``mode='r'``) or atomically write (``mode='w'``) a cache file."""
    if mode == "r":
        return read_cache(path)
    if mode == "w":
        if cache is None:
            raise ValueError("mode 'w' needs a cache to write")
        write_cache(path, cache)
        return cache
    raise ValueError(f"mode must be 'r' or 'w', got {mode!r}")


class CacheWriter:
    """Serializes read-modify-write cycles on one cache file across threads."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else default_path()
        self._lock = threading.Lock()

    def read(self) -> CacheFile:
        return read_cache(self.path)

    def store(self, entries) -> CacheFile:
        with self._lock:
            cache = read_cache(self.path)
            for e in entries:
                cache.add(e)
            write_cache(self.path, cache)
            return cache


def entry_value(entry: CacheEntry, ctx: PrecisionContext | None = None):
    ctx = ctx or default_context()
    return from_decimal(entry.value, ctx.with_bits(max(ctx.bits, entry.bits)))


def cached_gamma_table(k_max: int, a=1, method: str = "hermite", ctx: PrecisionContext | None = None,
                       writer: CacheWriter | None = None):
    """``[(value, err)]`` for ``gamma_k(a)``, ``k <= k_max``, served from the cache where possible.

    Missing orders are computed in one call and written back.
    """
    from .stieltjes import gamma_table

    ctx = ctx or default_context()
    writer = writer or CacheWriter()
    key_a = format_a(a)
    cache = writer.read()
    hits = [cache.lookup("gamma", k, key_a, method, ctx.bits) for k in range(k_max + 1)]
    if all(hits):
        return [(entry_value(e, ctx), mpf(e.err)) for e in hits], True
    res = gamma_table(k_max, a, method, ctx)
    writer.store(CacheEntry("gamma", r.k, key_a, method, to_decimal(r.value, ctx), ctx.bits,
                            mpmath.nstr(r.err.absolute, 6)) for r in res)
    return [(r.value, r.err.absolute) for r in res], False
