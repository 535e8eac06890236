"""Sequences over integer alphabets, the shift map and the shift metric.

A point of the one-sided shift space is a :class:`SymbolicSequence`: a finite
literal prefix followed by a tail rule that can produce any symbol on demand.
Three tail rules exist: a repeated word, a Sturmian rotation word, and a
schedule built by specification (see :mod:`omega_scramble.specification`).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterable, Protocol, Sequence

import numpy as np

PRECISION_ENV = "OMEGA_SCRAMBLE_PRECISION_BITS"
CF_DEPTH = 32
# a partial quotient this large within the first CF_DEPTH terms marks a
# truncated rational rather than a genuine irrational
CF_QUOTIENT_CAP = 1 << 24


def precision_bits() -> int:
    bits = int(os.environ.get(PRECISION_ENV, "64"))
    if bits < 64:
        raise ValueError(f"{PRECISION_ENV} must be at least 64, got {bits}")
    return bits


@dataclass(frozen=True)
class Alphabet:
    """``size`` symbols ``0..size-1``, or all non-negative integers when ``size`` is None."""

    size: int | None = 2

    def __post_init__(self):
        if self.size is not None and self.size < 1:
            raise ValueError("alphabet must be nonempty")

    @classmethod
    def naturals(cls) -> "Alphabet":
        return cls(None)

    def __contains__(self, symbol) -> bool:
        if symbol < 0:
            return False
        return self.size is None or symbol < self.size

    def check_shift_space(self) -> None:
        if self.size is not None and self.size < 2:
            raise ValueError("a shift space needs at least two symbols")

    def to_json(self) -> dict:
        if self.size is None:
            return {"kind": "naturals"}
        return {"kind": "finite", "size": self.size}

    @classmethod
    def from_json(cls, data: dict) -> "Alphabet":
        if data["kind"] == "naturals":
            return cls(None)
        if data["kind"] == "finite":
            return cls(int(data["size"]))
        raise ValueError(f"unknown alphabet kind {data['kind']!r}")


BINARY = Alphabet(2)


@dataclass(frozen=True)
class ExpansivityParams:
    eta: Fraction = Fraction(1)
    lam: Fraction = Fraction(2)

    def __post_init__(self):
        object.__setattr__(self, "eta", Fraction(self.eta))
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.lam <= 1:
            raise ValueError("lambda must exceed 1")


# shift-space constants: the shift doubles distances below 1
SHIFT_EXPANSIVITY = ExpansivityParams(Fraction(1), Fraction(2))


class Tail(Protocol):
    def symbol(self, n: int) -> int: ...

    def block(self, start: int, stop: int) -> np.ndarray: ...

    def shifted(self, k: int) -> "Tail": ...


@dataclass(frozen=True)
class PeriodicTail:
    word: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(s) for s in self.word))
        if not self.word:
            raise ValueError("periodic tail word must be nonempty")

    def symbol(self, n: int) -> int:
        return self.word[n % len(self.word)]

    def block(self, start: int, stop: int) -> np.ndarray:
        if stop <= start:
            return np.empty(0, dtype=np.int64)
        w = np.asarray(self.word, dtype=np.int64)
        idx = np.arange(start, stop) % len(w)
        return w[idx]

    def shifted(self, k: int) -> "PeriodicTail":
        k %= len(self.word)
        return PeriodicTail(self.word[k:] + self.word[:k])


def continued_fraction(value: Fraction, max_terms: int) -> list[int]:
    """Partial quotients of ``value``; stops early when the expansion terminates."""
    value = Fraction(value)
    terms = []
    num, den = value.numerator, value.denominator
    while den and len(terms) < max_terms:
        q, r = divmod(num, den)
        terms.append(q)
        num, den = den, r
    return terms


def looks_irrational(value: Fraction, depth: int = CF_DEPTH) -> bool:
    """True when the continued fraction runs ``depth`` terms past the integer
    part without terminating and without a giant partial quotient."""
    terms = continued_fraction(value, depth + 1)
    if len(terms) < depth + 1:
        return False
    return all(q < CF_QUOTIENT_CAP for q in terms[1:])


@dataclass(frozen=True)
class SturmianTail:
    """Rotation word ``floor((n+1)a + r) - floor(n a + r)`` with ``a`` irrational.

    The slope and intercept are kept as decimal strings (the canonical form)
    and evaluated in ``bits``-bit fixed point with exact integer arithmetic.
    """

    slope: str
    intercept: str = "0"
    offset: int = 0
    bits: int = field(default_factory=precision_bits)

    def __post_init__(self):
        a = Fraction(self.slope)
        r = Fraction(self.intercept)
        if not 0 < a < 1:
            raise ValueError(f"Sturmian slope must lie in (0, 1), got {self.slope}")
        if not 0 <= r < 1:
            raise ValueError(f"Sturmian intercept must lie in [0, 1), got {self.intercept}")
        if not looks_irrational(a):
            raise ValueError(f"Sturmian slope {self.slope} is rational to tested precision")
        if self.bits < 64:
            raise ValueError("Sturmian evaluation needs at least 64 fractional bits")
        if self.offset < 0:
            raise ValueError("offset must be non-negative")
        scale = 1 << self.bits
        object.__setattr__(self, "_a", (a.numerator * scale) // a.denominator)
        object.__setattr__(self, "_r", (r.numerator * scale) // r.denominator)

    def _floor(self, m: int) -> int:
        return (m * self._a + self._r) >> self.bits

    def symbol(self, n: int) -> int:
        m = n + self.offset
        return self._floor(m + 1) - self._floor(m)

    def block(self, start: int, stop: int) -> np.ndarray:
        if stop <= start:
            return np.empty(0, dtype=np.int64)
        a, r, bits = self._a, self._r, self.bits
        lo = start + self.offset
        floors = [(m * a + r) >> bits for m in range(lo, stop + self.offset + 1)]
        return np.diff(np.asarray(floors, dtype=np.int64))

    def shifted(self, k: int) -> "SturmianTail":
        return replace(self, offset=self.offset + k)


@dataclass(frozen=True, eq=False)
class SymbolicSequence:
    """An infinite sequence: literal ``prefix`` then ``tail``.

    Equality is identity; compare descriptors or windows for structure.
    """

    prefix: tuple[int, ...]
    tail: Tail
    alphabet: Alphabet = BINARY

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(s) for s in self.prefix))
        for sym in self.prefix:
            if sym not in self.alphabet:
                raise ValueError(f"symbol {sym} not in alphabet {self.alphabet}")

    def symbol_at(self, n: int) -> int:
        if n < 0:
            raise IndexError("sequence index must be non-negative")
        if n < len(self.prefix):
            return self.prefix[n]
        return int(self.tail.symbol(n - len(self.prefix)))

    def word(self, start: int, stop: int) -> np.ndarray:
        """Symbols ``start .. stop-1`` as an int64 array."""
        if start < 0:
            raise IndexError("sequence index must be non-negative")
        if stop <= start:
            return np.empty(0, dtype=np.int64)
        plen = len(self.prefix)
        parts = []
        if start < plen:
            parts.append(np.asarray(self.prefix[start:min(stop, plen)], dtype=np.int64))
        if stop > plen:
            parts.append(self.tail.block(max(start, plen) - plen, stop - plen))
        return parts[0] if len(parts) == 1 else np.concatenate(parts)

    def __getitem__(self, item):
        if isinstance(item, slice):
            if item.stop is None or item.step not in (None, 1):
                raise ValueError("only bounded unit-step slices are supported")
            return tuple(int(v) for v in self.word(item.start or 0, item.stop))
        return self.symbol_at(item)

    def eventual_period(self) -> tuple[int, int] | None:
        """``(preperiod, period)`` when the tail is a repeated word, else None."""
        if isinstance(self.tail, PeriodicTail):
            return len(self.prefix), len(self.tail.word)
        return None

    def __repr__(self):
        head = "".join(map(str, self.word(0, 16)))
        return f"SymbolicSequence({head}..., tail={type(self.tail).__name__})"


def _alphabet_for(symbols: Iterable[int], alphabet: Alphabet | None) -> Alphabet:
    if alphabet is not None:
        return alphabet
    top = max(symbols, default=0)
    return Alphabet(max(2, top + 1))


def periodic(word: Sequence[int], prefix: Sequence[int] = (), alphabet: Alphabet | None = None) -> SymbolicSequence:
    alpha = _alphabet_for(list(word) + list(prefix), alphabet)
    tail = PeriodicTail(tuple(word))
    for sym in tail.word:
        if sym not in alpha:
            raise ValueError(f"symbol {sym} not in alphabet {alpha}")
    return SymbolicSequence(tuple(prefix), tail, alpha)


def constant(symbol: int, alphabet: Alphabet | None = None) -> SymbolicSequence:
    return periodic((symbol,), alphabet=alphabet)


def from_string(text: str) -> SymbolicSequence:
    """``"01(10)"`` is prefix 01 followed by (10) repeated forever."""
    head, _, rest = text.partition("(")
    if not rest.endswith(")"):
        raise ValueError("expected PREFIX(PERIOD)")
    return periodic([int(c) for c in rest[:-1]], [int(c) for c in head])


def sturmian(slope: str, intercept: str = "0") -> SymbolicSequence:
    return SymbolicSequence((), SturmianTail(str(slope), str(intercept)), BINARY)


def shift(x: SymbolicSequence, k: int = 1) -> SymbolicSequence:
    if k < 0:
        raise ValueError("shift count must be non-negative")
    if k == 0:
        return x
    plen = len(x.prefix)
    if k <= plen:
        return SymbolicSequence(x.prefix[k:], x.tail, x.alphabet)
    return SymbolicSequence((), x.tail.shifted(k - plen), x.alphabet)


def prepend(w: Sequence[int], x: SymbolicSequence) -> SymbolicSequence:
    if not len(w):
        return x
    return SymbolicSequence(tuple(w) + x.prefix, x.tail, x.alphabet)


# --- metric -----------------------------------------------------------------

def terms_for_precision(precision) -> int:
    """Smallest K with tail bound 2**(1-K) <= precision."""
    precision = Fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    k = 1
    while Fraction(2, 1 << k) > precision:
        k += 1
    return k


def _weighted(ind: np.ndarray) -> Fraction:
    """sum(ind[i] / 2**i) exactly, for a 0/1 array."""
    k = len(ind)
    if k == 0:
        return Fraction(0)
    bits = "".join("1" if v else "0" for v in ind.tolist())
    return Fraction(int(bits, 2), 1 << (k - 1))


def mismatch(xw: np.ndarray, yw: np.ndarray) -> np.ndarray:
    return np.minimum(np.abs(xw - yw), 1)


def partial_dist(x: SymbolicSequence, y: SymbolicSequence, terms: int, start: int = 0) -> Fraction:
    """First ``terms`` summands of d(shift^start x, shift^start y)."""
    return _weighted(mismatch(x.word(start, start + terms), y.word(start, start + terms)))


def exact_dist(x: SymbolicSequence, y: SymbolicSequence) -> Fraction:
    """Closed form for two eventually periodic sequences."""
    px, py = x.eventual_period(), y.eventual_period()
    if px is None or py is None:
        raise ValueError("exact distance needs eventually periodic sequences")
    pre = max(px[0], py[0])
    per = px[1] * py[1] // gcd(px[1], py[1])
    head = _weighted(mismatch(x.word(0, pre), y.word(0, pre)))
    cycle = _weighted(mismatch(x.word(pre, pre + per), y.word(pre, pre + per)))
    # cycle terms start at index pre and repeat every per symbols
    return head + cycle / (1 << pre) / (1 - Fraction(1, 1 << per))


def dist(x: SymbolicSequence, y: SymbolicSequence, precision=Fraction(1, 1 << 30), exact: bool = False) -> Fraction:
    """Shift-metric distance within ``precision`` (a lower bound: the partial sum).

    With ``exact=True`` the true value is returned for eventually periodic
    inputs; other inputs raise ValueError.
    """
    if exact:
        return exact_dist(x, y)
    return partial_dist(x, y, terms_for_precision(precision))


def dist_bounds(x: SymbolicSequence, y: SymbolicSequence, precision, start: int = 0) -> tuple[Fraction, Fraction]:
    k = terms_for_precision(precision)
    lo = partial_dist(x, y, k, start)
    return lo, lo + Fraction(2, 1 << k)


def check_expansive_step(x: SymbolicSequence, y: SymbolicSequence,
                         params: ExpansivityParams = SHIFT_EXPANSIVITY,
                         precision=Fraction(1, 1 << 60)) -> bool:
    """Does ``0 < d(x,y) < eta`` imply ``d(sx, sy) >= lam * d(x, y)``?

    Eventually periodic pairs are evaluated exactly; otherwise truncations of
    K and K-1 terms are compared, for which the doubling identity
    ``d(sx,sy) = 2 d(x,y) - 2 min(|x0-y0|,1)`` also holds exactly.
    """
    try:
        d = exact_dist(x, y)
        ds = exact_dist(shift(x), shift(y))
    except ValueError:
        k = terms_for_precision(precision)
        d = partial_dist(x, y, k)
        ds = partial_dist(x, y, k - 1, start=1)
    if not 0 < d < params.eta:
        return True
    if params.eta == 1:
        m0 = min(abs(x.symbol_at(0) - y.symbol_at(0)), 1)
        if ds != 2 * d - 2 * m0:
            return False
    return ds >= params.lam * d


# --- combinatorics ------------------------------------------------------------

def z_function(w: Sequence[int]) -> list[int]:
    n = len(w)
    z = [0] * n
    if n:
        z[0] = n
    lo = hi = 0
    for i in range(1, n):
        if i < hi:
            z[i] = min(hi - i, z[i - lo])
        while i + z[i] < n and w[z[i]] == w[i + z[i]]:
            z[i] += 1
        if i + z[i] > hi:
            lo, hi = i, i + z[i]
    return z


def least_period_upto(x: SymbolicSequence, horizon: int) -> int | None:
    """Smallest ``p <= horizon/2`` with ``x[n] == x[n+p]`` for every ``n <= horizon``.

    The comparison runs over the first ``horizon + 1`` symbols, so it reads up
    to index ``horizon + p``.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    half = horizon // 2
    w = x.word(0, horizon + half + 1).tolist()
    z = z_function(w)
    for p in range(1, half + 1):
        if z[p] >= horizon + 1:
            return p
    return None


def least_period_of_word(w: Sequence[int]) -> int:
    """Smallest period of a finite word (its length when unbordered)."""
    w = list(w)
    if not w:
        return 0
    z = z_function(w)
    n = len(w)
    for p in range(1, n):
        if p + z[p] == n:
            return p
    return n


def windows_bytes(arr: np.ndarray) -> tuple[bytes, int]:
    """Pack an int array to bytes so that fixed-width slices compare as words."""
    if arr.size == 0 or (arr.min() >= 0 and arr.max() < 256):
        return arr.astype(np.uint8).tobytes(), 1
    return arr.astype(">i8").tobytes(), 8


def distinct_factors(arr: np.ndarray, n: int) -> set[bytes]:
    data, width = windows_bytes(arr)
    span = n * width
    return {data[j * width:j * width + span] for j in range(len(arr) - n + 1)}


def factor_complexity(x: SymbolicSequence, n: int, horizon: int) -> int:
    """Number of distinct length-``n`` factors starting at positions ``0..horizon-n``."""
    if not 1 <= n <= horizon:
        raise ValueError("need 1 <= n <= horizon")
    return len(distinct_factors(x.word(0, horizon), n))
