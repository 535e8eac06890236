"""Families of Sturmian words with distinct slopes.

Sturmian words are aperiodic, have exactly n+1 factors of each length n, and
words with different slopes have disjoint orbit closures (their letter
frequencies differ).  Slopes are quadratic irrationals ``(p + q sqrt(m)) / r``
evaluated to many decimal digits, so irrationality is exact.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import (SymbolicSequence, distinct_factors, factor_complexity, least_period_upto,
                   looks_irrational, sturmian)

DIGITS = 60
NONPERIODIC_HORIZON = 1000
COMPLEXITY_HORIZON = 10_000
COMPLEXITY_MAX_N = 12


def _quadratic_decimal(p: int, q: int, m: int, r: int, digits: int = DIGITS) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 20
        value = (Decimal(p) + Decimal(q) * Decimal(m).sqrt()) / Decimal(r)
        return str(value.quantize(Decimal(1).scaleb(-digits)))


@dataclass(frozen=True)
class SturmianSpec:
    slope: str
    intercept: str = "0"
    defining: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        a = Fraction(self.slope)
        if not 0 < a < 1:
            raise ValueError(f"slope must lie in (0, 1), got {self.slope}")
        if not 0 <= Fraction(self.intercept) < 1:
            raise ValueError(f"intercept must lie in [0, 1), got {self.intercept}")
        if not looks_irrational(a):
            raise ValueError(f"rational slope detected: {self.slope}")

    @classmethod
    def quadratic(cls, p: int, q: int, m: int, r: int = 1, intercept: str = "0") -> "SturmianSpec":
        """Slope ``(p + q sqrt(m)) / r``; m must not be a perfect square."""
        if math.isqrt(m) ** 2 == m:
            raise ValueError(f"sqrt({m}) is rational")
        return cls(_quadratic_decimal(p, q, m, r), intercept, {"p": p, "q": q, "m": m, "r": r})

    @classmethod
    def sqrt_fractional(cls, m: int, intercept: str = "0") -> "SturmianSpec":
        """Slope ``sqrt(m) - floor(sqrt(m))``."""
        return cls.quadratic(-math.isqrt(m), 1, m, 1, intercept)

    @property
    def value(self) -> Fraction:
        return Fraction(self.slope)

    def to_json(self) -> dict:
        data = {"slope": self.slope, "intercept": self.intercept}
        if self.defining is not None:
            data["defining"] = dict(self.defining)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "SturmianSpec":
        return cls(data["slope"], data.get("intercept", "0"), data.get("defining"))


SILVER = SturmianSpec.quadratic(-1, 1, 2)          # sqrt(2) - 1
GOLDEN = SturmianSpec.quadratic(3, -1, 5, 2)       # (3 - sqrt(5)) / 2


def sturmian_sequence(spec: SturmianSpec) -> SymbolicSequence:
    return sturmian(spec.slope, spec.intercept)


def is_balanced(x: SymbolicSequence, n: int, horizon: int) -> bool:
    """Do all length-n factors (within horizon) have 1-counts differing by at most one?"""
    w = x.word(0, horizon)
    counts = np.convolve(w, np.ones(n, dtype=np.int64), mode="valid")
    return int(counts.max() - counts.min()) <= 1


@dataclass
class MemberCertificate:
    spec: SturmianSpec
    nonperiodic_horizon: int
    nonperiodic: bool
    complexity: dict
    balanced: bool

    @property
    def ok(self) -> bool:
        return (self.nonperiodic and self.balanced
                and all(c == n + 1 for n, c in self.complexity.items()))

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "nonperiodic_horizon": self.nonperiodic_horizon,
            "nonperiodic": self.nonperiodic,
            "complexity": {str(n): c for n, c in self.complexity.items()},
            "balanced": self.balanced,
            "certified": self.ok,
        }


def certify_member(spec: SturmianSpec, nonperiodic_horizon: int = NONPERIODIC_HORIZON,
                   complexity_horizon: int = COMPLEXITY_HORIZON,
                   max_n: int = COMPLEXITY_MAX_N) -> MemberCertificate:
    x = sturmian_sequence(spec)
    return MemberCertificate(
        spec=spec,
        nonperiodic_horizon=nonperiodic_horizon,
        nonperiodic=least_period_upto(x, nonperiodic_horizon) is None,
        complexity={n: factor_complexity(x, n, complexity_horizon) for n in range(1, max_n + 1)},
        balanced=all(is_balanced(x, n, complexity_horizon) for n in range(1, max_n + 1)),
    )


def _decimal_gap(a: SturmianSpec, b: SturmianSpec) -> str:
    # both slopes carry at most DIGITS places, so this subtraction is exact
    with localcontext() as ctx:
        ctx.prec = DIGITS + 20
        return str(abs(Decimal(a.slope) - Decimal(b.slope)))


@dataclass
class FamilyCertificate:
    members: list
    certificates: list
    separation: str
    seed: int | None = None

    @property
    def specs(self) -> list:
        return list(self.members)

    def gaps(self) -> dict:
        return {f"{i}-{j}": _decimal_gap(self.members[i], self.members[j])
                for i, j in combinations(range(len(self.members)), 2)}

    @property
    def certified(self) -> bool:
        return all(c.ok for c in self.certificates) and all(
            Decimal(g) >= Decimal(self.separation) for g in self.gaps().values())

    def to_json(self) -> dict:
        return {
            "members": [m.to_json() for m in self.members],
            "pairwise_gaps": self.gaps(),
            "separation": self.separation,
            "seed": self.seed,
            "certificates": [c.to_json() for c in self.certificates],
            "certified": self.certified,
        }


def certify_family(specs, separation="0") -> FamilyCertificate:
    specs = list(specs)
    return FamilyCertificate(specs, [certify_member(s) for s in specs], str(separation))


def _squarefree(m: int) -> bool:
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


def generate_family(count: int, seed: int = 0, separation="0.001", max_m: int = 10_000,
                    max_attempts: int = 10_000) -> FamilyCertificate:
    """``count`` certified slopes ``sqrt(m) - floor(sqrt(m))`` for squarefree m.

    Slopes keep at least ``separation`` from each other and from the ends
    of (0, 1).  Candidates failing certification are discarded.
    """
    if count < 2:
        raise ValueError("a family needs at least two members")
    sep = Fraction(str(separation))
    if sep < 0:
        raise ValueError("separation must be non-negative")
    if (count + 1) * sep >= 1:
        raise ValueError(f"cannot fit {count} slopes with separation {separation} inside (0, 1)")
    rng = random.Random(seed)
    members, certs, tried = [], [], set()
    for _ in range(max_attempts):
        if len(members) == count:
            break
        m = rng.randrange(2, max_m)
        if m in tried or not _squarefree(m):
            continue
        tried.add(m)
        spec = SturmianSpec.sqrt_fractional(m)
        a = spec.value
        if a < sep or 1 - a < sep or any(abs(a - o.value) < sep for o in members):
            continue
        cert = certify_member(spec)
        if cert.ok:
            members.append(spec)
            certs.append(cert)
    if len(members) < count:
        raise ValueError(f"could only place {len(members)} of {count} slopes with separation {separation}")
    return FamilyCertificate(members, certs, str(separation), seed)


def orbit_disjointness_proxy(a: SturmianSpec, b: SturmianSpec, horizon: int = 10_000) -> bool:
    """Distinct letter frequencies, resolved by counting 1s over ``horizon`` symbols.

    The count of 1s in a length-n Sturmian prefix differs from ``n * slope``
    by less than 1, so each empirical frequency is within ``1/horizon``.
    """
    if a.value == b.value:
        return False
    err = Fraction(1, horizon)
    if abs(a.value - b.value) <= 5 * err:
        raise ValueError("horizon insufficient for separation")
    fa = Fraction(int(sturmian_sequence(a).word(0, horizon).sum()), horizon)
    fb = Fraction(int(sturmian_sequence(b).word(0, horizon).sum()), horizon)
    return abs(fa - fb) > 3 * err


def language(x: SymbolicSequence, n: int, horizon: int = COMPLEXITY_HORIZON) -> set:
    return distinct_factors(x.word(0, horizon), n)


def divergence_length(x: SymbolicSequence, y: SymbolicSequence, horizon: int = COMPLEXITY_HORIZON,
                      max_len: int = 200) -> int:
    """Smallest L at which the length-L factor sets of x and y (within horizon) are disjoint."""
    xw, yw = x.word(0, horizon), y.word(0, horizon)
    for n in range(1, max_len + 1):
        if not distinct_factors(xw, n) & distinct_factors(yw, n):
            return n
    raise ValueError(f"languages share factors up to length {max_len}")


def first_absent_prefix(beta: SymbolicSequence, chi: SymbolicSequence, horizon: int = COMPLEXITY_HORIZON,
                        max_len: int = 200) -> int:
    """Smallest r with ``beta[0:r]`` not a factor of chi (within horizon)."""
    cw = chi.word(0, horizon)
    for r in range(1, max_len + 1):
        if beta.word(0, r).astype("uint8").tobytes() not in cw.astype("uint8").tobytes():
            return r
    raise ValueError(f"beta's prefix of length {max_len} occurs in chi")

