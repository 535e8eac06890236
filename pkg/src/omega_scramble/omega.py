"""Finite-depth approximation of omega-limit sets by late recurrence.

A length-K word is counted as an omega-cylinder of x when it occurs at least
``min_hits`` times among the windows starting in the late part of the scan,
``[late_fraction * horizon, horizon - K]``.  This under-approximates the
depth-K cylinders met by omega(x) for the structured points built here.
"""
from __future__ import annotations

import math
import threading
import weakref
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import SymbolicSequence, least_period_of_word, windows_bytes
from .descriptors import fraction_to_str
from .scramble import SystemParams, WitnessEnumeration, construction_params


@dataclass(frozen=True)
class RecurrenceParams:
    """Scan ``[origin + ceil(late_fraction * horizon), origin + horizon)``.

    ``origin`` is zero except for compensated scans (see :meth:`compensated`).
    """

    horizon: int = 100_000
    late_fraction: Fraction = Fraction(1, 2)
    min_hits: int = 3
    origin: int = 0

    def __post_init__(self):
        object.__setattr__(self, "late_fraction", Fraction(self.late_fraction))
        if not 0 < self.late_fraction < 1:
            raise ValueError("late_fraction must lie in (0, 1)")
        if self.min_hits < 1:
            raise ValueError("min_hits must be at least 1")
        if self.horizon < 1:
            raise ValueError("horizon must be positive")

    @property
    def start(self) -> int:
        return self.origin + math.ceil(self.late_fraction * self.horizon)

    @property
    def stop(self) -> int:
        return self.origin + self.horizon

    def check_depth(self, K: int) -> None:
        if K < 1:
            raise ValueError("depth must be at least 1")
        if self.horizon < 10 * K:
            raise ValueError(f"depth {K} exceeds horizon/10 = {self.horizon / 10}")

    def compensated(self, k: int) -> "RecurrenceParams":
        """The same scan window read on a sequence with ``k`` fewer leading symbols."""
        return replace(self, origin=self.origin - k)

    def to_json(self) -> dict:
        return {"horizon": self.horizon, "late_fraction": fraction_to_str(self.late_fraction),
                "min_hits": self.min_hits, "origin": self.origin}


@dataclass(frozen=True)
class CylinderSet:
    depth: int
    words: frozenset = field(default_factory=frozenset)

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return tuple(w) in self.words

    def __sub__(self, other: "CylinderSet") -> "CylinderSet":
        return CylinderSet(self.depth, self.words - other.words)

    def truncated(self, k: int) -> "CylinderSet":
        return CylinderSet(k, frozenset(w[:k] for w in self.words))


_scan_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_scan_lock = threading.Lock()


def _late_word(x: SymbolicSequence, rp: RecurrenceParams) -> np.ndarray:
    key = (rp.start, rp.stop)
    with _scan_lock:
        cached = _scan_cache.get(x, {}).get(key)
    if cached is not None:
        return cached
    if rp.start < 0:
        raise ValueError("compensated scan starts before index 0")
    arr = x.word(rp.start, rp.stop)
    arr.setflags(write=False)
    with _scan_lock:
        _scan_cache.setdefault(x, {})[key] = arr
    return arr


def window_counts(x: SymbolicSequence, K: int, rp: RecurrenceParams) -> Counter:
    """Occurrence counts of every length-K word in the late window."""
    arr = _late_word(x, rp)
    data, width = windows_bytes(arr)
    span = K * width
    return Counter(data[j * width:j * width + span] for j in range(len(arr) - K + 1))


def _unpack(word: bytes, width: int) -> tuple:
    if width == 1:
        return tuple(word)
    return tuple(int(v) for v in np.frombuffer(word, dtype=">i8"))


def omega_cylinders(x: SymbolicSequence, K: int, rp: RecurrenceParams = RecurrenceParams()) -> CylinderSet:
    rp.check_depth(K)
    arr = _late_word(x, rp)
    _, width = windows_bytes(arr)
    counts = window_counts(x, K, rp)
    return CylinderSet(K, frozenset(_unpack(w, width) for w, n in counts.items() if n >= rp.min_hits))


def recurs(x: SymbolicSequence, w: Sequence[int], rp: RecurrenceParams = RecurrenceParams()) -> bool:
    """Does ``w`` occur at least ``min_hits`` times in the late window?"""
    w = [int(v) for v in w]
    rp.check_depth(len(w))
    return tuple(w) in omega_cylinders(x, len(w), rp)


# --- block decoding ------------------------------------------------------------

def decode_runs(x: SymbolicSequence, params: SystemParams, rp: RecurrenceParams,
                min_letters: int = 3) -> list[tuple[int, tuple]]:
    """Maximal runs of consecutive stride windows equal to a ``t0``/``t1`` block.

    A window ``x[i : i + stride]`` decodes to bit ``b`` when it equals the
    first ``stride`` symbols of ``t_b`` (the placement the E-witnesses use).
    Returns ``(start, letters)`` for every run of at least ``min_letters``.
    """
    stride = params.stride
    arr = _late_word(x, rp)
    data, width = windows_bytes(arr)
    blocks = {}
    for bit in (0, 1):
        tw, _ = windows_bytes(params.t(bit).word(0, stride))
        blocks.setdefault(tw, bit)
    span = stride * width
    n = len(arr) - stride + 1
    code = [blocks.get(data[j * width:j * width + span], -1) for j in range(max(n, 0))]
    runs = []
    for phase in range(stride):
        letters, begin = [], None
        for j in range(phase, n, stride):
            if code[j] >= 0:
                if begin is None:
                    begin = j
                letters.append(code[j])
                continue
            if begin is not None and len(letters) >= min_letters:
                runs.append((begin + rp.start, tuple(letters)))
            letters, begin = [], None
        if begin is not None and len(letters) >= min_letters:
            runs.append((begin + rp.start, tuple(letters)))
    runs.sort()
    return runs


def nonperiodic_witness(x: SymbolicSequence, params: SystemParams, rp: RecurrenceParams,
                        min_letters: int = 3) -> tuple | None:
    """A decoded late block word with no period up to half its length, if any.

    Only runs seen at least ``min_hits`` times count as recurrent; the
    longest aperiodic one is returned, None when there is none.
    """
    runs = decode_runs(x, params, rp, min_letters)
    seen = Counter(letters for _, letters in runs)
    best = None
    for letters, hits in seen.items():
        if hits < rp.min_hits:
            continue
        if least_period_of_word(letters) > len(letters) // 2:
            if best is None or len(letters) > len(best):
                best = letters
    return best


# --- scramble verification -----------------------------------------------------------

@dataclass
class ScrambleReport:
    pair: tuple[str, str]
    depths: tuple[int, ...]
    shared_cylinder_found: bool
    shared_by_depth: dict
    exclusive_counts: dict
    nonperiodic_witness: tuple[bool, bool]
    witness_words: tuple
    params: dict
    recurrence: dict

    @property
    def exclusive_positive(self) -> bool:
        return all(c[0] >= 1 and c[1] >= 1 for c in self.exclusive_counts.values())

    @property
    def exclusive_monotone(self) -> bool:
        ks = sorted(self.exclusive_counts)
        return all(self.exclusive_counts[a][side] <= self.exclusive_counts[b][side]
                   for a, b in zip(ks, ks[1:]) for side in (0, 1))

    @property
    def passed(self) -> bool:
        return (self.shared_cylinder_found and self.exclusive_positive
                and all(self.nonperiodic_witness))

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "depths": list(self.depths),
            "shared_cylinder_found": self.shared_cylinder_found,
            "shared_by_depth": {str(k): v for k, v in sorted(self.shared_by_depth.items())},
            "exclusive_counts": {str(k): {"first_minus_second": v[0], "second_minus_first": v[1]}
                                 for k, v in sorted(self.exclusive_counts.items())},
            "exclusive_positive": self.exclusive_positive,
            "exclusive_monotone": self.exclusive_monotone,
            "nonperiodic_witness": list(self.nonperiodic_witness),
            "witness_words": [None if w is None else "".join(map(str, w)) for w in self.witness_words],
            "passed": self.passed,
            "params": self.params,
            "recurrence": self.recurrence,
        }


def _check_params(p: SymbolicSequence, params: SystemParams, label: str) -> None:
    recorded = construction_params(p)
    if recorded is not None and not recorded.same_as(params):
        raise ValueError(f"parameter mismatch: {label} was built with different parameters")


def verify_scramble_pair(p_b: SymbolicSequence, p_g: SymbolicSequence, params: SystemParams,
                         depths: Sequence[int] = (13, 26), rp: RecurrenceParams = RecurrenceParams(),
                         names: tuple[str, str] = ("p_beta", "p_gamma")) -> ScrambleReport:
    """Finite-depth check of the three omega-scrambled conditions for one pair."""
    _check_params(p_b, params, names[0])
    _check_params(p_g, params, names[1])
    depths = tuple(sorted(set(int(k) for k in depths)))
    shared, exclusive = {}, {}
    for K in depths:
        rp.check_depth(K)
        probe = params.s.word(0, K)
        cb, cg = omega_cylinders(p_b, K, rp), omega_cylinders(p_g, K, rp)
        shared[K] = tuple(probe.tolist()) in (cb.words & cg.words)
        exclusive[K] = (len(cb - cg), len(cg - cb))
    wb = nonperiodic_witness(p_b, params, rp)
    wg = nonperiodic_witness(p_g, params, rp)
    return ScrambleReport(
        pair=names,
        depths=depths,
        shared_cylinder_found=all(shared.values()),
        shared_by_depth=shared,
        exclusive_counts=exclusive,
        nonperiodic_witness=(wb is not None, wg is not None),
        witness_words=(wb, wg),
        params=params.to_json(),
        recurrence=rp.to_json(),
    )


def verify_exclusion(p_g: SymbolicSequence, enumeration_b: WitnessEnumeration, K: int,
                     rp: RecurrenceParams = RecurrenceParams()) -> bool:
    """True iff no enumeration entry's length-K prefix recurs in ``p_g``."""
    if not enumeration_b.entries:
        return True
    cylinders = omega_cylinders(p_g, K, rp)
    return not any(tuple(e.sequence.word(0, K).tolist()) in cylinders for e in enumeration_b.entries)
