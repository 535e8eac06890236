"""Specification-property constructions in the shift space.

A point that shadows prescribed orbit segments is built by copying the
source sequences symbol by symbol into a :class:`SpecSchedule`.  Schedules may
be driven by infinite streams; segments are then materialized lazily, only as
far as the highest index queried so far.
"""
from __future__ import annotations

import bisect
import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import BINARY, SymbolicSequence


def relaxation_time(delta) -> int:
    """Smallest N >= 1 such that agreeing on N symbols forces distance < delta.

    Agreement on the first N symbols bounds the distance by 2**(1-N).
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    n = 1
    while Fraction(2, 1 << n) >= delta:
        n += 1
    return n


@dataclass(frozen=True)
class SpecInterval:
    a: int
    b: int

    def __post_init__(self):
        if not 0 <= self.a <= self.b:
            raise ValueError(f"invalid interval [{self.a}, {self.b}]")


@dataclass(frozen=True)
class FillerPolicy:
    """What goes in positions no segment controls.

    ``constant`` writes ``symbol`` everywhere; ``copy`` writes the symbol the
    designated ``source`` has at the same index.
    """

    kind: str = "constant"
    symbol: int = 0
    source: SymbolicSequence | None = None

    def __post_init__(self):
        if self.kind not in ("constant", "copy"):
            raise ValueError(f"unknown filler kind {self.kind!r}")
        if self.kind == "copy" and self.source is None:
            raise ValueError("copy filler needs a source sequence")

    def block(self, start: int, stop: int) -> np.ndarray:
        if self.kind == "constant":
            return np.full(max(stop - start, 0), self.symbol, dtype=np.int64)
        return self.source.word(start, stop)


DEFAULT_FILLER = FillerPolicy()


@dataclass(frozen=True, eq=False)
class Segment:
    """Positions ``a..end`` copy ``source`` from ``offset``; ``a..b`` is the controlled interval."""

    source: SymbolicSequence
    offset: int
    a: int
    b: int
    end: int

    def source_index(self, j: int) -> int:
        return self.offset + j - self.a


class SpecSchedule:
    """Ordered, non-overlapping copy segments plus a filler policy.

    ``gap`` is the separation between consecutive controlled intervals that
    was enforced, ``window`` the relaxation time used for the copy regions.
    ``generator`` optionally records how to rebuild an infinite schedule.
    """

    def __init__(self, segments: Iterable[Segment], gap: int, window: int,
                 filler: FillerPolicy = DEFAULT_FILLER, generator: dict | None = None):
        self.gap = gap
        self.window = window
        self.filler = filler
        self.generator = generator
        self.bounded = isinstance(segments, (list, tuple))
        self._pending: Iterator[Segment] | None = iter(segments)
        self._segments: list[Segment] = []
        self._starts: list[int] = []
        self._lock = threading.Lock()

    def _materialize(self, n: int) -> None:
        # materialize until a segment starts beyond n or the stream ends
        if self._pending is None or (self._starts and self._starts[-1] > n):
            return
        with self._lock:
            while self._pending is not None and (not self._starts or self._starts[-1] <= n):
                seg = next(self._pending, None)
                if seg is None:
                    self._pending = None
                    break
                if self._segments and seg.a <= self._segments[-1].end:
                    raise ValueError("schedule segments overlap")
                self._segments.append(seg)
                self._starts.append(seg.a)

    def segments_upto(self, n: int) -> list[Segment]:
        """Materialized segments whose start is at most ``n``."""
        self._materialize(n)
        k = bisect.bisect_right(self._starts, n)
        return self._segments[:k]

    def first_segments(self, count: int) -> list[Segment]:
        while len(self._segments) < count and self._pending is not None:
            last = self._starts[-1] if self._starts else -1
            self._materialize(last + 1)
        return self._segments[:count]

    @property
    def is_finite(self) -> bool:
        return self._pending is None

    def all_segments(self) -> list[Segment]:
        """Every segment; only for schedules backed by a finite list."""
        while self._pending is not None:
            last = self._starts[-1] if self._starts else -1
            self._materialize(last + 1)
        return list(self._segments)

    def symbol(self, n: int) -> int:
        self._materialize(n)
        k = bisect.bisect_right(self._starts, n) - 1
        if k >= 0:
            seg = self._segments[k]
            if n <= seg.end:
                return seg.source.symbol_at(seg.source_index(n))
        return int(self.filler.block(n, n + 1)[0])

    def block(self, start: int, stop: int) -> np.ndarray:
        if stop <= start:
            return np.empty(0, dtype=np.int64)
        self._materialize(stop - 1)
        out = np.empty(stop - start, dtype=np.int64)
        k = max(bisect.bisect_right(self._starts, start) - 1, 0)
        pos = start
        while pos < stop:
            seg = self._segments[k] if k < len(self._segments) else None
            if seg is None or seg.a >= stop:
                out[pos - start:] = self.filler.block(pos, stop)
                break
            if pos < seg.a:
                out[pos - start:seg.a - start] = self.filler.block(pos, seg.a)
                pos = seg.a
            if pos <= seg.end:
                hi = min(seg.end + 1, stop)
                out[pos - start:hi - start] = seg.source.word(seg.source_index(pos), seg.source_index(hi))
                pos = hi
            k += 1
        return out


@dataclass(frozen=True)
class ScheduleTail:
    schedule: SpecSchedule
    offset: int = 0

    def symbol(self, n: int) -> int:
        return self.schedule.symbol(n + self.offset)

    def block(self, start: int, stop: int) -> np.ndarray:
        return self.schedule.block(start + self.offset, stop + self.offset)

    def shifted(self, k: int) -> "ScheduleTail":
        return ScheduleTail(self.schedule, self.offset + k)


def scheduled_sequence(schedule: SpecSchedule, alphabet=BINARY) -> SymbolicSequence:
    return SymbolicSequence((), ScheduleTail(schedule), alphabet)


def _peekable(items):
    it = iter(items)
    first = next(it, None)
    return first, (it if first is None else itertools.chain([first], it))


def _isp_segments(pairs: Iterator, n: int) -> Iterator[Segment]:
    prev = None
    for idx, (x, iv) in enumerate(pairs):
        if not isinstance(iv, SpecInterval):
            iv = SpecInterval(*iv)
        if prev is not None:
            px, piv = prev
            if iv.a - piv.b <= n:
                raise ValueError(
                    f"gap violation at block {idx}: a - b_prev = {iv.a - piv.b} must exceed N = {n}")
            yield Segment(px, piv.a, piv.a, piv.b, min(piv.b + n, iv.a - 1))
        prev = (x, iv)
    if prev is not None:
        px, piv = prev
        yield Segment(px, piv.a, piv.a, piv.b, piv.b + n)


def _strict_zip(targets, intervals):
    sentinel = object()
    for x, iv in itertools.zip_longest(targets, intervals, fillvalue=sentinel):
        if x is sentinel or iv is sentinel:
            raise ValueError("targets and intervals differ in length")
        yield x, iv


def build_isp_witness(targets: Iterable[SymbolicSequence], intervals: Iterable,
                      delta, filler: FillerPolicy = DEFAULT_FILLER) -> SymbolicSequence:
    """A point whose orbit stays within ``delta`` of ``targets[i]``'s orbit on ``intervals[i]``.

    Position j inside the copy region of block i holds ``targets[i][j]``.
    Finite lists are validated eagerly; infinite streams are consumed lazily
    and a gap violation surfaces when the offending block is materialized.
    """
    n = relaxation_time(delta)
    if isinstance(targets, Sequence) and isinstance(intervals, Sequence):
        if not targets:
            raise ValueError("empty target list")
        if len(targets) != len(intervals):
            raise ValueError("targets and intervals differ in length")
        segments = list(_isp_segments(iter(zip(targets, intervals)), n))
    else:
        first, pairs = _peekable(_strict_zip(targets, intervals))
        if first is None:
            raise ValueError("empty target list")
        segments = _isp_segments(pairs, n)
    alphabet = _first_alphabet(targets)
    return scheduled_sequence(SpecSchedule(segments, gap=n + 1, window=n, filler=filler), alphabet)


def _first_alphabet(targets):
    if isinstance(targets, Sequence) and targets:
        return targets[0].alphabet
    return BINARY


def _pattern_segments(blocks: Iterator, gap: int, window: int) -> Iterator[Segment]:
    a = 0
    prev = None
    for z, c in blocks:
        if c < 0:
            raise ValueError("iterate counts must be non-negative")
        if prev is not None:
            pz, pa, pb = prev
            a = pb + gap
            yield Segment(pz, 0, pa, pb, min(pb + window, a - 1))
        prev = (z, a, a + c)
    if prev is not None:
        pz, pa, pb = prev
        yield Segment(pz, 0, pa, pb, pb + window)


def build_spec_pattern(blocks: Iterable, M: int, delta, filler: FillerPolicy = DEFAULT_FILLER,
                       generator: dict | None = None, alphabet=BINARY) -> tuple[SymbolicSequence, SpecSchedule]:
    """Shadow ``z_0 .. s^{c_0} z_0, (*)^M, z_1, ...`` within ``delta``.

    ``blocks`` yields ``(z, c)`` pairs.  Block i is controlled on
    ``[a_i, a_i + c_i]`` with ``a_0 = 0`` and ``a_{i+1} = b_i + M``; ``z_i`` is
    placed from its index 0 at ``a_i``.  Copy regions run ``window`` symbols
    past ``b_i`` but are clipped before the next block starts.
    """
    window = relaxation_time(delta)
    if M < window:
        raise ValueError(f"gap M = {M} is below the relaxation time {window}")
    if isinstance(blocks, Sequence):
        segments = list(_pattern_segments(iter(blocks), M, window))
    else:
        segments = _pattern_segments(iter(blocks), M, window)
    schedule = SpecSchedule(segments, gap=M, window=window, filler=filler, generator=generator)
    return scheduled_sequence(schedule, alphabet), schedule


def controlled_indices(schedule: SpecSchedule, upto: int) -> Iterator[tuple[int, Segment]]:
    """``(j, segment)`` for every controlled index j <= upto."""
    for seg in schedule.segments_upto(upto):
        for j in range(seg.a, min(seg.b, upto) + 1):
            yield j, seg
