"""JSON descriptors for sequences, schedules and exact rationals.

Descriptors are plain dicts; :func:`dumps` renders them canonically (sorted
keys, no whitespace) so that equal objects serialize to equal bytes.
Schedules driven by infinite streams carry a ``generator`` recipe and are
rebuilt from it on load; finite schedules list every segment.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable

from .core import Alphabet, PeriodicTail, SturmianTail, SymbolicSequence, shift
from .specification import FillerPolicy, ScheduleTail, Segment, SpecSchedule

PREVIEW_SEGMENTS = 4

_GENERATORS: dict[str, Callable[[dict], SymbolicSequence]] = {}


def register_generator(name: str):
    def deco(fn):
        _GENERATORS[name] = fn
        return fn
    return deco


def dyadic_to_json(value) -> dict:
    value = Fraction(value)
    den = value.denominator
    if den & (den - 1):
        raise ValueError(f"{value} is not a dyadic rational")
    return {"num": value.numerator, "pow2": den.bit_length() - 1}


def dyadic_from_json(data) -> Fraction:
    return Fraction(int(data["num"]), 1 << int(data["pow2"]))


def fraction_to_str(value) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def filler_to_json(filler: FillerPolicy) -> dict:
    if filler.kind == "constant":
        return {"kind": "constant", "symbol": filler.symbol}
    return {"kind": "copy", "source": to_descriptor(filler.source)}


def filler_from_json(data: dict) -> FillerPolicy:
    if data["kind"] == "constant":
        return FillerPolicy("constant", int(data["symbol"]))
    return FillerPolicy("copy", source=from_descriptor(data["source"]))


def _segments_json(segments: list[Segment]) -> tuple[list, list]:
    sources, index, out = [], {}, []
    for seg in segments:
        key = id(seg.source)
        if key not in index:
            index[key] = len(sources)
            sources.append(to_descriptor(seg.source))
        out.append({"source": index[key], "offset": seg.offset, "a": seg.a, "b": seg.b, "end": seg.end})
    return sources, out


def schedule_to_json(schedule: SpecSchedule, offset: int = 0) -> dict:
    data = {
        "kind": "schedule",
        "offset": offset,
        "gap": schedule.gap,
        "window": schedule.window,
        "filler": filler_to_json(schedule.filler),
    }
    if schedule.generator is not None:
        data["generator"] = schedule.generator
        segments = schedule.first_segments(PREVIEW_SEGMENTS)
    elif schedule.bounded:
        segments = schedule.all_segments()
    else:
        raise ValueError("a schedule fed by an unbounded stream needs a generator recipe to serialize")
    data["sources"], data["segments"] = _segments_json(segments)
    return data


def tail_to_json(tail) -> dict:
    if isinstance(tail, PeriodicTail):
        return {"kind": "periodic", "word": list(tail.word)}
    if isinstance(tail, SturmianTail):
        return {"kind": "sturmian", "slope": tail.slope, "intercept": tail.intercept,
                "offset": tail.offset, "precision_bits": tail.bits}
    if isinstance(tail, ScheduleTail):
        return schedule_to_json(tail.schedule, tail.offset)
    raise TypeError(f"cannot serialize tail {type(tail).__name__}")


def to_descriptor(x: SymbolicSequence) -> dict:
    return {"alphabet": x.alphabet.to_json(), "prefix": list(x.prefix), "tail": tail_to_json(x.tail)}


def _schedule_from_json(data: dict, alphabet: Alphabet) -> SymbolicSequence:
    offset = int(data.get("offset", 0))
    if "generator" in data:
        gen = data["generator"]
        _load_generators()
        try:
            build = _GENERATORS[gen["name"]]
        except KeyError:
            raise ValueError(f"unknown schedule generator {gen['name']!r}") from None
        return shift(build(gen), offset)
    sources = [from_descriptor(s) for s in data["sources"]]
    segments = [Segment(sources[s["source"]], int(s["offset"]), int(s["a"]), int(s["b"]), int(s["end"]))
                for s in data["segments"]]
    schedule = SpecSchedule(segments, gap=int(data["gap"]), window=int(data["window"]),
                            filler=filler_from_json(data["filler"]))
    return SymbolicSequence((), ScheduleTail(schedule, offset), alphabet)


def from_descriptor(data: dict) -> SymbolicSequence:
    alphabet = Alphabet.from_json(data.get("alphabet", {"kind": "finite", "size": 2}))
    tail = data["tail"]
    kind = tail["kind"]
    if kind == "periodic":
        body = SymbolicSequence((), PeriodicTail(tuple(tail["word"])), alphabet)
    elif kind == "sturmian":
        body = SymbolicSequence((), SturmianTail(tail["slope"], tail.get("intercept", "0"),
                                                 int(tail.get("offset", 0)),
                                                 int(tail.get("precision_bits", 64))), alphabet)
    elif kind == "schedule":
        body = _schedule_from_json(tail, alphabet)
    else:
        raise ValueError(f"unknown tail kind {kind!r}")
    prefix = tuple(data.get("prefix", ()))
    return SymbolicSequence(prefix + body.prefix, body.tail, alphabet)


def dumps(obj) -> str:
    if isinstance(obj, SymbolicSequence):
        obj = to_descriptor(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def loads(text: str) -> SymbolicSequence:
    return from_descriptor(json.loads(text))


def _load_generators():
    if not _GENERATORS:
        from . import scramble  # noqa: F401  (registers e_beta / p_beta)
