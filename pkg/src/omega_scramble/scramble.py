"""Scrambled points built from specification.

Given three points ``t0, t1, s`` with separated orbit closures, a centre
``xi`` and a radius ``D``, every binary word ``beta`` gets

* a set E_beta of points whose orbit follows ``t_{beta_i}`` on the blocks
  ``[a_i, b_i]`` with ``a_i = i(N+P)``, ``b_i = a_i + P``;
* a computable stand-in for H_beta: an enumeration of shifted E-witnesses
  for shifts of ``beta``;
* a point ``p_beta`` near ``xi`` whose orbit keeps returning to ``s`` and to
  every enumerated witness.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .core import (BINARY, SHIFT_EXPANSIVITY, ExpansivityParams, SymbolicSequence, constant,
                   exact_dist, least_period_upto, mismatch, periodic, shift, terms_for_precision,
                   _weighted)
from .descriptors import (dumps, dyadic_from_json, dyadic_to_json, filler_from_json, filler_to_json,
                          from_descriptor, register_generator, to_descriptor)
from .specification import (DEFAULT_FILLER, FillerPolicy, Segment, SpecSchedule, build_spec_pattern,
                            relaxation_time, scheduled_sequence)

# largest power of two strictly below the bound, but never finer than this
EPSILON_MIN_POW2 = 40
ORBIT_HORIZON = 256


@dataclass(frozen=True, eq=False)
class SystemParams:
    t0: SymbolicSequence
    t1: SymbolicSequence
    s: SymbolicSequence
    xi: SymbolicSequence
    D: Fraction
    epsilon: Fraction
    N: int
    P: int
    M: int
    expansivity: ExpansivityParams = SHIFT_EXPANSIVITY
    separations: dict = field(default_factory=dict)
    violations: tuple = ()

    @property
    def stride(self) -> int:
        return self.N + self.P

    def a(self, i: int) -> int:
        return i * self.stride

    def b(self, i: int) -> int:
        return i * self.stride + self.P

    def t(self, bit: int) -> SymbolicSequence:
        if bit == 0:
            return self.t0
        if bit == 1:
            return self.t1
        raise ValueError(f"beta must be binary, got symbol {bit}")

    def to_json(self) -> dict:
        return {
            "t0": to_descriptor(self.t0),
            "t1": to_descriptor(self.t1),
            "s": to_descriptor(self.s),
            "xi": to_descriptor(self.xi),
            "D": dyadic_to_json(self.D),
            "epsilon": dyadic_to_json(self.epsilon),
            "N": self.N,
            "P": self.P,
            "M": self.M,
            "eta": dyadic_to_json(self.expansivity.eta),
            "lambda": dyadic_to_json(self.expansivity.lam),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SystemParams":
        return cls(
            t0=from_descriptor(data["t0"]),
            t1=from_descriptor(data["t1"]),
            s=from_descriptor(data["s"]),
            xi=from_descriptor(data["xi"]),
            D=dyadic_from_json(data["D"]),
            epsilon=dyadic_from_json(data["epsilon"]),
            N=int(data["N"]),
            P=int(data["P"]),
            M=int(data["M"]),
            expansivity=ExpansivityParams(dyadic_from_json(data["eta"]), dyadic_from_json(data["lambda"])),
        )

    def key(self) -> str:
        return dumps(self.to_json())

    def same_as(self, other: "SystemParams") -> bool:
        return self.key() == other.key()


def default_instance() -> dict:
    """``t0 = 0^w``, ``t1 = 1^w``, ``s = (01)^w`` and centre ``xi = (011)^w``."""
    return {"t0": constant(0), "t1": constant(1), "s": periodic((0, 1)), "xi": periodic((0, 1, 1))}


def orbit_closure_distance(x: SymbolicSequence, y: SymbolicSequence, horizon: int = ORBIT_HORIZON,
                           precision=Fraction(1, 1 << 40)) -> Fraction:
    """Distance between the orbit closures of ``x`` and ``y``.

    Exact for eventually periodic inputs (their orbits are finite and closed).
    Otherwise the minimum over shifts below ``horizon`` of the truncated
    distance, which estimates the infimum from above up to truncation.
    """
    px, py = x.eventual_period(), y.eventual_period()
    if px is not None and py is not None:
        xs = [shift(x, k) for k in range(sum(px))]
        ys = [shift(y, k) for k in range(sum(py))]
        return min(exact_dist(u, v) for u in xs for v in ys)
    k = terms_for_precision(precision)
    xw = x.word(0, horizon + k)
    yw = y.word(0, horizon + k)
    best = None
    for i in range(horizon):
        for j in range(horizon):
            d = _weighted(mismatch(xw[i:i + k], yw[j:j + k]))
            if best is None or d < best:
                best = d
                if best == 0:
                    return best
    return best


def _epsilon_below(bound: Fraction) -> Fraction:
    for k in range(EPSILON_MIN_POW2 + 1):
        eps = Fraction(1, 1 << k)
        if 2 * eps < bound:
            return eps
    raise ValueError("orbit closures not separated at tested precision")


def derive_params(t0: SymbolicSequence, t1: SymbolicSequence, s: SymbolicSequence, xi: SymbolicSequence,
                  D=Fraction(1), P: int | None = None, epsilon=None, strict: bool = True,
                  horizon: int = ORBIT_HORIZON) -> SystemParams:
    """Choose epsilon, N, P, M for the instance.

    epsilon is the largest power of two with ``2 epsilon`` strictly below the
    three orbit-closure separations, ``D`` and ``eta``.  An explicit
    ``epsilon`` overrides the choice; with ``strict=False`` an override that
    breaks the separation bound is kept and recorded in ``violations``.
    """
    D = Fraction(D)
    if D <= 0:
        raise ValueError("D must be positive")
    expansivity = SHIFT_EXPANSIVITY
    seps = {
        "t0-t1": orbit_closure_distance(t0, t1, horizon),
        "t0-s": orbit_closure_distance(t0, s, horizon),
        "t1-s": orbit_closure_distance(t1, s, horizon),
    }
    if min(seps.values()) <= 0:
        raise ValueError("orbit closures not separated at tested precision")
    bound = min(min(seps.values()), D, expansivity.eta)
    violations = []
    if epsilon is None:
        eps = _epsilon_below(bound)
    else:
        eps = Fraction(epsilon)
        if eps <= 0:
            raise ValueError("epsilon must be positive")
        if not 2 * eps < bound:
            msg = f"2*epsilon = {2 * eps} is not below the separation bound {bound}"
            if strict:
                raise ValueError(msg)
            violations.append(msg)
            warnings.warn(msg)
    N = relaxation_time(eps / 2)
    M = relaxation_time(eps / 8)
    if P is None:
        P = N + 3
    if P <= N:
        raise ValueError(f"block length P = {P} must exceed N = {N}")
    return SystemParams(t0, t1, s, xi, D, eps, N, P, M, expansivity, seps, tuple(violations))


def default_params(**overrides) -> SystemParams:
    inst = default_instance()
    inst.update({k: v for k, v in overrides.items() if k in inst})
    rest = {k: v for k, v in overrides.items() if k not in inst}
    return derive_params(inst["t0"], inst["t1"], inst["s"], inst["xi"], **rest)


# --- E_beta -------------------------------------------------------------------

def _e_beta_segments(beta: SymbolicSequence, params: SystemParams) -> Iterator[Segment]:
    for i in itertools.count():
        a = params.a(i)
        yield Segment(params.t(beta.symbol_at(i)), 0, a, a + params.P, a + params.stride - 1)


def e_beta_witness(beta: SymbolicSequence, params: SystemParams) -> SymbolicSequence:
    """Canonical member of E_beta: ``t_{beta_i}`` written on ``[a_i, a_{i+1} - 1]``."""
    if beta.alphabet != BINARY:
        raise ValueError("beta must be a binary sequence")
    generator = {"name": "e_beta", "beta": to_descriptor(beta), "params": params.to_json()}
    schedule = SpecSchedule(_e_beta_segments(beta, params), gap=params.N, window=params.N,
                            generator=generator)
    return scheduled_sequence(schedule, params.t0.alphabet)


@register_generator("e_beta")
def _load_e_beta(gen: dict) -> SymbolicSequence:
    return e_beta_witness(from_descriptor(gen["beta"]), SystemParams.from_json(gen["params"]))


@dataclass(frozen=True)
class EMembershipVerdict:
    member: bool
    first_failing_block: int | None
    margin: Fraction


def is_in_E(x: SymbolicSequence, beta: SymbolicSequence, params: SystemParams, depth: int) -> EMembershipVerdict:
    """Check the E_beta condition on blocks ``0 .. depth-1``.

    Each distance is the partial sum certified to within epsilon/20; a block
    passes when every such value is at most epsilon/2.  ``margin`` is the
    smallest slack ``epsilon/2 - d`` seen over the blocks examined.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    half = params.epsilon / 2
    k = terms_for_precision(params.epsilon / 20)
    margin = None
    for i in range(depth):
        a, b = params.a(i), params.b(i)
        xw = x.word(a, b + k)
        tw = params.t(beta.symbol_at(i)).word(0, b - a + k)
        worst = max(_weighted(mismatch(xw[j:j + k], tw[j:j + k])) for j in range(b - a + 1))
        slack = half - worst
        margin = slack if margin is None else min(margin, slack)
        if worst > half:
            return EMembershipVerdict(False, i, margin)
    return EMembershipVerdict(True, None, margin)


# --- H_beta proxy ----------------------------------------------------------------

@dataclass(frozen=True)
class EnumerationEntry:
    sequence: SymbolicSequence
    row: int
    column: int
    beta_shift: int


@dataclass(frozen=True, eq=False)
class WitnessEnumeration:
    beta: SymbolicSequence
    params: SystemParams
    shift_depth: int
    orbit_depth: int
    entries: tuple
    warnings: tuple = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def diagonal_order(rows: int, columns: int) -> list[tuple[int, int]]:
    """(row, column) pairs, rows 1-based, listed by anti-diagonals:
    (1,0), (1,1), (2,0), (1,2), (2,1), (3,0), ..."""
    cells = [(r, c) for r in range(1, rows + 1) for c in range(columns)]
    return sorted(cells, key=lambda rc: (rc[0] + rc[1], rc[0]))


def _recurrence_warnings(beta: SymbolicSequence, horizon: int) -> list[str]:
    notes = []
    if least_period_upto(beta, horizon) is not None:
        notes.append(f"beta looks periodic up to horizon {horizon}")
    probe = max(1, min(16, horizon // 10))
    head = beta.word(0, probe).tolist()
    late = beta.word(horizon // 2, horizon).tolist()
    if not any(late[j:j + probe] == head for j in range(len(late) - probe + 1)):
        notes.append(f"beta's length-{probe} prefix does not recur before horizon {horizon}")
    return notes


def h_beta_proxy(beta: SymbolicSequence, params: SystemParams, shift_depth: int = 6, orbit_depth: int = 2,
                 horizon: int = 1000) -> WitnessEnumeration:
    """Representatives ``shift(e_beta_witness(shift(beta, k)), j (N+P))`` for
    ``k < shift_depth`` and ``j < orbit_depth``.

    Entry (k, j) sits in row ``k + 1`` and column ``j``; entries are listed by
    anti-diagonals.  Shifts of beta stand in for its omega-limit set, which
    is only faithful for recurrent beta, so periodic or non-recurrent inputs
    are accepted with a warning.
    """
    if shift_depth < 1 or orbit_depth < 1:
        raise ValueError("enumeration depths must be positive")
    notes = _recurrence_warnings(beta, horizon)
    for note in notes:
        warnings.warn(note)
    witnesses = {k: e_beta_witness(shift(beta, k), params) for k in range(shift_depth)}
    entries = tuple(
        EnumerationEntry(shift(witnesses[row - 1], col * params.stride), row, col, row - 1 + col)
        for row, col in diagonal_order(shift_depth, orbit_depth))
    return WitnessEnumeration(beta, params, shift_depth, orbit_depth, entries, tuple(notes))


# --- p_beta ----------------------------------------------------------------------

def p_beta_blocks(params: SystemParams, enumeration: WitnessEnumeration) -> Iterator[tuple[SymbolicSequence, int]]:
    """The block stream of p_beta.

    One xi-block, then forever: the next enumeration entry (cycling through
    the list) followed for ``b_row`` iterates, then the n-th visit to ``s``
    followed for ``n - 1`` iterates (n = 1, 2, 3, ...).
    """
    yield params.xi, 0
    visit = 0
    for entry in itertools.cycle(enumeration.entries):
        visit += 1
        yield entry.sequence, params.b(entry.row)
        yield params.s, visit - 1


def build_p_beta(beta: SymbolicSequence, params: SystemParams, enumeration: WitnessEnumeration,
                 filler: FillerPolicy = DEFAULT_FILLER) -> SymbolicSequence:
    """Spec-pattern point shadowing :func:`p_beta_blocks` within epsilon/8."""
    if not enumeration.entries:
        raise ValueError("enumeration is empty")
    if dumps(to_descriptor(enumeration.beta)) != dumps(to_descriptor(beta)):
        raise ValueError("enumeration was built for a different beta")
    if not enumeration.params.same_as(params):
        raise ValueError("enumeration was built with different parameters")
    generator = {
        "name": "p_beta",
        "beta": to_descriptor(beta),
        "params": params.to_json(),
        "shift_depth": enumeration.shift_depth,
        "orbit_depth": enumeration.orbit_depth,
        "filler": filler_to_json(filler),
    }
    p, _ = build_spec_pattern(p_beta_blocks(params, enumeration), params.M, params.epsilon / 8,
                              filler=filler, generator=generator, alphabet=params.t0.alphabet)
    return p


@register_generator("p_beta")
def _load_p_beta(gen: dict) -> SymbolicSequence:
    beta = from_descriptor(gen["beta"])
    params = SystemParams.from_json(gen["params"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        enum = h_beta_proxy(beta, params, int(gen["shift_depth"]), int(gen["orbit_depth"]))
    return build_p_beta(beta, params, enum, filler_from_json(gen["filler"]))


def construction_params(x: SymbolicSequence) -> SystemParams | None:
    """Parameters recorded in a constructed point's generator recipe, if any."""
    schedule = getattr(x.tail, "schedule", None)
    gen = getattr(schedule, "generator", None)
    if not gen or "params" not in gen:
        return None
    return SystemParams.from_json(gen["params"])


def construct_pair(beta: SymbolicSequence, gamma: SymbolicSequence, params: SystemParams,
                   shift_depth: int = 6, orbit_depth: int = 2):
    """``(p_beta, enum_beta, p_gamma, enum_gamma)`` for one parameter set."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        eb = h_beta_proxy(beta, params, shift_depth, orbit_depth)
        eg = h_beta_proxy(gamma, params, shift_depth, orbit_depth)
    return build_p_beta(beta, params, eb), eb, build_p_beta(gamma, params, eg), eg
