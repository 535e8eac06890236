"""Registry of randomized property checks, one per construction step.

Each lemma receives the shared :class:`SuiteContext` and its own RNG, seeded
from the run seed and the lemma name, so verdicts do not depend on thread
scheduling.  Failures carry full input descriptors so they can be re-run.
"""
from __future__ import annotations

import random
import threading
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .config import RunConfig
from .core import (SymbolicSequence, check_expansive_step, dist_bounds, exact_dist, least_period_upto,
                   periodic, prepend, shift)
from .descriptors import dumps, fraction_to_str, to_descriptor
from .family import (GOLDEN, SILVER, divergence_length, first_absent_prefix, generate_family,
                     sturmian_sequence)
from .omega import RecurrenceParams, omega_cylinders, recurs, verify_exclusion
from .scramble import (SystemParams, build_p_beta, construct_pair, derive_params, e_beta_witness,
                       h_beta_proxy, is_in_E)
from .specification import SpecInterval, build_isp_witness, build_spec_pattern, relaxation_time

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Outcome:
    verdict: str
    checked: int = 0
    detail: str = ""
    counterexample: dict | None = None

    def to_json(self) -> dict:
        data = {"verdict": self.verdict, "checked": self.checked, "detail": self.detail}
        if self.counterexample is not None:
            data["counterexample"] = self.counterexample
        return data


def _fail(checked: int, detail: str, **payload) -> Outcome:
    return Outcome(FAIL, checked, detail, payload)


class SuiteContext:
    """Parameters plus lazily built points shared between lemmas."""

    def __init__(self, config: RunConfig, params: SystemParams):
        self.config = config
        self.params = params
        self.rp = config.recurrence()
        self.beta_spec, self.gamma_spec = SILVER, GOLDEN
        self.beta = sturmian_sequence(SILVER)
        self.gamma = sturmian_sequence(GOLDEN)
        self._lock = threading.Lock()
        self._pairs: dict = {}

    def pair(self, shift_depth: int | None = None):
        """``(p_beta, enum_beta, p_gamma, enum_gamma)`` for the context's two slopes."""
        depth = self.config.shift_depth if shift_depth is None else shift_depth
        with self._lock:
            if depth not in self._pairs:
                self._pairs[depth] = construct_pair(self.beta, self.gamma, self.params, depth,
                                                    self.config.orbit_depth)
            return self._pairs[depth]


LEMMAS: dict[str, Callable[[SuiteContext, random.Random], Outcome]] = {}


def lemma(name: str):
    def deco(fn):
        LEMMAS[name] = fn
        return fn
    return deco


def _random_periodic(rng: random.Random, max_len: int = 8, max_prefix: int = 4) -> SymbolicSequence:
    word = [rng.randrange(2) for _ in range(rng.randint(1, max_len))]
    prefix = [rng.randrange(2) for _ in range(rng.randint(0, max_prefix))]
    return periodic(word, prefix)


def _random_delta(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 7), 1 << rng.randint(3, 10))


# --- metric and specification ---------------------------------------------------

@lemma("closeness")
def _closeness(ctx: SuiteContext, rng: random.Random) -> Outcome:
    eta, lam = ctx.params.expansivity.eta, ctx.params.expansivity.lam
    checked = 0
    for _ in range(200):
        x, y = _random_periodic(rng, 12, 6), _random_periodic(rng, 12, 6)
        if not check_expansive_step(x, y, ctx.params.expansivity):
            return _fail(checked, "expansive step violated", x=to_descriptor(x), y=to_descriptor(y))
        checked += 1
    for j in range(41):
        head = [rng.randrange(2) for _ in range(j + 1)]
        p = periodic([rng.randrange(2) for _ in range(rng.randint(1, 6))], head)
        q = periodic([rng.randrange(2) for _ in range(rng.randint(1, 6))], head)
        d = exact_dist(p, q)
        if d > eta / lam ** j:
            return _fail(checked, f"d(p,q) = {d} exceeds eta*lambda^-{j}", p=to_descriptor(p),
                         q=to_descriptor(q), j=j)
        checked += 1
    return Outcome(PASS, checked, "expansive steps and closeness bound j <= 40")


def _check_controlled(y: SymbolicSequence, target: SymbolicSequence, a: int, b: int, delta: Fraction,
                      target_offset: int = 0) -> int | None:
    """First j in [a, b] with certified d(shift^j y, shift^(j-a+offset) target) not below delta."""
    for j in range(a, b + 1):
        tj = shift(target, j - a + target_offset)
        _, hi = dist_bounds(shift(y, j), tj, delta / 10)
        if hi >= delta:
            return j
    return None


@lemma("isp-witness")
def _isp_witness(ctx: SuiteContext, rng: random.Random) -> Outcome:
    checked = 0
    for trial in range(40):
        delta = _random_delta(rng)
        n = relaxation_time(delta)
        blocks = rng.randint(1, 6)
        targets, intervals, a = [], [], rng.randint(0, 5)
        for _ in range(blocks):
            b = a + rng.randint(0, 8)
            targets.append(_random_periodic(rng))
            intervals.append(SpecInterval(a, b))
            a = b + n + 1 + rng.randint(0, 4)
        lazy = trial % 2 == 1
        y = build_isp_witness(iter(targets) if lazy else targets,
                              iter(intervals) if lazy else intervals, delta)
        for x, iv in zip(targets, intervals):
            bad = _check_controlled(y, x, iv.a, iv.b, delta, target_offset=iv.a)
            if bad is not None:
                return _fail(checked, f"index {bad} not delta-close", delta=fraction_to_str(delta),
                             targets=[to_descriptor(t) for t in targets],
                             intervals=[[v.a, v.b] for v in intervals])
            checked += 1
    return Outcome(PASS, checked, "every controlled index within delta")


@lemma("spec-pattern")
def _spec_pattern(ctx: SuiteContext, rng: random.Random) -> Outcome:
    checked = 0
    for _ in range(30):
        delta = _random_delta(rng)
        window = relaxation_time(delta)
        M = window + rng.randint(0, 4)
        blocks = [(_random_periodic(rng), rng.randint(0, 10)) for _ in range(rng.randint(1, 6))]
        p, schedule = build_spec_pattern(blocks, M, delta)
        for seg, (z, c) in zip(schedule.all_segments(), blocks):
            if seg.b - seg.a != c:
                return _fail(checked, "controlled interval has wrong length", M=M, delta=fraction_to_str(delta))
            bad = _check_controlled(p, z, seg.a, seg.b, delta)
            if bad is not None:
                return _fail(checked, f"index {bad} not delta-close", M=M, delta=fraction_to_str(delta),
                             blocks=[{"z": to_descriptor(z), "c": c} for z, c in blocks])
            checked += 1
    return Outcome(PASS, checked, "pattern blocks shadowed within delta")


# --- E_beta --------------------------------------------------------------------

def _random_beta_pair(rng: random.Random, blocks: int = 10) -> tuple[SymbolicSequence, SymbolicSequence]:
    beta = [rng.randrange(2) for _ in range(blocks)]
    gamma = list(beta)
    i = rng.randrange(blocks)
    gamma[i] ^= 1
    tail = [rng.randrange(2) for _ in range(rng.randint(1, 4))]
    return periodic(tail, beta), periodic(tail, gamma)


@lemma("e-disjointness")
def _e_disjointness(ctx: SuiteContext, rng: random.Random) -> Outcome:
    params, depth, checked = ctx.params, 10, 0
    for _ in range(30):
        beta, gamma = _random_beta_pair(rng, depth)
        candidates = [e_beta_witness(beta, params), e_beta_witness(gamma, params), _random_periodic(rng, 16)]
        for x in candidates:
            in_b = is_in_E(x, beta, params, depth).member
            in_g = in_b and is_in_E(x, gamma, params, depth).member
            if in_g:
                return _fail(checked, "a point passes both E memberships", x=to_descriptor(x),
                             beta=to_descriptor(beta), gamma=to_descriptor(gamma), depth=depth,
                             params=params.to_json())
            checked += 1
    return Outcome(PASS, checked, "no point in two E sets")


@lemma("non-periodicity")
def _non_periodicity(ctx: SuiteContext, rng: random.Random) -> Outcome:
    family = generate_family(ctx.config.family_size, seed=rng.randrange(1 << 32),
                             separation=ctx.config.separation)
    specs = [ctx.beta_spec, ctx.gamma_spec] + family.members
    horizon = min(ctx.config.horizon, 10_000)
    for n, spec in enumerate(specs):
        w = e_beta_witness(sturmian_sequence(spec), ctx.params)
        p = least_period_upto(w, horizon)
        if p is not None:
            return _fail(n, f"witness has period {p} up to {horizon}", slope=spec.slope,
                         params=ctx.params.to_json())
    return Outcome(PASS, len(specs), f"no period up to horizon {horizon}")


@lemma("shift-invariance")
def _shift_invariance(ctx: SuiteContext, rng: random.Random) -> Outcome:
    params, checked = ctx.params, 0
    betas = [ctx.beta, ctx.gamma, _random_periodic(rng, 12, 6)]
    for beta in betas:
        w = e_beta_witness(beta, params)
        for k in range(21):
            v = is_in_E(shift(w, params.a(k)), shift(beta, k), params, 10)
            if not v.member:
                return _fail(checked, f"shift by a_{k} leaves E", beta=to_descriptor(beta), k=k,
                             params=params.to_json())
            checked += 1
    return Outcome(PASS, checked, "shift(E_beta witness, a_k) in E_{shift(beta, k)} for k <= 20")


@lemma("separation")
def _separation(ctx: SuiteContext, rng: random.Random) -> Outcome:
    params, checked = ctx.params, 0
    cases = [(ctx.beta, ctx.gamma), (ctx.gamma, ctx.beta)]
    for beta, chi in cases:
        depth = first_absent_prefix(beta, chi)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            enum = h_beta_proxy(chi, params, ctx.config.shift_depth, ctx.config.orbit_depth)
        for entry in enum:
            if is_in_E(entry.sequence, beta, params, depth).member:
                return _fail(checked, "an H_chi entry lies in E_beta", beta=to_descriptor(beta),
                             chi=to_descriptor(chi), row=entry.row, column=entry.column, depth=depth)
            checked += 1
    return Outcome(PASS, checked, "enumeration entries miss the other E set")


# --- omega-limit proxies -----------------------------------------------------------

@lemma("inclusion")
def _inclusion(ctx: SuiteContext, rng: random.Random) -> Outcome:
    params, rp = ctx.params, ctx.rp
    pb, eb, pg, eg = ctx.pair()
    checked = 0
    for name, p, enum in (("p_beta", pb, eb), ("p_gamma", pg, eg)):
        for K in (params.stride, 2 * params.stride):
            words = [params.s.word(0, K)] + [e.sequence.word(0, K) for e in enum]
            cyl = omega_cylinders(p, K, rp)
            for w in words:
                if tuple(w.tolist()) not in cyl:
                    return _fail(checked, f"a required {K}-prefix does not recur in {name}",
                                 word="".join(map(str, w.tolist())), K=K, recurrence=rp.to_json())
                checked += 1
    return Outcome(PASS, checked, "s and every entry recur at depths N+P and 2(N+P)")


@lemma("exclusion")
def _exclusion(ctx: SuiteContext, rng: random.Random) -> Outcome:
    # cylinders must be long enough to contain a block word outside the other language
    L = divergence_length(ctx.beta, ctx.gamma)
    K = ctx.params.stride * L
    try:
        ctx.rp.check_depth(K)
    except ValueError as exc:
        return Outcome(SKIPPED, 0, f"exclusion depth {K} unavailable: {exc}")
    pb, eb, pg, eg = ctx.pair(shift_depth=max(L, ctx.config.shift_depth))
    if verify_exclusion(pb, eb, K, ctx.rp) or verify_exclusion(pg, eg, K, ctx.rp):
        return _fail(0, f"own enumeration does not recur at depth {K}; exclusion would be vacuous", K=K)
    for label, p, enum in (("p_gamma vs H_beta", pg, eb), ("p_beta vs H_gamma", pb, eg)):
        if not verify_exclusion(p, enum, K, ctx.rp):
            return _fail(1, f"{label}: an entry recurs at depth {K}", K=K, recurrence=ctx.rp.to_json())
    return Outcome(PASS, 2, f"exclusion both ways at depth {K} = (N+P) * {L}")


@lemma("prepend")
def _prepend(ctx: SuiteContext, rng: random.Random) -> Outcome:
    pb, _, _, _ = ctx.pair()
    checked = 0
    for _ in range(8):
        w = [rng.randrange(2) for _ in range(rng.randint(0, 20))]
        q = prepend(w, pb)
        for K in (2, ctx.params.stride):
            if omega_cylinders(q, K, ctx.rp.compensated(-len(w))) != omega_cylinders(pb, K, ctx.rp):
                return _fail(checked, "prepending changed the late cylinders", w=w, K=K)
            checked += 1
    return Outcome(PASS, checked, "late cylinders unchanged by prepending")


@lemma("density")
def _density(ctx: SuiteContext, rng: random.Random) -> Outcome:
    base = ctx.params
    centres, seen = [], set()
    while len(centres) < 5:
        xi = _random_periodic(rng, 8, 4)
        key = dumps(xi)
        if key not in seen:
            seen.add(key)
            centres.append(xi)
    for n, xi in enumerate(centres):
        params = derive_params(base.t0, base.t1, base.s, xi, D=base.D, P=base.P,
                               epsilon=base.epsilon, strict=False)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            enum = h_beta_proxy(ctx.beta, params, 1, 1)
        p = build_p_beta(ctx.beta, params, enum)
        _, hi = dist_bounds(p, xi, params.epsilon / 80)
        if not hi < params.epsilon / 8 or not hi < params.D:
            return _fail(n, f"p_beta not within epsilon/8 of xi (upper bound {hi})", xi=to_descriptor(xi))
    return Outcome(PASS, len(centres), "p_beta within epsilon/8 of each centre")


# --- runner ------------------------------------------------------------------------

@dataclass
class SuiteResult:
    seed: int
    verdicts: dict
    params: dict
    config: dict
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v["verdict"] != FAIL for v in self.verdicts.values())

    def payload(self) -> dict:
        """Deterministic part of the result."""
        return {"seed": self.seed, "params": self.params, "config": self.config,
                "lemmas": self.verdicts, "passed": self.passed}

    def to_json(self) -> dict:
        return {"result": self.payload(), "provenance": {"timing_seconds": self.timing}}


def select_lemmas(names=None) -> list[str]:
    if not names:
        return list(LEMMAS)
    unknown = [n for n in names if n not in LEMMAS]
    if unknown:
        raise KeyError(f"unknown lemma: {', '.join(unknown)}")
    return [n for n in LEMMAS if n in set(names)]


def _run_one(name: str, ctx: SuiteContext, seed: int) -> tuple[Outcome, float]:
    rng = random.Random(f"{seed}:{name}")
    t0 = time.perf_counter()
    try:
        out = LEMMAS[name](ctx, rng)
    except Exception as exc:  # a crash is a failed check, reported with its message
        out = Outcome(FAIL, 0, f"{type(exc).__name__}: {exc}")
    return out, round(time.perf_counter() - t0, 6)


def run_suite(config: RunConfig, names=None, params: SystemParams | None = None,
              workers: int = 4) -> SuiteResult:
    selected = select_lemmas(names)
    params = config.params() if params is None else params
    ctx = SuiteContext(config, params)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {n: pool.submit(_run_one, n, ctx, config.seed) for n in selected}
        results = {n: futures[n].result() for n in selected}
    verdicts = {n: results[n][0].to_json() for n in selected}
    timing = {n: results[n][1] for n in selected}
    params_json = params.to_json()
    if params.violations:
        params_json["violations"] = list(params.violations)
    return SuiteResult(config.seed, verdicts, params_json, config.to_json(), timing)
