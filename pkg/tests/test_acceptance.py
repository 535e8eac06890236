"""Acceptance criteria, one check each, with their runtime budgets.

Run directly (``python tests/test_acceptance.py``) for one PASS/FAIL line per
criterion, or under pytest where each criterion is a test.
"""
import itertools
import json
import random
import sys
import time
import warnings
from fractions import Fraction

import pytest

from omega_scramble.cli import main
from omega_scramble.core import dist_bounds, exact_dist, factor_complexity, least_period_upto, periodic, prepend, shift
from omega_scramble.descriptors import dumps, from_descriptor
from omega_scramble.family import GOLDEN, SILVER, generate_family, is_balanced, sturmian_sequence
from omega_scramble.omega import RecurrenceParams, omega_cylinders, verify_exclusion, verify_scramble_pair
from omega_scramble.scramble import (SystemParams, build_p_beta, construct_pair, default_params, derive_params,
                                     e_beta_witness, h_beta_proxy, is_in_E)
from omega_scramble.specification import SpecInterval, build_isp_witness, relaxation_time

PARAMS = default_params()


def rand_word(rng, lo, hi):
    return [rng.randrange(2) for _ in range(rng.randint(lo, hi))]


def criterion_1():
    rng = random.Random(1)
    bad = 0
    for _ in range(1000):
        x = periodic(rand_word(rng, 1, 8), rand_word(rng, 64, 64))
        y = periodic(rand_word(rng, 1, 8), rand_word(rng, 64, 64))
        if rng.random() < 0.5:
            y = prepend(x.word(0, 1).tolist(), shift(y, 1))
        d = exact_dist(x, y)
        if d < 1 and exact_dist(shift(x), shift(y)) != 2 * d:
            bad += 1
    eta, lam = PARAMS.expansivity.eta, PARAMS.expansivity.lam
    tight = 0
    for j in range(41):
        for _ in range(5):
            head = rand_word(rng, j + 1, j + 1)
            tail = rand_word(rng, 1, 6)
            other = [1 - s for s in tail] if rng.random() < 0.3 else rand_word(rng, 1, 6)
            p, q = periodic(tail, head), periodic(other, head)
            d = exact_dist(p, q)
            if d > eta / lam ** j:
                bad += 1
            tight += d == eta / lam ** j
    return bad == 0, f"{bad} violations, {tight} closeness cases at equality", 5


def _check_block(y, x, iv, delta):
    for j in range(iv.a, iv.b + 1):
        _, hi = dist_bounds(shift(y, j), shift(x, j), delta / 10)
        if not hi < delta:
            return False
    return True


def criterion_2():
    rng = random.Random(2)
    bad = checked = 0
    for inst in range(100):
        delta = Fraction(rng.randint(1, 7), 1 << rng.randint(3, 9))
        n = relaxation_time(delta)
        lazy = inst % 2 == 0
        count = 50 if lazy else rng.randint(1, 8)
        seed = rng.randrange(1 << 30)

        def stream(seed=seed, n=n):
            r = random.Random(seed)
            a = r.randint(0, 4)
            while True:
                b = a + r.randint(0, 8)
                yield periodic(rand_word(r, 1, 6), rand_word(r, 0, 3)), SpecInterval(a, b)
                a = b + n + 1 + r.randint(0, 5)

        pairs = list(itertools.islice(stream(), count))
        if lazy:
            src = stream()
            y = build_isp_witness((x for x, _ in src), (iv for _, iv in stream()), delta)
        else:
            y = build_isp_witness([x for x, _ in pairs], [iv for _, iv in pairs], delta)
        for x, iv in pairs:
            checked += 1
            if not _check_block(y, x, iv, delta):
                bad += 1
    return bad == 0, f"{bad} unsound blocks out of {checked}", 10


def _first_difference(a, b, n):
    return next(i for i in range(n) if a.symbol_at(i) != b.symbol_at(i))


def criterion_3():
    rng = random.Random(3)
    ok = (PARAMS.epsilon, PARAMS.N, PARAMS.P) == (Fraction(1, 4), 5, 8)
    detail = []
    for beta in (sturmian_sequence(SILVER), sturmian_sequence(GOLDEN), periodic(rand_word(rng, 5, 20))):
        if not is_in_E(e_beta_witness(beta, PARAMS), beta, PARAMS, 50).member:
            ok = False
            detail.append("witness not a member at depth 50")
    wrong = 0
    for _ in range(100):
        head = rand_word(rng, 10, 10)
        other = list(head)
        for i in rng.sample(range(10), rng.randint(1, 3)):
            other[i] ^= 1
        tail = rand_word(rng, 1, 5)
        beta, gamma = periodic(tail, head), periodic(tail, other)
        v = is_in_E(e_beta_witness(beta, PARAMS), gamma, PARAMS, 10)
        if v.member or v.first_failing_block != _first_difference(beta, gamma, 10):
            wrong += 1
    if wrong:
        ok = False
        detail.append(f"{wrong} cross-membership mismatches")
    beta = sturmian_sequence(SILVER)
    w = e_beta_witness(beta, PARAMS)
    if not all(is_in_E(shift(w, PARAMS.a(k)), shift(beta, k), PARAMS, 10).member for k in range(21)):
        ok = False
        detail.append("shift invariance broken")
    return ok, "; ".join(detail) or "membership, cross-membership and shift invariance hold", 10


def criterion_4():
    specs = [SILVER, GOLDEN] + generate_family(8, seed=4).members
    bad = []
    for spec in specs:
        beta = sturmian_sequence(spec)
        if least_period_upto(e_beta_witness(beta, PARAMS), 10_000) is not None:
            bad.append(f"{spec.slope[:8]} witness periodic")
        for n in range(1, 13):
            if factor_complexity(beta, n, 10_000) != n + 1:
                bad.append(f"{spec.slope[:8]} complexity at {n}")
            if not is_balanced(beta, n, 10_000):
                bad.append(f"{spec.slope[:8]} unbalanced at {n}")
    return not bad, "; ".join(bad) or f"{len(specs)} slopes certified", 30


def criterion_5():
    rp = RecurrenceParams(horizon=100_000)
    pb, eb, pg, eg = construct_pair(sturmian_sequence(SILVER), sturmian_sequence(GOLDEN), PARAMS)
    rep = verify_scramble_pair(pb, pg, PARAMS, (13, 26), rp)
    excl = {K: (verify_exclusion(pg, eb, K, rp), verify_exclusion(pb, eg, K, rp)) for K in (13, 26)}
    ok = (rep.shared_cylinder_found and rep.exclusive_positive and rep.exclusive_monotone
          and all(rep.nonperiodic_witness) and all(a and b for a, b in excl.values()))
    detail = (f"shared={rep.shared_cylinder_found} exclusive={rep.exclusive_counts} "
              f"nonperiodic={rep.nonperiodic_witness} exclusion={excl}")
    return ok, detail, 60


def criterion_6():
    rng = random.Random(6)
    rp = RecurrenceParams(horizon=100_000)
    pb = construct_pair(sturmian_sequence(SILVER), sturmian_sequence(GOLDEN), PARAMS)[0]
    bad = 0
    base = {K: omega_cylinders(pb, K, rp) for K in (2, 13)}
    for _ in range(20):
        w = rand_word(rng, 0, 20)
        q = prepend(w, pb)
        for K in (2, 13):
            if omega_cylinders(q, K, rp.compensated(-len(w))) != base[K]:
                bad += 1
            # the uncompensated late window agrees as well: the transient is forgotten
            if omega_cylinders(q, K, rp) != base[K]:
                bad += 1
    centres, seen = [], set()
    while len(centres) < 5:
        xi = periodic(rand_word(rng, 1, 6), rand_word(rng, 0, 3))
        if dumps(xi) not in seen:
            seen.add(dumps(xi))
            centres.append(xi)
    far = 0
    for xi in centres:
        params = derive_params(PARAMS.t0, PARAMS.t1, PARAMS.s, xi)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            enum = h_beta_proxy(sturmian_sequence(SILVER), params)
        p = build_p_beta(sturmian_sequence(SILVER), params, enum)
        _, hi = dist_bounds(p, xi, params.epsilon / 80)
        if not hi < params.epsilon / 8:
            far += 1
    return bad == 0 and far == 0, f"{bad} prepend mismatches, {far} centres missed", 30


def _quiet_main(argv):
    import contextlib
    import io
    with contextlib.redirect_stdout(io.StringIO()) as out, contextlib.redirect_stderr(io.StringIO()):
        code = main(argv)
    return code, out.getvalue()


def criterion_7():
    code, out = _quiet_main(["lemma-suite", "--epsilon", "4", "--lemma", "e-disjointness", "--json"])
    verdict = json.loads(out)["result"]["lemmas"]["e-disjointness"]
    ce = verdict.get("counterexample") or {}
    replay = False
    if ce:
        params = SystemParams.from_json(ce["params"])
        x, beta, gamma = (from_descriptor(ce[k]) for k in ("x", "beta", "gamma"))
        replay = (is_in_E(x, beta, params, ce["depth"]).member and is_in_E(x, gamma, params, ce["depth"]).member)
    ok = code == 1 and verdict["verdict"] == "fail" and replay
    return ok, f"exit {code}, verdict {verdict['verdict']}, counterexample replays: {replay}", 5


def criterion_8():
    payloads = []
    for _ in range(2):
        code, out = _quiet_main(["lemma-suite", "--seed", "7", "--json"])
        payloads.append(json.dumps(json.loads(out)["result"], sort_keys=True).encode())
    return payloads[0] == payloads[1], f"payload sizes {[len(p) for p in payloads]}", None


CRITERIA = {
    1: ("metric and expansivity", criterion_1),
    2: ("ISP witness soundness", criterion_2),
    3: ("E_beta suite", criterion_3),
    4: ("non-periodicity and Sturmian signature", criterion_4),
    5: ("scrambled-pair pipeline", criterion_5),
    6: ("prepend and density", criterion_6),
    7: ("fault detection", criterion_7),
    8: ("determinism", criterion_8),
}


def evaluate(n):
    title, fn = CRITERIA[n]
    t0 = time.perf_counter()
    ok, detail, budget = fn()
    elapsed = time.perf_counter() - t0
    in_time = budget is None or elapsed < budget
    line = (f"criterion {n} ({title}): {'PASS' if ok and in_time else 'FAIL'} "
            f"[{elapsed:.2f}s{'' if budget is None else f' / {budget}s'}] {detail}")
    return ok and in_time, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = evaluate(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
