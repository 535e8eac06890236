import itertools
import random
import warnings
from fractions import Fraction

import pytest

from omega_scramble.core import constant, dist_bounds, exact_dist, periodic, prepend, shift
from omega_scramble.descriptors import dumps, loads
from omega_scramble.family import GOLDEN, SILVER, sturmian_sequence
from omega_scramble.scramble import (SystemParams, build_p_beta, construct_pair, default_params, derive_params,
                                     diagonal_order, e_beta_witness, h_beta_proxy, is_in_E, orbit_closure_distance,
                                     p_beta_blocks)
from omega_scramble.specification import build_spec_pattern

PARAMS = default_params()


def orbit_min(x_word, y_word):
    # oracle: minimum over every pair of rotations of the two cycles
    best = None
    for i in range(len(x_word)):
        for j in range(len(y_word)):
            d = exact_dist(periodic(x_word[i:] + x_word[:i]), periodic(y_word[j:] + y_word[:j]))
            best = d if best is None else min(best, d)
    return best


def test_default_params():
    p = PARAMS
    assert (p.epsilon, p.N, p.P, p.M, p.stride) == (Fraction(1, 4), 5, 8, 7, 13)
    assert p.separations == {"t0-t1": 2, "t0-s": Fraction(2, 3), "t1-s": Fraction(2, 3)}
    assert orbit_min([0], [0, 1]) == Fraction(2, 3)
    assert (p.a(3), p.b(3)) == (39, 47)


def test_params_round_trip():
    q = SystemParams.from_json(PARAMS.to_json())
    assert q.same_as(PARAMS)
    assert PARAMS.to_json()["epsilon"] == {"num": 1, "pow2": 2}


def test_derive_params_errors():
    with pytest.raises(ValueError):
        derive_params(constant(0), constant(0), periodic((0, 1)), periodic((0, 1, 1)))
    with pytest.raises(ValueError):
        default_params(epsilon=Fraction(1, 2))
    with pytest.raises(ValueError):
        default_params(P=5)
    with pytest.warns(UserWarning):
        p = default_params(epsilon=4, strict=False)
    assert p.violations


def test_orbit_distance_sampled_path():
    x, y = sturmian_sequence(SILVER), constant(1)
    d = orbit_closure_distance(x, y, horizon=64)
    assert 0 < d <= 2


def test_e_beta_witness_layout():
    w = e_beta_witness(periodic((0, 1)), PARAMS)
    assert w.word(0, 39).tolist() == [0] * 13 + [1] * 13 + [0] * 13
    zero = e_beta_witness(constant(0), PARAMS)
    assert zero.word(0, 500).tolist() == [0] * 500
    beta = sturmian_sequence(SILVER)
    w = e_beta_witness(beta, PARAMS)
    assert shift(w, PARAMS.a(1)).word(0, 1000).tolist() == e_beta_witness(shift(beta, 1), PARAMS).word(0, 1000).tolist()
    with pytest.raises(ValueError):
        e_beta_witness(periodic((0, 2)), PARAMS)


def test_e_beta_descriptor_round_trip():
    w = e_beta_witness(sturmian_sequence(GOLDEN), PARAMS)
    z = loads(dumps(w))
    assert dumps(z) == dumps(w)
    assert z.word(0, 5000).tolist() == w.word(0, 5000).tolist()


def test_membership_examples():
    beta, gamma = periodic((0, 1)), periodic((0, 0, 1, 1))
    assert is_in_E(e_beta_witness(beta, PARAMS), beta, PARAMS, 10).member
    v = is_in_E(e_beta_witness(beta, PARAMS), gamma, PARAMS, 10)
    assert not v.member and v.first_failing_block == 1
    v = is_in_E(PARAMS.s, beta, PARAMS, 3)
    assert not v.member and v.first_failing_block == 0
    assert is_in_E(e_beta_witness(beta, PARAMS), beta, PARAMS, 50).margin > 0


def brute_block_ok(x, t, a, b, eps, terms=8):
    # the block condition summed term by term, ``terms`` matching precision eps/20
    for j in range(a, b + 1):
        d = sum(Fraction(min(abs(x.symbol_at(j + i) - t.symbol_at(j - a + i)), 1), 2 ** i) for i in range(terms))
        if d > Fraction(eps) / 2:
            return False
    return True


def test_membership_matches_block_oracle():
    rng = random.Random(3)
    for _ in range(60):
        beta = periodic([rng.randrange(2) for _ in range(rng.randint(1, 5))])
        kind = rng.randrange(3)
        if kind == 0:
            x = periodic([rng.randrange(2) for _ in range(rng.randint(1, 30))])
        else:
            w = e_beta_witness(beta, PARAMS)
            head = w.word(0, 40).tolist()
            if kind == 2:
                head[rng.randrange(40)] ^= 1
            x = prepend(head, shift(w, 40))
        expect = all(brute_block_ok(x, PARAMS.t(beta.symbol_at(i)), PARAMS.a(i), PARAMS.b(i), PARAMS.epsilon)
                     for i in range(3))
        assert is_in_E(x, beta, PARAMS, 3).member == expect


def test_diagonal_order():
    assert diagonal_order(3, 3)[:6] == [(1, 0), (1, 1), (2, 0), (1, 2), (2, 1), (3, 0)]
    assert len(diagonal_order(4, 2)) == 8


def test_h_beta_proxy():
    beta = sturmian_sequence(SILVER)
    one = h_beta_proxy(beta, PARAMS, 1, 1)
    assert len(one) == 1
    assert one.entries[0].sequence.word(0, 500).tolist() == e_beta_witness(beta, PARAMS).word(0, 500).tolist()
    enum = h_beta_proxy(beta, PARAMS, 6, 2)
    for e in enum:
        assert is_in_E(e.sequence, shift(beta, e.beta_shift), PARAMS, 10).member
    # depth counted in blocks, as for membership
    by_row = {e.row: e.sequence.word(0, PARAMS.stride * 13 * 6).tolist() for e in enum if e.column == 0}
    assert len({tuple(v) for v in by_row.values()}) == 6


def test_h_beta_proxy_warns_on_periodic_beta():
    with pytest.warns(UserWarning, match="periodic"):
        enum = h_beta_proxy(periodic((0, 1)), PARAMS, 2, 1)
    assert enum.warnings


def test_p_beta_shape():
    beta = sturmian_sequence(GOLDEN)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        enum = h_beta_proxy(beta, PARAMS, 6, 2)
    p = build_p_beta(beta, PARAMS, enum)
    _, hi = dist_bounds(p, PARAMS.xi, PARAMS.epsilon / 80)
    assert hi < PARAMS.epsilon / 8
    first = enum.entries[0]
    # block 0 is xi with c = 0, so block 1 starts at a = 0 + M
    a1 = PARAMS.M
    n = PARAMS.b(first.row) + 1
    assert p.word(a1, a1 + n).tolist() == first.sequence.word(0, n).tolist()
    blocks = list(itertools.islice(p_beta_blocks(PARAMS, enum), 8))
    assert [c for _, c in blocks[2::2]] == [0, 1, 2]
    ref, _ = build_spec_pattern(list(itertools.islice(p_beta_blocks(PARAMS, enum), 200)), PARAMS.M,
                                PARAMS.epsilon / 8)
    assert ref.word(0, 5000).tolist() == p.word(0, 5000).tolist()


def test_p_beta_round_trip_and_checks():
    pb, eb, pg, eg = construct_pair(sturmian_sequence(SILVER), sturmian_sequence(GOLDEN), PARAMS)
    text = dumps(pb)
    q = loads(text)
    assert dumps(q) == text
    assert q.word(0, 20_000).tolist() == pb.word(0, 20_000).tolist()
    with pytest.raises(ValueError):
        build_p_beta(sturmian_sequence(GOLDEN), PARAMS, eb)
    other = default_params(P=9)
    with pytest.raises(ValueError):
        build_p_beta(sturmian_sequence(SILVER), other, eb)
    with pytest.raises(ValueError, match="empty"):
        build_p_beta(sturmian_sequence(SILVER), PARAMS, type(eb)(eb.beta, PARAMS, 1, 1, ()))
