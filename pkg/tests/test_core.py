import itertools
import random

import pytest
from hypothesis import given, strategies as st

from bansync.core import (
    LIMITS, Network, NonMonotoneNetwork, Sign, SizeCeiling, check_size, flip, format_network, frustrations,
    hamming, instabilities, is_locally_monotone, parse_config, raise_limits, to_bits,
)
from conftest import CONTREX, EXFREE, configs


def oracle_signs(funcs, n):
    """Arc signs straight from the definition: compare f_i(x) with f_i(x with x_j flipped)."""
    out = {}
    for i, f in enumerate(funcs):
        for j in range(n):
            up = down = False
            for _, b in configs(n):
                if b[j]:
                    continue
                hi = list(b)
                hi[j] = 1
                lo_v, hi_v = f(b), f(tuple(hi))
                up |= lo_v < hi_v
                down |= lo_v > hi_v
            if up and down:
                out[(j, i)] = 0
            elif up:
                out[(j, i)] = 1
            elif down:
                out[(j, i)] = -1
    return out


def random_funcs(n, rng):
    tables = [rng.getrandbits(1 << n) for _ in range(n)]
    return tables, [lambda b, t=t: (t >> sum(v << k for k, v in enumerate(b))) & 1 for t in tables]


# -- configurations -----------------------------------------------------------

def test_bits_round_trip():
    for n in range(1, 6):
        for x in range(1 << n):
            assert parse_config(to_bits(x, n)) == x


def test_index_zero_is_leftmost():
    assert to_bits(1, 4) == "1000"
    assert parse_config("0011") == 0b1100


@pytest.mark.parametrize("bad", ["", "012", "1 1x"])
def test_parse_config_rejects(bad):
    with pytest.raises(ValueError):
        parse_config(bad)


def test_parse_config_length():
    with pytest.raises(ValueError):
        parse_config("101", 4)


def test_flip_example():
    assert flip(parse_config("1100"), {0, 1}, 4) == parse_config("0000")
    with pytest.raises(IndexError):
        flip(0, {4}, 4)


@given(st.integers(0, 255), st.sets(st.integers(0, 7)))
def test_flip_involution(x, W):
    assert flip(flip(x, W, 8), W, 8) == x


@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63))
def test_hamming_is_a_metric(x, y, z):
    dxy, d = hamming(x, y)
    assert d == len(dxy)
    assert (d == 0) == (x == y)
    assert hamming(y, x) == (dxy, d)
    assert d <= hamming(x, z)[1] + hamming(z, y)[1]


def test_hamming_strings():
    assert hamming("1100", "0000") == (frozenset({0, 1}), 2)
    with pytest.raises(ValueError):
        hamming("110", "0000")


# -- structure ---------------------------------------------------------------

def test_exfree_signs(exfree):
    st_ = exfree.structure
    assert st_.signs == {(0, 0): Sign.POSITIVE, (1, 1): Sign.POSITIVE,
                         (1, 0): Sign.NEGATIVE, (0, 1): Sign.NEGATIVE}
    assert st_.is_monotone


def test_xor_is_nonmonotone():
    net = Network.from_expressions(["x0 ^ x1", "x1"])
    ok, bad = is_locally_monotone(net)
    assert not ok and bad == [(0, 0), (1, 0)]
    assert net.structure.signs[(1, 1)] is Sign.POSITIVE
    with pytest.raises(NonMonotoneNetwork):
        frustrations(net, 0)


def test_absent_arcs_are_not_stored():
    net = Network.from_expressions(["x1", "1"])
    assert (0, 0) not in net.structure.signs
    assert net.structure.sign(0, 0) == 0
    assert net.structure.arcs == [(1, 0)]


def test_signs_match_definition_random():
    rng = random.Random(7)
    for n in (1, 2, 3, 4):
        for _ in range(40):
            tables, funcs = random_funcs(n, rng)
            net = Network(n, tuple(tables))
            assert {a: int(s) for a, s in net.structure.signs.items()} == oracle_signs(funcs, n)


def test_signs_invariant_under_rewrites():
    a = Network.from_expressions(["!(x1 | x2)", "x0", "x1 & 1"])
    b = Network.from_expressions(["!x1 & !x2", "x0 | 0", "x1"])
    assert a.tables == b.tables
    assert a.structure.signs == b.structure.signs


def test_contrex_instability_1100(contrex):
    rep = instabilities(contrex, parse_config("1100"))
    assert rep.unstable == {0, 1}
    assert rep.stable == {2, 3}
    assert rep.momentum == 2


def test_instabilities_match_definition():
    rng = random.Random(3)
    for n in (2, 3, 4):
        tables, funcs = random_funcs(n, rng)
        net = Network(n, tuple(tables))
        for x, b in configs(n):
            want = {i for i, f in enumerate(funcs) if f(b) != b[i]}
            assert instabilities(net, x).unstable == want


def test_frustrations_exfree(exfree):
    assert frustrations(exfree, parse_config("11")).frustrated == {(1, 0), (0, 1)}
    assert frustrations(exfree, parse_config("10")).frustrated == set()


def test_negative_loop_frustration():
    net = Network.from_expressions(["!x0"])
    assert frustrations(net, 0).frustrated == {(0, 0)}
    assert frustrations(net, 1).frustrated == {(0, 0)}


def test_frustration_definition_random():
    # s(a) = 1 if a else -1; arc frustrated iff s(x_j) s(x_i) = -sign
    rng = random.Random(11)
    from bansync.search import monotone_tables
    tables = monotone_tables(3)
    for _ in range(50):
        net = Network(3, tuple(rng.choice(tables) for _ in range(3)))
        for x, b in configs(3):
            want = {(j, i) for (j, i), s in net.structure.signs.items()
                    if (1 if b[j] else -1) * (1 if b[i] else -1) == -int(s)}
            assert frustrations(net, x).frustrated == want


# -- text format ---------------------------------------------------------------

def test_format_round_trip():
    rng = random.Random(5)
    for n in (1, 2, 3, 4):
        for _ in range(25):
            net = Network(n, tuple(rng.getrandbits(1 << n) for _ in range(n)))
            assert Network.from_text(format_network(net)).tables == net.tables


def test_from_text_matches_expressions():
    text = "n = 4\n" + "".join(f"{i}: {e}\n" for i, e in enumerate(CONTREX))
    assert Network.from_text(text).tables == Network.from_expressions(CONTREX).tables


def test_from_callables():
    net = Network.from_callables(2, [lambda b: b[0] and not b[1], lambda b: b[1] and not b[0]])
    assert net.tables == Network.from_expressions(EXFREE).tables


# -- ceilings ------------------------------------------------------------------

def test_ceilings(restore_limits):
    check_size(10, "eig")
    with pytest.raises(SizeCeiling):
        check_size(11, "eig")
    with pytest.raises(SizeCeiling):
        check_size(17, "sig")
    raise_limits(12)
    check_size(12, "eig")
    with pytest.raises(SizeCeiling):
        raise_limits(21)
    with pytest.raises(SizeCeiling):
        Network(21, (0,) * 21)
    assert LIMITS.hard == 20


# -- loop signs and frustration inclusion ----------------------------------------

def lemma1_holds(net):
    st_ = net.structure
    um = net.unstable_masks
    for i in range(net.n):
        for x in range(net.size):
            a, b = (um[x] >> i) & 1, (um[x ^ (1 << i)] >> i) & 1
            if not a and not b and st_.sign(i, i) != 1:
                return False
            if a and b and st_.sign(i, i) != -1:
                return False
    return True


def test_lemma1_monotone_random():
    from bansync.search import monotone_tables
    rng = random.Random(1)
    for n in (2, 3, 4):
        tables = monotone_tables(n)
        for _ in range(100):
            assert lemma1_holds(Network(n, tuple(rng.choice(tables) for _ in range(n))))


def test_lemma1_needs_a_sign_on_the_loop():
    # f0 = x0 xor x1: automaton 0 is stable in 00 and 10, but the loop has no sign
    net = Network.from_expressions(["x0 ^ x1", "x1"])
    assert not lemma1_holds(net)


def test_lemma2_subset_form_counterexample():
    # f0 = !x0 | !x1, x = 010 and y = 100: same frustrations into 0, yet 0 turns stable
    net = Network.from_expressions(["!x0 | !x1", "x1", "x2"])
    x, y = parse_config("010"), parse_config("100")
    into0 = {(j, i) for (j, i) in net.structure.signs if i == 0}
    fx = frustrations(net, x).frustrated & into0
    fy = frustrations(net, y).frustrated & into0
    assert fx == fy == {(0, 0)}
    assert 0 in instabilities(net, x).unstable
    assert 0 not in instabilities(net, y).unstable


def test_lemma2_strict_form_counterexample():
    net = Network.from_expressions(["x1 | x2 | x3", "x1", "x2", "x3"])
    x, y = parse_config("0100"), parse_config("1010")
    into0 = {(j, i) for (j, i) in net.structure.signs if i == 0}
    fx = frustrations(net, x).frustrated & into0
    fy = frustrations(net, y).frustrated & into0
    assert fx < fy
    assert 0 in instabilities(net, x).unstable
    assert 0 not in instabilities(net, y).unstable


def test_lemma2_same_state_holds_exhaustive_n2():
    from bansync.search import monotone_tables
    for tables in itertools.product(monotone_tables(2), repeat=2):
        net = Network(2, tables)
        um, fr = net.unstable_masks, net.frustration_masks
        for i in range(2):
            into = sum(1 << (j * 2 + i) for j in range(2))
            for x in range(4):
                if not (um[x] >> i) & 1:
                    continue
                for y in range(4):
                    if (x ^ y) >> i & 1 == 0 and fr[x] & into & ~fr[y] == 0:
                        assert (um[y] >> i) & 1
