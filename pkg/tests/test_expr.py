import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bansync.expr import ParseError, parse_expression, parse_network_text, variable_mask


def table_bit(expr, n, bits):
    x = sum(b << i for i, b in enumerate(bits))
    return (expr.table(n) >> x) & 1


@pytest.mark.parametrize("text,expected", [
    # rows ordered 000, 001, ..., 111 as (x0, x1, x2)
    ("x0 | x1 & x2", [0, 0, 0, 1, 1, 1, 1, 1]),
    ("!x0 & x1", [0, 0, 1, 1, 0, 0, 0, 0]),
    ("!(x0 & x1) | x2", [1, 1, 1, 1, 1, 1, 0, 1]),
    ("1 & x2", [0, 1, 0, 1, 0, 1, 0, 1]),
])
def test_truth_tables(text, expected):
    e = parse_expression(text)
    assert [table_bit(e, 3, bits) for bits in itertools.product((0, 1), repeat=3)] == expected


def test_xor_between_and_and_or():
    # x0 ^ x1 & x2 parses as x0 ^ (x1 & x2); a | b ^ c as a | (b ^ c)
    e = parse_expression("x0 ^ x1 & x2")
    f = parse_expression("x0 ^ (x1 & x2)")
    assert e.table(3) == f.table(3)
    assert parse_expression("x0 | x1 ^ x2").table(3) == parse_expression("x0 | (x1 ^ x2)").table(3)


def test_left_associative_xor():
    assert parse_expression("x0 ^ x1 ^ x2").table(3) == parse_expression("(x0 ^ x1) ^ x2").table(3)


def test_variable_mask_is_projection():
    for n in range(1, 5):
        for k in range(n):
            m = variable_mask(k, n)
            assert all(((m >> x) & 1) == ((x >> k) & 1) for x in range(1 << n))


PY = {"&": "and", "|": "or", "^": "!="}


@st.composite
def expressions(draw, depth=3):
    """Pairs (text, python source) built side by side; python is the oracle."""
    if depth == 0 or draw(st.booleans()):
        leaf = draw(st.sampled_from(["x0", "x1", "x2", "0", "1"]))
        return leaf, (f"b[{leaf[1]}]" if leaf[0] == "x" else leaf)
    if draw(st.booleans()):
        t, p = draw(expressions(depth=depth - 1))
        return f"!({t})", f"(not {p})"
    op = draw(st.sampled_from(sorted(PY)))
    t1, p1 = draw(expressions(depth=depth - 1))
    t2, p2 = draw(expressions(depth=depth - 1))
    return f"({t1} {op} {t2})", f"(bool({p1}) {PY[op]} bool({p2}))"


@settings(max_examples=200, deadline=None)
@given(expressions())
def test_fully_parenthesised_matches_python(pair):
    text, src = pair
    e = parse_expression(text)
    for b in itertools.product((0, 1), repeat=3):
        assert table_bit(e, 3, b) == int(bool(eval(src, {"b": b})))


def test_network_text_header_and_comments():
    text = "# demo\nn = 3\n0: x1   # copy\n1: !x0 & x2\n2: 1\n"
    n, exprs = parse_network_text(text)
    assert n == 3 and len(exprs) == 3
    assert exprs[2].table(3) == (1 << 8) - 1


def test_network_text_infers_n():
    n, _ = parse_network_text("0: x1\n1: x0\n")
    assert n == 2


@pytest.mark.parametrize("text,line,col", [
    ("n = 2\n0: x0 &\n1: x1\n", 2, 8),
    ("n = 2\n0: x0 $ x1\n1: x1\n", 2, 7),
    ("n = 2\n0: (x0\n1: x1\n", 2, 7),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as ei:
        parse_network_text(text)
    assert ei.value.line == line
    assert ei.value.column == col


@pytest.mark.parametrize("text", [
    "n = 2\n0: x0\n0: x1\n",          # duplicate
    "n = 2\n0: x0\n",                 # missing automaton
    "n = 2\n0: x0\n1: x2\n",          # variable out of range
])
def test_network_text_rejects(text):
    with pytest.raises(ParseError):
        parse_network_text(text)
