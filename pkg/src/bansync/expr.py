"""Parser for the network text format.

One automaton per line, ``<index>: <expr>``, optional ``n = <int>`` header,
``#`` comments.  Operators by decreasing precedence: ``!``, ``&``, ``^``,
``|``; binary operators are left-associative.  Variables are ``x<k>``,
literals ``0`` and ``1``.

Expressions are compiled straight to truth tables: variable ``x_k`` is the
``2**n``-bit mask whose bit ``x`` is set iff bit ``k`` of configuration
``x`` is set, so every operator is a single integer operation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["ParseError", "Expr", "parse_expression", "parse_network_text", "variable_mask"]


class ParseError(ValueError):
    """Malformed network text.  ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


_TOKEN = re.compile(r"(x(\d+))|([01])|([!&^|()])")


@dataclass(frozen=True)
class Expr:
    op: str  # 'var', 'const', '!', '&', '^', '|'
    args: tuple = ()
    value: int = 0

    def variables(self) -> set[int]:
        if self.op == "var":
            return {self.value}
        out: set[int] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def table(self, n: int) -> int:
        full = (1 << (1 << n)) - 1
        return self._eval(n, full)

    def _eval(self, n: int, full: int) -> int:
        op = self.op
        if op == "var":
            return variable_mask(self.value, n)
        if op == "const":
            return full if self.value else 0
        if op == "!":
            return full & ~self.args[0]._eval(n, full)
        a = self.args[0]._eval(n, full)
        b = self.args[1]._eval(n, full)
        if op == "&":
            return a & b
        if op == "|":
            return a | b
        return a ^ b


_VAR_MASKS: dict[tuple[int, int], int] = {}


def variable_mask(k: int, n: int) -> int:
    """Truth table of the projection ``x -> x_k`` over ``B^n``."""
    key = (k, n)
    m = _VAR_MASKS.get(key)
    if m is None:
        m = 0
        for x in range(1 << n):
            if (x >> k) & 1:
                m |= 1 << x
        _VAR_MASKS[key] = m
    return m


def _tokenize(text: str, line: int, offset: int) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        col = pos + offset + 1
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.group(1):
            tokens.append(("var", int(m.group(2)), col))
        elif m.group(3):
            tokens.append(("const", int(m.group(3)), col))
        else:
            tokens.append((m.group(4), None, col))
        pos = m.end(0)
    return tokens


class _Parser:
    _BINARY = ("|", "^", "&")  # loosest first

    def __init__(self, tokens, line: int, end_col: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.end_col = end_col

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def fail(self, msg: str):
        tok = self.peek()
        col = tok[2] if tok else self.end_col
        raise ParseError(msg, self.line, col)

    def parse(self) -> Expr:
        if not self.tokens:
            self.fail("empty expression")
        e = self.binary(0)
        if self.peek() is not None:
            self.fail(f"unexpected token {self.peek()[0]!r}")
        return e

    def binary(self, level: int) -> Expr:
        if level == len(self._BINARY):
            return self.unary()
        op = self._BINARY[level]
        left = self.binary(level + 1)
        while (tok := self.peek()) is not None and tok[0] == op:
            self.pos += 1
            right = self.binary(level + 1)
            left = Expr(op, (left, right))
        return left

    def unary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of expression")
        kind, val, _ = tok
        if kind == "!":
            self.pos += 1
            return Expr("!", (self.unary(),))
        if kind == "(":
            self.pos += 1
            e = self.binary(0)
            if self.peek() is None or self.peek()[0] != ")":
                self.fail("expected ')'")
            self.pos += 1
            return e
        if kind == "var":
            self.pos += 1
            return Expr("var", value=val)
        if kind == "const":
            self.pos += 1
            return Expr("const", value=val)
        self.fail(f"unexpected token {kind!r}")


def parse_expression(text: str, line: int = 1, offset: int = 0) -> Expr:
    tokens = _tokenize(text, line, offset)
    return _Parser(tokens, line, offset + len(text.rstrip()) + 1).parse()


_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")
_DEF = re.compile(r"^\s*(\d+)\s*:")


def parse_network_text(text: str) -> tuple[int, list[Expr]]:
    """Parse a whole network file into ``(n, expressions)``."""
    n = None
    defs: dict[int, tuple[Expr, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _HEADER.match(line)
        if m:
            if n is not None:
                raise ParseError("duplicate 'n =' header", lineno, 1)
            n = int(m.group(1))
            continue
        m = _DEF.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected '<index>: <expr>' or 'n = <int>'", lineno, col)
        idx = int(m.group(1))
        if idx in defs:
            raise ParseError(f"automaton {idx} defined twice", lineno, m.start(1) + 1)
        body = line[m.end(0):]
        defs[idx] = (parse_expression(body, lineno, m.end(0)), lineno)
    if not defs:
        raise ParseError("no automaton definitions")
    highest = max(max(defs), max((max(e.variables(), default=-1) for e, _ in defs.values())))
    if n is None:
        n = highest + 1
    for idx, (e, lineno) in defs.items():
        if idx >= n:
            raise ParseError(f"automaton index {idx} >= n={n}", lineno, 1)
        bad = [k for k in e.variables() if k >= n]
        if bad:
            raise ParseError(f"variable x{min(bad)} out of range for n={n}", lineno, 1)
    missing = [i for i in range(n) if i not in defs]
    if missing:
        raise ParseError(f"automata {missing} have no definition")
    return n, [defs[i][0] for i in range(n)]
