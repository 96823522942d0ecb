"""Boolean automata networks as truth tables.

Configurations are plain ints: bit ``i`` of ``x`` is the state ``x_i`` of
automaton ``i``.  Their string form lists ``x_0 ... x_{n-1}`` with index 0
leftmost, so ``"1100"`` has ``x_0 = x_1 = 1``.

A local function ``f_i`` is stored as an int with ``2**n`` bits, bit ``x``
holding ``f_i(x)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Sequence

from .expr import Expr, parse_expression, parse_network_text, variable_mask

__all__ = [
    "SizeCeiling", "NonMonotoneNetwork", "LIMITS", "raise_limits", "check_size",
    "to_bits", "parse_config", "flip", "hamming", "mask_of", "indices_of",
    "Sign", "SignedStructure", "InstabilityReport", "FrustrationSet", "Network",
    "build_network", "instabilities", "signed_structure", "is_locally_monotone",
    "frustrations", "format_network",
]


class SizeCeiling(ValueError):
    pass


class NonMonotoneNetwork(ValueError):
    pass


@dataclass
class Limits:
    """Soft ceilings on ``n``; ``hard`` cannot be raised."""

    eig: int = 10
    sig: int = 16
    hard: int = 20


LIMITS = Limits()


def raise_limits(max_n: int) -> None:
    """Lift both soft ceilings to ``max_n``; the hard ceiling stays put."""
    if max_n > LIMITS.hard:
        raise SizeCeiling(f"--max-n {max_n} exceeds the hard ceiling n <= {LIMITS.hard}")
    LIMITS.eig = max(LIMITS.eig, max_n)
    LIMITS.sig = max(LIMITS.sig, max_n)


def check_size(n: int, kind: str = "sig") -> None:
    limit = getattr(LIMITS, kind)
    if n > LIMITS.hard:
        raise SizeCeiling(f"n={n} exceeds the hard ceiling n <= {LIMITS.hard}")
    if n > limit:
        raise SizeCeiling(f"n={n} exceeds the {kind.upper()} ceiling n <= {limit}")


# -- configurations ---------------------------------------------------------

def to_bits(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def parse_config(s: str, n: int | None = None) -> int:
    s = s.strip()
    if not s or any(c not in "01" for c in s):
        raise ValueError(f"not a binary configuration: {s!r}")
    if n is not None and len(s) != n:
        raise ValueError(f"configuration {s!r} has length {len(s)}, expected {n}")
    return sum(1 << i for i, c in enumerate(s) if c == "1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def flip(x: int, W: Iterable[int], n: int) -> int:
    """Flip the components of ``x`` listed in ``W``."""
    for i in W:
        if not 0 <= i < n:
            raise IndexError(f"automaton index {i} out of range for n={n}")
        x ^= 1 << i
    return x


def hamming(x: int | str, y: int | str) -> tuple[frozenset[int], int]:
    """Return ``(diff, dist)``: indices where ``x`` and ``y`` differ, and their count."""
    if isinstance(x, str) or isinstance(y, str):
        if not (isinstance(x, str) and isinstance(y, str)):
            raise TypeError("compare two ints or two binary strings")
        if len(x) != len(y):
            raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
        x, y = parse_config(x), parse_config(y)
    diff = frozenset(indices_of(x ^ y))
    return diff, len(diff)


# -- signed structure -------------------------------------------------------

class Sign(enum.IntEnum):
    """Arc sign.  Absent arcs are not stored; ``NONMONOTONE`` has no definite sign."""

    NEGATIVE = -1
    NONMONOTONE = 0
    POSITIVE = 1

    @property
    def symbol(self) -> str:
        return {1: "+", -1: "-", 0: "~"}[int(self)]


@lru_cache(maxsize=None)
def _low_half(j: int, n: int) -> int:
    full = (1 << (1 << n)) - 1
    return full & ~variable_mask(j, n)


@lru_cache(maxsize=None)
def function_arcs(table: int, n: int) -> tuple[tuple[int, Sign], ...]:
    """Signed in-arcs ``(j, sign)`` of a local function with the given table."""
    out = []
    for j in range(n):
        low = _low_half(j, n)
        f0 = table & low
        f1 = (table >> (1 << j)) & low
        up = ~f0 & f1 & low
        down = f0 & ~f1 & low
        if up and down:
            out.append((j, Sign.NONMONOTONE))
        elif up:
            out.append((j, Sign.POSITIVE))
        elif down:
            out.append((j, Sign.NEGATIVE))
    return tuple(out)


@dataclass(frozen=True)
class SignedStructure:
    """Interaction digraph; ``signs[(j, i)]`` is the sign of arc ``j -> i``."""

    n: int
    signs: dict = field(hash=False)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return sorted(self.signs)

    def in_neighbours(self, i: int) -> list[int]:
        return sorted(j for (j, k) in self.signs if k == i)

    def sign(self, j: int, i: int) -> int:
        """Sign as an int, 0 for an absent arc."""
        s = self.signs.get((j, i))
        return 0 if s is None else int(s)

    @property
    def nonmonotone_arcs(self) -> list[tuple[int, int]]:
        return sorted(a for a, s in self.signs.items() if s is Sign.NONMONOTONE)

    @property
    def is_monotone(self) -> bool:
        return not self.nonmonotone_arcs

    def arc_index(self, j: int, i: int) -> int:
        return j * self.n + i


@dataclass(frozen=True)
class InstabilityReport:
    configuration: int
    n: int
    unstable: frozenset[int]

    @property
    def stable(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.unstable

    @property
    def momentum(self) -> int:
        return len(self.unstable)


@dataclass(frozen=True)
class FrustrationSet:
    configuration: int
    n: int
    frustrated: frozenset[tuple[int, int]]


# -- networks ---------------------------------------------------------------

@dataclass(frozen=True)
class Network:
    """``n`` local transition functions, each a ``2**n``-bit truth table."""

    n: int
    tables: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a network needs at least one automaton")
        check_size(self.n, "hard")
        object.__setattr__(self, "tables", tuple(int(t) for t in self.tables))
        if len(self.tables) != self.n:
            raise ValueError(f"expected {self.n} truth tables, got {len(self.tables)}")
        top = 1 << (1 << self.n)
        for i, t in enumerate(self.tables):
            if not 0 <= t < top:
                raise ValueError(f"truth table of f_{i} has more than 2^{self.n} entries")

    @classmethod
    def from_expressions(cls, exprs: Sequence[str | Expr], n: int | None = None, name: str = "") -> "Network":
        parsed = [parse_expression(e) if isinstance(e, str) else e for e in exprs]
        if n is None:
            n = len(parsed)
        for i, e in enumerate(parsed):
            bad = [k for k in e.variables() if k >= n]
            if bad:
                raise ValueError(f"f_{i} uses x{min(bad)} but n={n}")
        check_size(n, "hard")
        return cls(n, tuple(e.table(n) for e in parsed), name=name)

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "Network":
        n, exprs = parse_network_text(text)
        check_size(n, "hard")
        return cls(n, tuple(e.table(n) for e in exprs), name=name)

    @classmethod
    def from_callables(cls, n: int, funcs) -> "Network":
        """Tabulate Python callables taking a tuple of ``n`` bits."""
        tables = []
        for f in funcs:
            t = 0
            for x in range(1 << n):
                if f(tuple((x >> k) & 1 for k in range(n))):
                    t |= 1 << x
            tables.append(t)
        return cls(n, tuple(tables))

    @property
    def size(self) -> int:
        return 1 << self.n

    def value(self, i: int, x: int) -> int:
        return (self.tables[i] >> x) & 1

    def image(self, x: int) -> int:
        """The configuration ``(f_0(x), ..., f_{n-1}(x))``."""
        y = 0
        for i, t in enumerate(self.tables):
            y |= ((t >> x) & 1) << i
        return y

    @cached_property
    def unstable_masks(self) -> tuple[int, ...]:
        """``U(x)`` as a bitmask, for every configuration ``x``."""
        out = [0] * self.size
        for i, t in enumerate(self.tables):
            own = variable_mask(i, self.n)
            diff = t ^ own
            bit = 1 << i
            x = 0
            while diff:
                if diff & 1:
                    out[x] |= bit
                diff >>= 1
                x += 1
        return tuple(out)

    @cached_property
    def structure(self) -> SignedStructure:
        signs = {}
        for i, t in enumerate(self.tables):
            for j, s in function_arcs(t, self.n):
                signs[(j, i)] = s
        return SignedStructure(self.n, signs)

    @cached_property
    def frustration_masks(self) -> tuple[int, ...]:
        """``FRUS(x)`` for every ``x``, as a bitmask over arc index ``j*n + i``."""
        st = self.structure
        if not st.is_monotone:
            raise NonMonotoneNetwork(
                f"frustration undefined: non-monotone arcs {st.nonmonotone_arcs}")
        n = self.n
        arcs = [(j, i, j * n + i, s is Sign.POSITIVE) for (j, i), s in st.signs.items()]
        out = []
        for x in range(self.size):
            m = 0
            for j, i, k, positive in arcs:
                same = ((x >> j) ^ (x >> i)) & 1 == 0
                # positive arcs are frustrated when the endpoints disagree
                if same != positive:
                    m |= 1 << k
            out.append(m)
        return tuple(out)

    def __str__(self) -> str:
        return format_network(self)


def build_network(definitions: Sequence[str | int], n: int) -> Network:
    """Canonicalize expressions or raw truth tables into a :class:`Network`."""
    if n > LIMITS.hard:
        raise SizeCeiling(f"n={n} exceeds the hard ceiling n <= {LIMITS.hard}")
    if len(definitions) != n:
        raise ValueError(f"expected {n} definitions, got {len(definitions)}")
    tables = []
    for i, d in enumerate(definitions):
        if isinstance(d, str):
            e = parse_expression(d)
            bad = [k for k in e.variables() if k >= n]
            if bad:
                raise ValueError(f"f_{i} uses x{min(bad)} but n={n}")
            tables.append(e.table(n))
        else:
            tables.append(int(d))
    return Network(n, tuple(tables))


def _check_config(net: Network, x: int) -> None:
    if not 0 <= x < net.size:
        raise ValueError(f"configuration {x} out of range for n={net.n}")


def instabilities(net: Network, x: int) -> InstabilityReport:
    _check_config(net, x)
    return InstabilityReport(x, net.n, frozenset(indices_of(net.unstable_masks[x])))


def signed_structure(net: Network) -> SignedStructure:
    return net.structure


def is_locally_monotone(net: Network) -> tuple[bool, list[tuple[int, int]]]:
    bad = net.structure.nonmonotone_arcs
    return not bad, bad


def frustrations(net: Network, x: int) -> FrustrationSet:
    _check_config(net, x)
    m = net.frustration_masks[x]
    n = net.n
    arcs = frozenset((k // n, k % n) for k in indices_of(m))
    return FrustrationSet(x, n, arcs)


def format_network(net: Network) -> str:
    """Serialize to the text format as a DNF over each function's actual inputs."""
    lines = [f"n = {net.n}"]
    for i, t in enumerate(net.tables):
        deps = [j for j, _ in function_arcs(t, net.n)]
        terms = []
        for bits in product((0, 1), repeat=len(deps)):
            x = sum(1 << j for j, b in zip(deps, bits) if b)
            if (t >> x) & 1:
                lits = [f"x{j}" if b else f"!x{j}" for j, b in zip(deps, bits)]
                terms.append("(" + " & ".join(lits) + ")" if len(lits) > 1 else (lits[0] if lits else "1"))
        if not terms:
            body = "0"
        elif not deps:
            body = "1"
        else:
            body = " | ".join(terms)
        lines.append(f"{i}: {body}")
    if net.name:
        lines.insert(0, f"# {net.name}")
    return "\n".join(lines) + "\n"
