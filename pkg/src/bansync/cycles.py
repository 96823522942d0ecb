"""Critical cycles of monotone networks.

A cycle is x-critical when all its nodes are unstable in ``x`` and all its
arcs are frustrated in ``x``.  Critical cycles are enumerated as the simple
cycles of ``H_x = (U(x), FRUS(x) ∩ U(x)²)``; any closed walk without repeated
arcs splits into simple cycles, so cycle existence and Hamiltonicity are
unaffected by the restriction.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .core import Network, NonMonotoneNetwork, SignedStructure, check_size, indices_of, to_bits

__all__ = [
    "CriticalCycle", "simple_cycles", "structural_cycles", "x_critical_cycles",
    "critical_cycles", "min_critical_size", "has_closed_trail", "critical_arc_mask",
    "frustration_dot",
]


def simple_cycles(arcs) -> list[tuple[int, ...]]:
    """All simple directed cycles (loops included), Johnson-style.

    Each cycle is returned rotated to start at its smallest node, sorted by
    length then node sequence.
    """
    adj: dict[int, list[int]] = {}
    cycles: list[tuple[int, ...]] = []
    for j, i in arcs:
        adj.setdefault(j, [])
        adj.setdefault(i, [])
        if j == i:
            cycles.append((j,))
        elif i not in adj[j]:
            adj[j].append(i)
    for v in adj:
        adj[v].sort()
    for s in sorted(adj):
        sub = {v: [w for w in adj[v] if w >= s] for v in adj if v >= s}
        fwd = _reach(sub, s)
        bwd = _reach(_reverse(sub), s)
        comp = fwd & bwd
        if len(comp) < 2:
            continue
        blocked: set[int] = set()
        waiting: dict[int, set[int]] = {}
        path = [s]

        def unblock(u):
            stack = [u]
            while stack:
                v = stack.pop()
                if v in blocked:
                    blocked.discard(v)
                    stack.extend(waiting.pop(v, ()))

        def circuit(v) -> bool:
            found = False
            blocked.add(v)
            for w in sub[v]:
                if w not in comp:
                    continue
                if w == s:
                    cycles.append(tuple(path))
                    found = True
                elif w not in blocked:
                    path.append(w)
                    if circuit(w):
                        found = True
                    path.pop()
            if found:
                unblock(v)
            else:
                for w in sub[v]:
                    if w in comp:
                        waiting.setdefault(w, set()).add(v)
            return found

        circuit(s)
    cycles.sort(key=lambda c: (len(c), c))
    return cycles


def _reach(adj, s):
    seen = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _reverse(adj):
    rev = {v: [] for v in adj}
    for v, ws in adj.items():
        for w in ws:
            rev.setdefault(w, []).append(v)
    return rev


@lru_cache(maxsize=None)
def cycle_arcs(nodes) -> tuple[tuple[int, int], ...]:
    k = len(nodes)
    return tuple((nodes[t], nodes[(t + 1) % k]) for t in range(k))


@lru_cache(maxsize=None)
def _cycles_of_mask(n: int, arc_mask: int) -> tuple[tuple[int, ...], ...]:
    arcs = [(k // n, k % n) for k in indices_of(arc_mask)]
    return tuple(simple_cycles(arcs))


@lru_cache(maxsize=None)
def _arcs_within(n: int, node_mask: int) -> int:
    m = 0
    for j in indices_of(node_mask):
        for i in indices_of(node_mask):
            m |= 1 << (j * n + i)
    return m


def critical_arc_mask(net: Network, x: int, nodes: int | None = None) -> int:
    """Arcs of ``H_x`` (frustrated arcs between unstable automata) as a bitmask.

    ``nodes`` further restricts the node set, e.g. to a change set.
    """
    keep = net.unstable_masks[x] if nodes is None else nodes & net.unstable_masks[x]
    return net.frustration_masks[x] & _arcs_within(net.n, keep)


@dataclass(frozen=True)
class CriticalCycle:
    nodes: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]
    sign: int
    witness: int
    n: int

    @property
    def length(self) -> int:
        return len(self.arcs)

    @property
    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.arcs))

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "arcs": [list(a) for a in self.arcs],
            "length": self.length,
            "sign": self.sign,
            "witness": to_bits(self.witness, self.n),
        }


def _require_monotone(net: Network) -> None:
    if not net.structure.is_monotone:
        raise NonMonotoneNetwork(f"non-monotone arcs {net.structure.nonmonotone_arcs}")


def _make_cycle(net: Network, nodes, witness: int) -> CriticalCycle:
    arcs = cycle_arcs(nodes)
    sign = 1
    for j, i in arcs:
        sign *= net.structure.sign(j, i)
    return CriticalCycle(tuple(nodes), arcs, sign, witness, net.n)


def x_critical_cycles(net: Network, x: int) -> list[CriticalCycle]:
    _require_monotone(net)
    return [_make_cycle(net, c, x) for c in _cycles_of_mask(net.n, critical_arc_mask(net, x))]


def critical_cycles(net: Network) -> list[CriticalCycle]:
    """Critical cycles deduplicated by arc set, each with its smallest witness."""
    _require_monotone(net)
    check_size(net.n, "sig")
    seen: dict[tuple, CriticalCycle] = {}
    n = net.n
    for x in range(net.size):
        h = critical_arc_mask(net, x)
        if not h:
            continue
        for c in _cycles_of_mask(n, h):
            key = tuple(sorted(cycle_arcs(c)))
            if key not in seen:
                seen[key] = _make_cycle(net, c, x)
    return sorted(seen.values(), key=lambda c: (c.length, c.nodes))


def min_critical_size(net: Network) -> int | None:
    cs = critical_cycles(net)
    return min((c.length for c in cs), default=None)


def structural_cycles(structure: SignedStructure) -> list[tuple[tuple[int, ...], int]]:
    """Simple cycles of the interaction digraph with their signs (0 if any arc is non-monotone)."""
    return list(_signed_cycles(tuple(sorted((a, int(s)) for a, s in structure.signs.items()))))


@lru_cache(maxsize=1 << 14)
def _signed_cycles(signed_arcs) -> tuple:
    sign_of = dict(signed_arcs)
    out = []
    for c in simple_cycles([a for a, _ in signed_arcs]):
        sign = 1
        for arc in cycle_arcs(c):
            sign *= sign_of[arc]
        out.append((c, sign))
    return tuple(out)


def has_closed_trail(arcs, through=(), max_arcs: int = 16) -> bool:
    """Is there a closed walk without repeated arcs visiting every node of ``through``?

    Brute force over arc subsets: a nonempty arc set is traversable as one
    closed trail iff it is connected and every node has in-degree equal to
    out-degree.
    """
    arcs = sorted(set(arcs))
    if len(arcs) > max_arcs:
        raise ValueError(f"{len(arcs)} arcs exceed the brute-force limit {max_arcs}")
    need = set(through)
    for r in range(1, len(arcs) + 1):
        for sub in combinations(arcs, r):
            nodes = {v for a in sub for v in a}
            if not need <= nodes:
                continue
            bal: dict[int, int] = {}
            for j, i in sub:
                bal[j] = bal.get(j, 0) + 1
                bal[i] = bal.get(i, 0) - 1
            if any(bal.values()):
                continue
            und: dict[int, set[int]] = {v: set() for v in nodes}
            for j, i in sub:
                und[j].add(i)
                und[i].add(j)
            if _reach(und, next(iter(nodes))) == nodes:
                return True
    return False


def frustration_dot(net: Network, x: int) -> str:
    """Structure graph with FRUS(x) highlighted and unstable nodes filled."""
    st = net.structure
    frus = net.frustration_masks[x]
    u = net.unstable_masks[x]
    lines = [f'digraph structure_{to_bits(x, net.n)} {{', '  node [shape=circle];']
    for i in range(net.n):
        style = ', style=filled, fillcolor=gray80' if (u >> i) & 1 else ""
        lines.append(f'  {i} [label="{i}"{style}];')
    for (j, i), s in sorted(st.signs.items()):
        hot = (frus >> (j * net.n + i)) & 1
        attrs = [f'label="{s.symbol}"']
        if hot:
            attrs += ["color=red", "penwidth=2"]
        lines.append(f"  {j} -> {i} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
