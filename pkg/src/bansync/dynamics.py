"""Elementary transitions and transition graphs over ``B^n``.

Graphs are explicit adjacency lists indexed by configuration.  Attractors
are the terminal strongly connected components; every traversal order is
deterministic (configurations ascending, subsets by size then
lexicographically).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .core import Network, check_size, indices_of, to_bits

__all__ = [
    "InvalidTransition", "Transition", "Attractor", "TransitionGraph", "ReachabilitySets",
    "Correspondence", "ordered_submasks", "validate_transition", "outgoing_transitions",
    "strongly_connected_components", "build_graph", "reachability",
    "check_attractor_preservation",
]


class InvalidTransition(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Transition:
    source: int
    target: int
    n: int = field(compare=False)

    @property
    def changed(self) -> frozenset[int]:
        return frozenset(indices_of(self.source ^ self.target))

    @property
    def changed_mask(self) -> int:
        return self.source ^ self.target

    @property
    def size(self) -> int:
        return (self.source ^ self.target).bit_count()

    @property
    def kind(self) -> str:
        return "asynchronous" if self.size == 1 else "synchronous"

    @classmethod
    def from_bits(cls, source: str, target: str) -> "Transition":
        from .core import parse_config
        if len(source) != len(target):
            raise ValueError("transition endpoints have different lengths")
        return cls(parse_config(source), parse_config(target), len(source))

    def __str__(self) -> str:
        arrow = "->" if self.size == 1 else "=>"
        return f"{to_bits(self.source, self.n)} {arrow} {to_bits(self.target, self.n)}"


@lru_cache(maxsize=None)
def ordered_submasks(mask: int) -> tuple[int, ...]:
    """Nonempty submasks of ``mask``, by size then lexicographic index order."""
    subs = []
    s = mask
    while s:
        subs.append(s)
        s = (s - 1) & mask
    subs.sort(key=lambda m: (m.bit_count(), indices_of(m)))
    return tuple(subs)


def validate_transition(net: Network, t: Transition) -> None:
    if t.n != net.n:
        raise InvalidTransition(f"transition is over n={t.n}, network has n={net.n}")
    if not (0 <= t.source < net.size and 0 <= t.target < net.size):
        raise InvalidTransition("transition endpoint out of range")
    delta = t.source ^ t.target
    if delta == 0:
        raise InvalidTransition(f"{t}: empty change set")
    if delta & ~net.unstable_masks[t.source]:
        bad = indices_of(delta & ~net.unstable_masks[t.source])
        raise InvalidTransition(f"{t}: automata {bad} are stable in the source")


def outgoing_transitions(net: Network, x: int, max_size: int | None = None) -> list[Transition]:
    out = []
    for w in ordered_submasks(net.unstable_masks[x]) if net.unstable_masks[x] else ():
        if max_size is not None and w.bit_count() > max_size:
            break
        out.append(Transition(x, x ^ w, net.n))
    return out


def strongly_connected_components(succ) -> tuple[list[list[int]], list[int]]:
    """Iterative Tarjan.  Components come out sinks first (reverse topological)."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            sv = succ[v]
            if pi < len(sv):
                w = sv[pi]
                work[-1] = (v, pi + 1)
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, 0))
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                c = len(comps)
                members = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = c
                    members.append(w)
                    if w == v:
                        break
                members.sort()
                comps.append(members)
    return comps, comp


@dataclass(frozen=True)
class Attractor:
    configs: frozenset[int]
    kind: str  # 'stable' | 'unstable'

    def bits(self, n: int) -> list[str]:
        return [to_bits(x, n) for x in sorted(self.configs)]


@dataclass(frozen=True)
class ReachabilitySets:
    """Orbit, backward set and reachable attractors of one configuration.

    ``basin`` follows the convention that excludes the attractor itself and is
    only set for recurrent configurations.
    """

    config: int
    orbit: frozenset[int]
    backward: frozenset[int]
    attractors: tuple[int, ...]
    recurrent: bool
    attractor: int | None
    basin: frozenset[int] | None


class TransitionGraph:
    """A transition graph with its terminal-SCC decomposition.

    ``variant`` is ``'sig'`` (asynchronous edges), ``'eig'`` (all elementary
    edges) or ``'augmented'`` (asynchronous edges plus ``added``).
    """

    def __init__(self, n: int, succ, variant: str, added: Transition | None = None):
        self.n = n
        self.variant = variant
        self.added = added
        self.succ = succ
        self.sccs, self.comp = strongly_connected_components(succ)
        comp = self.comp
        terminal = []
        for c, members in enumerate(self.sccs):
            term = True
            for v in members:
                for w in succ[v]:
                    if comp[w] != c:
                        term = False
                        break
                if not term:
                    break
            terminal.append(term)
        order = sorted((members[0], c) for c, members in enumerate(self.sccs) if terminal[c])
        self.attractor_of_comp = [-1] * len(self.sccs)
        attractors = []
        for k, (_, c) in enumerate(order):
            self.attractor_of_comp[c] = k
            members = self.sccs[c]
            kind = "stable" if len(members) == 1 and not succ[members[0]] else "unstable"
            attractors.append(Attractor(frozenset(members), kind))
        self.attractors: tuple[Attractor, ...] = tuple(attractors)
        # bitmask of reachable attractors per component; sinks are emitted first
        reach = [0] * len(self.sccs)
        for c, members in enumerate(self.sccs):
            if terminal[c]:
                reach[c] = 1 << self.attractor_of_comp[c]
                continue
            m = 0
            for v in members:
                for w in succ[v]:
                    m |= reach[comp[w]]
            reach[c] = m
        self._comp_reach = reach
        self._pred = None

    # -- queries --------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.succ)

    @property
    def edges_count(self) -> int:
        return sum(len(s) for s in self.succ)

    def edges(self):
        for x, ys in enumerate(self.succ):
            for y in ys:
                yield x, y

    def attractor_index(self, z: int) -> int | None:
        k = self.attractor_of_comp[self.comp[z]]
        return None if k < 0 else k

    def is_recurrent(self, z: int) -> bool:
        return self.attractor_of_comp[self.comp[z]] >= 0

    @property
    def recurrent_set(self) -> frozenset[int]:
        out = set()
        for a in self.attractors:
            out |= a.configs
        return frozenset(out)

    @property
    def transient_count(self) -> int:
        return self.size - len(self.recurrent_set)

    def attractor_mask(self, z: int) -> int:
        """Bitmask over attractor indices reachable from ``z``."""
        return self._comp_reach[self.comp[z]]

    def reachable_attractors(self, z: int) -> tuple[int, ...]:
        return tuple(indices_of(self.attractor_mask(z)))

    def reachable_attractor_sets(self, z: int) -> set[frozenset[int]]:
        return {self.attractors[k].configs for k in self.reachable_attractors(z)}

    @property
    def pred(self):
        if self._pred is None:
            pred = [[] for _ in range(self.size)]
            for x, ys in enumerate(self.succ):
                for y in ys:
                    pred[y].append(x)
            self._pred = pred
        return self._pred

    def orbit(self, z: int) -> frozenset[int]:
        return frozenset(_bfs(self.succ, z))

    def backward(self, z: int) -> frozenset[int]:
        return frozenset(_bfs(self.pred, z))

    # -- exports --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "added": None if self.added is None else {
                "from": to_bits(self.added.source, self.n), "to": to_bits(self.added.target, self.n)},
            "attractors": [{"configs": a.bits(self.n), "kind": a.kind} for a in self.attractors],
            "transient_count": self.transient_count,
            "edges_count": self.edges_count,
        }

    def to_dot(self, name: str | None = None) -> str:
        n = self.n

        def q(x):
            return '"' + to_bits(x, n) + '"'

        lines = [f"digraph {name or self.variant.upper()} {{",
                 '  node [shape=box, fontname="monospace"];']
        in_attr = set()
        for k, a in enumerate(self.attractors):
            label = "Stable" if a.kind == "stable" else "Unstable"
            fill = "gray70" if a.kind == "stable" else "gray90"
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f'    label="{label}"; style=filled; color={fill};')
            for x in sorted(a.configs):
                lines.append(f"    {q(x)};")
                in_attr.add(x)
            lines.append("  }")
        for x in range(self.size):
            if x not in in_attr:
                lines.append(f"  {q(x)};")
        added = None if self.added is None else (self.added.source, self.added.target)
        for x, y in self.edges():
            if (x, y) == added:
                lines.append(f'  {q(x)} -> {q(y)} [style=bold, color="black:black", penwidth=2];')
            elif (x ^ y).bit_count() > 1:
                lines.append(f"  {q(x)} -> {q(y)} [style=dashed];")
            else:
                lines.append(f"  {q(x)} -> {q(y)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _bfs(adj, start: int) -> set[int]:
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def _sig_succ(net: Network) -> list[list[int]]:
    succ = []
    for x, u in enumerate(net.unstable_masks):
        out = []
        i = 0
        while u:
            if u & 1:
                out.append(x ^ (1 << i))
            u >>= 1
            i += 1
        succ.append(out)
    return succ


def build_graph(net: Network, variant: str | Transition = "sig") -> TransitionGraph:
    """Build the SIG, the EIG, or the SIG augmented with one synchronous transition."""
    if isinstance(variant, Transition):
        check_size(net.n, "sig")
        validate_transition(net, variant)
        if variant.size < 2:
            raise InvalidTransition(f"{variant} is asynchronous; it is already in the SIG")
        succ = _sig_succ(net)
        succ[variant.source] = succ[variant.source] + [variant.target]
        return TransitionGraph(net.n, succ, "augmented", variant)
    if variant == "sig":
        check_size(net.n, "sig")
        return TransitionGraph(net.n, _sig_succ(net), "sig")
    if variant == "eig":
        check_size(net.n, "eig")
        succ = [[x ^ w for w in ordered_submasks(u)] if u else [] for x, u in enumerate(net.unstable_masks)]
        return TransitionGraph(net.n, succ, "eig")
    raise ValueError(f"unknown graph variant {variant!r}")


def reachability(graph: TransitionGraph, z: int) -> ReachabilitySets:
    k = graph.attractor_index(z)
    back = graph.backward(z)
    basin = None
    if k is not None:
        basin = back - graph.attractors[k].configs
    return ReachabilitySets(
        config=z,
        orbit=graph.orbit(z),
        backward=back,
        attractors=graph.reachable_attractors(z),
        recurrent=k is not None,
        attractor=k,
        basin=basin,
    )


@dataclass
class Correspondence:
    """How the attractors of the SIG relate to those of an augmented SIG.

    Indices refer to ``sig.attractors`` and ``aug.attractors``.
    """

    sig: TransitionGraph
    aug: TransitionGraph
    survived: dict[int, int]  # identical configuration sets
    grown: dict[int, int]  # SIG attractor strictly inside an augmented one
    destroyed: list[int]  # every configuration transient after the addition
    from_scratch: list[int]  # augmented attractors with no SIG-recurrent configuration
    merged: list[int]  # augmented attractors holding recurrent configs of >= 2 SIG attractors
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def image(self, sig_indices) -> set[int]:
        """Map SIG attractor indices to augmented ones, dropping destroyed ones."""
        out = set()
        for k in sig_indices:
            if k in self.survived:
                out.add(self.survived[k])
            elif k in self.grown:
                out.add(self.grown[k])
        return out


def _correspondence(sig: TransitionGraph, aug: TransitionGraph) -> Correspondence:
    survived, grown, destroyed, violations = {}, {}, [], []
    for k, a in enumerate(sig.attractors):
        homes = {aug.attractor_index(z) for z in a.configs}
        if homes == {None}:
            destroyed.append(k)
        elif len(homes) == 1:
            h = homes.pop()
            if aug.attractors[h].configs == a.configs:
                survived[k] = h
            else:
                grown[k] = h
        else:
            violations.append(f"SIG attractor {k} split across augmented attractors {sorted(homes, key=str)}")
    recurrent = sig.recurrent_set
    from_scratch, merged = [], []
    for h, b in enumerate(aug.attractors):
        owners = {sig.attractor_index(z) for z in b.configs if z in recurrent}
        if not owners:
            from_scratch.append(h)
            violations.append(f"augmented attractor {h} contains no SIG-recurrent configuration")
        elif len(owners) > 1:
            merged.append(h)
            violations.append(f"augmented attractor {h} merges SIG attractors {sorted(owners)}")
    return Correspondence(sig, aug, survived, grown, destroyed, from_scratch, merged, violations)


def check_attractor_preservation(net: Network, t: Transition, sig: TransitionGraph | None = None) -> Correspondence:
    """Compare SIG attractors with those of the SIG plus the synchronous transition ``t``.

    Adding one edge can leave an attractor unchanged, grow it, or make all of
    its configurations transient; anything else is reported as a violation.
    """
    if sig is None:
        sig = build_graph(net, "sig")
    aug = build_graph(net, t)
    return _correspondence(sig, aug)
