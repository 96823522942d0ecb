"""Sequentialisability of synchronous transitions.

Two independent routes:

* :func:`decompose` layers the change set along the frustrated arcs between
  changing automata and flips one layer at a time; layers of more than one
  automaton are strongly connected through frustrated arcs.
* :func:`is_sequentialisable` searches the elementary transition graph for a
  derivation made of strictly smaller transitions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .core import Network, NonMonotoneNetwork, check_size, indices_of, to_bits
from .cycles import _arcs_within, critical_arc_mask, critical_cycles, has_closed_trail
from .dynamics import (
    InvalidTransition, Transition, build_graph, ordered_submasks, strongly_connected_components,
    validate_transition,
)

__all__ = [
    "StepInvalid", "PreconditionUnmet", "MODES", "Derivation", "Decomposition",
    "SequentialisationVerdict", "SequentialisationOracle", "decompose", "is_sequentialisable",
    "synchronous_transitions", "normal_transitions", "on_critical_trail", "admissible_derivation", "HamiltonianReport", "check_lemma_hamiltonian",
]

# 'strict': every step strictly smaller than the transition (default)
# 'subcube': strict, and intermediate configurations only flip automata of the change set
# 'below_n': every step smaller than n, at least two steps
MODES = ("strict", "subcube", "below_n")


class StepInvalid(RuntimeError):
    """The layered construction produced a step that is not a transition."""


class PreconditionUnmet(ValueError):
    pass


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Transition, ...]

    @property
    def source(self) -> int:
        return self.steps[0].source

    @property
    def target(self) -> int:
        return self.steps[-1].target

    def __len__(self) -> int:
        return len(self.steps)

    @classmethod
    def from_path(cls, path, n: int) -> "Derivation":
        return cls(tuple(Transition(a, b, n) for a, b in zip(path, path[1:])))

    def replay(self, net: Network) -> int:
        """Check chaining and validity of every step; return the final configuration."""
        z = self.steps[0].source
        for t in self.steps:
            if t.source != z:
                raise InvalidTransition(f"step {t} does not start at {to_bits(z, net.n)}")
            validate_transition(net, t)
            z = t.target
        return z

    def to_json(self) -> list[dict]:
        n = self.steps[0].n
        return [{"from": to_bits(t.source, n), "to": to_bits(t.target, n), "size": t.size}
                for t in self.steps]


@dataclass(frozen=True)
class Decomposition:
    """Layers ``Δ_0, Δ_1, ...`` of a change set and the derivation flipping them in order."""

    transition: Transition
    blocks: tuple[frozenset[int], ...]
    derivation: Derivation
    arc_mask: int = field(repr=False)

    @property
    def splits(self) -> bool:
        return len(self.blocks) >= 2

    def block_arcs(self, block) -> list[tuple[int, int]]:
        n = self.transition.n
        return [(k // n, k % n) for k in indices_of(self.arc_mask)
                if k // n in block and k % n in block]

    def shares_critical_cycle(self, net: Network, block) -> bool:
        """Do the automata of ``block`` all lie on one closed trail of x-critical arcs?"""
        m = 0
        for i in block:
            m |= 1 << i
        return on_critical_trail(net, self.transition.source, m)


@lru_cache(maxsize=None)
def _closed_trail(arcs, block) -> bool:
    return has_closed_trail(arcs, through=block, max_arcs=len(arcs))


def _arc_list(n: int, mask: int) -> tuple[tuple[int, int], ...]:
    return tuple((k // n, k % n) for k in indices_of(mask) if k // n != k % n)


def on_critical_trail(net: Network, x: int, block: int) -> bool:
    """Is there an x-critical closed trail through every automaton of ``block``?

    The trail may leave the block; arcs inside the block are tried first.
    """
    if block.bit_count() < 2:
        return True
    n = net.n
    nodes = tuple(indices_of(block))
    h = critical_arc_mask(net, x)
    if _closed_trail(_arc_list(n, h & _arcs_within(n, block)), nodes):
        return True
    # widen to the strongly connected part of H_x holding the block
    succ = [[] for _ in range(n)]
    for j, i in _arc_list(n, h):
        succ[j].append(i)
    comps, _ = strongly_connected_components(succ)
    for members in comps:
        comp = sum(1 << v for v in members)
        if block & ~comp == 0:
            if comp == block:
                return False
            return _closed_trail(_arc_list(n, h & _arcs_within(n, comp)), nodes)
    return False


def admissible_derivation(net: Network, t: Transition) -> Derivation | None:
    """Brute force over ordered partitions of the change set: a derivation of
    ``t`` whose steps of two or more automata each lie on one x-critical
    closed trail, or ``None``."""
    x = t.source
    um = net.unstable_masks
    ok = lru_cache(maxsize=None)(lambda m: on_critical_trail(net, x, m))

    def go(z, rest, path):
        if not rest:
            return path
        u = um[z] & rest
        for w in ordered_submasks(u):
            if w.bit_count() > 1 and not ok(w):
                continue
            found = go(z ^ w, rest & ~w, path + [z ^ w])
            if found:
                return found
        return None

    path = go(x, t.changed_mask, [x])
    return None if path is None else Derivation.from_path(path, net.n)


@lru_cache(maxsize=None)
def _layers(n: int, delta: int, arc_mask: int) -> tuple[int, ...]:
    """Strongly connected layers of ``H``, heads of frustrated arcs first."""
    nodes = indices_of(delta)
    pos = {v: k for k, v in enumerate(nodes)}
    succ = [[] for _ in nodes]
    for k in indices_of(arc_mask):
        j, i = divmod(k, n)
        if j != i:
            succ[pos[j]].append(pos[i])
    # Tarjan emits sink components first: for an arc j -> i, i's layer never comes after j's
    comps, _ = strongly_connected_components(succ)
    out = []
    for members in comps:
        m = 0
        for p in members:
            m |= 1 << nodes[p]
        out.append(m)
    return tuple(out)


def _require_monotone(net: Network) -> None:
    if not net.structure.is_monotone:
        raise NonMonotoneNetwork(f"non-monotone arcs {net.structure.nonmonotone_arcs}")


def decompose(net: Network, t: Transition) -> Decomposition:
    """Split ``t`` into layers flipped one after the other; every step is checked."""
    _require_monotone(net)
    validate_transition(net, t)
    if t.size < 2:
        raise InvalidTransition(f"{t} is not synchronous")
    x, delta = t.source, t.changed_mask
    h = critical_arc_mask(net, x, delta)
    layers = _layers(net.n, delta, h)
    path = [x]
    for w in layers:
        z = path[-1]
        if w & ~net.unstable_masks[z]:
            raise StepInvalid(
                f"{t}: flipping {indices_of(w)} from {to_bits(z, net.n)} is not a transition")
        path.append(z ^ w)
    return Decomposition(
        transition=t,
        blocks=tuple(frozenset(indices_of(w)) for w in layers),
        derivation=Derivation.from_path(path, net.n),
        arc_mask=h,
    )


@dataclass(frozen=True)
class SequentialisationVerdict:
    transition: Transition
    sequentialisable: bool
    witness: Derivation | None
    totally: bool
    method: str = "search"

    @property
    def verdict(self) -> str:
        return "sequentialisable" if self.sequentialisable else "normal"

    def to_json(self) -> dict:
        t = self.transition
        out = {
            "from": to_bits(t.source, t.n),
            "to": to_bits(t.target, t.n),
            "size": t.size,
            "verdict": self.verdict,
            "totally": self.totally,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


class SequentialisationOracle:
    """Breadth-first derivation search over the elementary transition graph.

    Search trees are memoized per (source, largest allowed step size), so
    scanning every transition of a network reuses one tree per source.
    """

    def __init__(self, net: Network, mode: str = "strict"):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        check_size(net.n, "eig")
        self.net = net
        self.mode = mode
        self._trees: dict[tuple[int, int], dict[int, int]] = {}

    def _tree(self, x: int, bound: int, confine: int | None = None, skip: int | None = None) -> dict[int, int]:
        key = (x, bound)
        memo = confine is None and skip is None
        if memo and key in self._trees:
            return self._trees[key]
        um = self.net.unstable_masks
        parent = {x: x}
        todo = deque([x])
        while todo:
            z = todo.popleft()
            u = um[z]
            if not u:
                continue
            for w in ordered_submasks(u):
                if w.bit_count() > bound:
                    break
                y = z ^ w
                if y in parent:
                    continue
                if confine is not None and (y ^ x) & ~confine:
                    continue
                if skip is not None and z == x and y == skip:
                    continue
                parent[y] = z
                todo.append(y)
        if memo:
            self._trees[key] = parent
        return parent

    def _path(self, parent: dict[int, int], y: int) -> list[int]:
        path = [y]
        while parent[path[-1]] != path[-1]:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def reachable(self, x: int, y: int, bound: int) -> bool:
        return y in self._tree(x, bound)

    def verdict(self, t: Transition) -> SequentialisationVerdict:
        net = self.net
        x, y, k = t.source, t.target, t.size
        if self.mode == "strict":
            parent = self._tree(x, k - 1)
        elif self.mode == "subcube":
            parent = self._tree(x, k - 1, confine=t.changed_mask)
        else:
            parent = self._tree(x, net.n - 1, skip=y)
        witness = None
        if y in parent:
            witness = Derivation.from_path(self._path(parent, y), net.n)
        if self.mode == "subcube":
            totally = y in self._tree(x, 1, confine=t.changed_mask)
        else:
            totally = y in self._tree(x, 1)
        return SequentialisationVerdict(t, witness is not None, witness, totally, "search")


def is_sequentialisable(net: Network, t: Transition, mode: str = "strict",
                        method: str = "search") -> SequentialisationVerdict:
    """Decide by derivation search.  ``method='both'`` also runs :func:`decompose`
    (monotone networks only) and raises :class:`StepInvalid` if the two disagree."""
    validate_transition(net, t)
    if t.size < 2:
        raise InvalidTransition(f"{t} is asynchronous")
    if method not in ("search", "both"):
        raise ValueError(f"unknown method {method!r}")
    v = SequentialisationOracle(net, mode).verdict(t)
    if method == "search":
        return v
    d = decompose(net, t)
    if d.splits and mode == "strict" and not v.sequentialisable:
        raise StepInvalid(f"{t}: layers {[sorted(b) for b in d.blocks]} split it, search found nothing")
    return replace(v, method="both")


def synchronous_transitions(net: Network):
    n = net.n
    for x, u in enumerate(net.unstable_masks):
        if u.bit_count() < 2:
            continue
        for w in ordered_submasks(u):
            if w.bit_count() >= 2:
                yield Transition(x, x ^ w, n)


def normal_transitions(net: Network, mode: str = "strict",
                       oracle: SequentialisationOracle | None = None) -> list[SequentialisationVerdict]:
    check_size(net.n, "eig")
    if oracle is None:
        oracle = SequentialisationOracle(net, mode)
    out = []
    for t in synchronous_transitions(net):
        v = oracle.verdict(t)
        if not v.sequentialisable:
            out.append(v)
    return out


@dataclass
class HamiltonianReport:
    case: str  # 'none' | 'unique' | 'pair' | 'other'
    normals: list[Transition]
    violations: list[str]
    full_size_checked: bool = False
    full_size_violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.full_size_violations


def check_lemma_hamiltonian(net: Network, normals: list[Transition] | None = None, sig=None) -> HamiltonianReport:
    """Normal transitions of a network whose critical cycles all span every automaton.

    Checks that there are at most two of them (a transition and its reverse),
    that in the single case the stable automata of the target carry positive
    loops, that targets have no asynchronous predecessor, and the no-impact /
    F-impact conclusions when every normal transition has size ``n``.
    """
    _require_monotone(net)
    n = net.n
    every = frozenset(range(n))
    non_ham = [c for c in critical_cycles(net) if frozenset(c.nodes) != every]
    if non_ham:
        raise PreconditionUnmet(f"critical cycle on {list(non_ham[0].nodes)} does not span all automata")
    if normals is None:
        normals = [v.transition for v in normal_transitions(net)]
    if sig is None:
        sig = build_graph(net, "sig")
    violations = []
    if not normals:
        case = "none"
    elif len(normals) == 1:
        case = "unique"
    elif len(normals) == 2 and (normals[0].source, normals[0].target) == (normals[1].target, normals[1].source):
        case = "pair"
    else:
        case = "other"
        violations.append(f"{len(normals)} normal transitions: {[str(t) for t in normals]}")
    if case == "unique":
        y = normals[0].target
        st = net.structure
        for i in range(n):
            if not (net.unstable_masks[y] >> i) & 1 and st.sign(i, i) != 1:
                violations.append(f"automaton {i} stable in {to_bits(y, n)} without a positive loop")
    for t in normals:
        preds = [z for z in sig.pred[t.target] if z != t.target]
        if preds:
            violations.append(f"target of {t} has asynchronous predecessors {[to_bits(z, n) for z in preds]}")
    full = bool(normals) and all(t.size == n for t in normals)
    full_bad = []
    if full:
        from .impact import check_full_size_normals
        full_bad = check_full_size_normals(net, normals, sig)
    return HamiltonianReport(case, list(normals), violations, full, full_bad)
