"""Impact of one added synchronous transition, and sensitivity to synchronism.

The classifier builds both the SIG and the SIG plus the transition, reads off
recurrence and reachable attractors, then matches the four impact kinds.
Anything matching none of them is labelled ``extended`` and kept as evidence.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .core import Network, NonMonotoneNetwork, check_size, indices_of, to_bits
from .cycles import critical_cycles, structural_cycles
from .dynamics import (
    Correspondence, InvalidTransition, Transition, TransitionGraph, _correspondence, build_graph,
    validate_transition,
)
from .sequential import SequentialisationOracle, normal_transitions

__all__ = [
    "Impact", "ImpactReport", "SensitivityReport", "PrerequisiteReport", "classify_impact",
    "impact_violations", "impact_label", "sensitivity_labels", "classify_sensitivity", "sensitivity_from_impacts", "check_structural_prerequisites",
    "check_full_size_normals",
]


class Impact(str, enum.Enum):
    NONE = "none"
    F = "F"
    G = "G"
    D = "D"
    EXTENDED = "extended"


@dataclass
class ImpactReport:
    transition: Transition
    label: Impact
    x_recurrent: bool
    y_recurrent: bool
    Aa_x: tuple[int, ...]
    Aa_y: tuple[int, ...]
    correspondence: Correspondence = field(repr=False)
    detail: str = ""

    @property
    def sig(self) -> TransitionGraph:
        return self.correspondence.sig

    @property
    def aug(self) -> TransitionGraph:
        return self.correspondence.aug

    def to_json(self) -> dict:
        n = self.transition.n
        sig = self.sig

        def atts(ks):
            return [sig.attractors[k].bits(n) for k in ks]

        c = self.correspondence
        return {
            "from": to_bits(self.transition.source, n),
            "to": to_bits(self.transition.target, n),
            "label": self.label.value,
            "x_recurrent": self.x_recurrent,
            "y_recurrent": self.y_recurrent,
            "Aa_x": atts(self.Aa_x),
            "Aa_y": atts(self.Aa_y),
            "destroyed": atts(c.destroyed),
            "grown": [{"from": sig.attractors[k].bits(n), "into": c.aug.attractors[h].bits(n)}
                      for k, h in sorted(c.grown.items())],
            "detail": self.detail,
        }


def classify_impact(net: Network, t: Transition, sig: TransitionGraph | None = None) -> ImpactReport:
    check_size(net.n, "sig")
    validate_transition(net, t)
    if t.size < 2:
        raise InvalidTransition(f"{t} is asynchronous")
    if sig is None:
        sig = build_graph(net, "sig")
    corr = _correspondence(sig, build_graph(net, t))
    x, y = t.source, t.target
    label, detail = impact_label(sig, x, y)
    ax, ay = sig.attractor_mask(x), sig.attractor_mask(y)
    return ImpactReport(t, label, sig.is_recurrent(x), sig.is_recurrent(y),
                        tuple(indices_of(ax)), tuple(indices_of(ay)), corr, detail)


def impact_label(sig: TransitionGraph, x: int, y: int) -> tuple[Impact, str]:
    """Label of ``x => y`` read off the SIG alone (no augmented graph)."""
    xr, yr = sig.is_recurrent(x), sig.is_recurrent(y)
    ax, ay = sig.attractor_mask(x), sig.attractor_mask(y)
    if not xr:
        return (Impact.NONE if ay & ~ax == 0 else Impact.F), ""
    if yr and ay & ~ax:
        return Impact.D, ""
    if not yr and ay == ax:
        return Impact.G, ""
    if yr and ay == ax:
        # both endpoints in one attractor: the new edge stays inside it
        return Impact.NONE, "edge inside an attractor"
    return Impact.EXTENDED, "x recurrent, y transient, A_a(y) != {att_a(x)}"


def impact_violations(rep: ImpactReport) -> list[str]:
    """Check a report against the conservation properties of its label."""
    sig, aug, c = rep.sig, rep.aug, rep.correspondence
    x, y = rep.transition.source, rep.transition.target
    out = list(c.violations)
    if rep.label in (Impact.NONE, Impact.F):
        if sig.recurrent_set != aug.recurrent_set:
            out.append(f"{rep.label.value}: recurrent configurations changed")
    if rep.label is Impact.D:
        k = sig.attractor_index(x)
        alive = [z for z in sig.attractors[k].configs if aug.is_recurrent(z)]
        if alive:
            out.append(f"D: configurations {alive} of att_a(x) still recurrent")
    if rep.label is Impact.G:
        k = sig.attractor_index(x)
        hx, hy = aug.attractor_index(x), aug.attractor_index(y)
        if hx is None or hx != hy or not sig.attractors[k].configs < aug.attractors[hx].configs:
            out.append("G: att(x) does not strictly grow into att(y)")
    # A(z) = image of A_a(z) ∪ A_a(y) for every z that reaches x asynchronously
    ay = sig.attractor_mask(y)
    for z in sig.backward(x):
        want = c.image(indices_of(sig.attractor_mask(z) | ay))
        got = set(aug.reachable_attractors(z))
        if want != got:
            out.append(f"reachable attractors of {to_bits(z, rep.transition.n)} differ from A_a(z) ∪ A_a(y)")
            break
    return out


@dataclass
class SensitivityReport:
    n: int
    name: str
    impacts: list[ImpactReport]
    merge_pairs: list[tuple[Transition, Transition]]
    sensitivities: frozenset[str]

    @property
    def normal_count(self) -> int:
        return len(self.impacts)

    @property
    def per_label(self) -> dict[str, int]:
        counts = {m.value: 0 for m in Impact}
        for r in self.impacts:
            counts[r.label.value] += 1
        return counts

    @property
    def very_sensitive(self) -> bool:
        return bool(self.sensitivities & {"D", "M"})

    def witnesses(self) -> dict[str, list[Transition]]:
        out: dict[str, list[Transition]] = {}
        for r in self.impacts:
            if r.label is not Impact.NONE:
                out.setdefault(r.label.value, []).append(r.transition)
        return out

    def to_json(self) -> dict:
        n = self.n

        def tj(t):
            return {"from": to_bits(t.source, n), "to": to_bits(t.target, n)}

        return {
            "sensitivities": sorted(self.sensitivities),
            "very_sensitive": self.very_sensitive,
            "normal_count": self.normal_count,
            "per_label": self.per_label,
            "merge_pairs": [[tj(a), tj(b)] for a, b in self.merge_pairs],
            "witnesses": {k: [tj(t) for t in v] for k, v in sorted(self.witnesses().items())},
        }


def classify_sensitivity(net: Network, mode: str = "strict", sig: TransitionGraph | None = None,
                         oracle: SequentialisationOracle | None = None) -> SensitivityReport:
    check_size(net.n, "eig")
    if sig is None:
        sig = build_graph(net, "sig")
    normals = normal_transitions(net, mode, oracle)
    impacts = [classify_impact(net, v.transition, sig) for v in normals]
    return sensitivity_from_impacts(net, sig, impacts)


def sensitivity_from_impacts(net: Network, sig: TransitionGraph, impacts: list[ImpactReport]) -> SensitivityReport:
    """Aggregate per-transition impacts; a D-impact transition paired with a
    reverse one between the same two attractors counts as a merge instead."""
    sens, merge_pairs = sensitivity_labels(sig, [(r.transition, r.label) for r in impacts])
    return SensitivityReport(net.n, net.name, impacts, merge_pairs, sens)


def sensitivity_labels(sig: TransitionGraph, labelled) -> tuple[frozenset[str], list]:
    """Sensitivity kinds from ``(transition, impact)`` pairs, plus the D-pairs that merge."""
    sens = set()
    ds = []
    for t, label in labelled:
        if label is Impact.F or label is Impact.G:
            sens.add(label.value)
        elif label is Impact.D:
            ds.append((t, sig.attractor_index(t.source), sig.attractor_index(t.target)))
    merge_pairs = []
    for a, ka, la in ds:
        partner = False
        for b, kb, lb in ds:
            if (kb, lb) == (la, ka):
                partner = True
                if a < b:
                    merge_pairs.append((a, b))
        sens.add("M" if partner else "D")
    return frozenset(sens), merge_pairs


@dataclass
class PrerequisiteReport:
    violations: list[str]
    critical_lengths: list[int]
    negative_cycle: bool
    hamiltonian_exception: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def check_structural_prerequisites(net: Network, report: SensitivityReport,
                                   sig: TransitionGraph | None = None,
                                   lengths: list[int] | None = None) -> PrerequisiteReport:
    """Structural conditions that sensitivity to synchronism requires.

    ``lengths`` (critical cycle lengths) may be passed when already known.
    """
    if not net.structure.is_monotone:
        raise NonMonotoneNetwork(f"non-monotone arcs {net.structure.nonmonotone_arcs}")
    n = net.n
    st = net.structure
    if lengths is None:
        lengths = [c.length for c in critical_cycles(net)]
    negative = any(s == -1 for _, s in structural_cycles(st))
    short = any(l < n for l in lengths)
    loops = all(st.sign(i, i) == 1 for i in range(n))
    ham_exception = (n in lengths) and loops
    sens = report.sensitivities
    out = []
    if sens and not lengths:
        out.append(f"sensitive ({sorted(sens)}) without any critical cycle")
    if sens & {"G", "D", "M"}:
        if not short:
            out.append("G/D/M-sensitive without a critical cycle shorter than n")
        if not negative:
            out.append("G/D/M-sensitive without a negative cycle")
    if "F" in sens and not short and not ham_exception:
        out.append("F-sensitive without a short critical cycle or the Hamiltonian/positive-loop exception")
    if sig is None:
        sig = build_graph(net, "sig")
    if any(a.kind == "unstable" for a in sig.attractors) and not negative:
        out.append("unstable SIG attractor without a negative cycle")
    return PrerequisiteReport(out, lengths, negative, ham_exception)


def check_full_size_normals(net: Network, normals: list[Transition], sig: TransitionGraph | None = None) -> list[str]:
    """Consequences when every normal transition flips all ``n`` automata.

    Each has no impact or F-impact; with F-impact the target is a stable
    configuration without asynchronous predecessors and every automaton
    carries a positive loop.
    """
    n = net.n
    if any(t.size < n for t in normals):
        raise ValueError("some normal transition is smaller than n")
    if sig is None:
        sig = build_graph(net, "sig")
    out = []
    st = net.structure
    for t in normals:
        rep = classify_impact(net, t, sig)
        if rep.label not in (Impact.NONE, Impact.F):
            out.append(f"{t}: impact {rep.label.value}, expected none or F")
        if rep.label is Impact.F:
            y = t.target
            if net.unstable_masks[y]:
                out.append(f"{t}: F-impact but target unstable")
            if any(z != y for z in sig.pred[y]):
                out.append(f"{t}: F-impact but target has a nonempty basin")
            if not all(st.sign(i, i) == 1 for i in range(n)):
                out.append(f"{t}: F-impact but not every automaton has a positive loop")
    return out
