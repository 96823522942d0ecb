"""Exhaustive and sampled enumeration of small networks, and claim checking.

Every claim is checked per network by :func:`check_network`, which returns a
small ledger; ledgers merge associatively so shards can run in any order or
in separate processes.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

from .core import Network, check_size, format_network, function_arcs, indices_of, to_bits
from .cycles import _arcs_within, _cycles_of_mask, critical_arc_mask, cycle_arcs
from .dynamics import Transition, TransitionGraph, build_graph, ordered_submasks
from .impact import (
    Impact, check_full_size_normals, check_structural_prerequisites, classify_impact, impact_label,
    impact_violations, sensitivity_from_impacts, sensitivity_labels,
)
from .sequential import (
    SequentialisationOracle, _layers, admissible_derivation, on_critical_trail, check_lemma_hamiltonian, synchronous_transitions,
)

__all__ = [
    "CLAIMS", "EnumerationSpec", "ClaimResult", "VerificationLedger", "monotone_tables",
    "enumerate_networks", "sample_networks", "relabel", "is_canonical", "orbit_size",
    "check_network", "scan_sensitivity", "scan_network", "run", "verify_size2_claims", "verify_size3_claims",
    "verify_lemmas_and_propositions", "replay_witness", "worker_count",
]

CLAIMS = {
    "lemma1_loops": "stable in x and its i-flip => positive loop on i; unstable in both => negative loop",
    "lemma1_loops_nonmonotone": "non-monotone networks: the loop (i,i) exists and has no sign opposite to lemma1_loops",
    "lemma2_frustrations": "i unstable in x and FRUS(x)∩in(i) ⊆ FRUS(y)∩in(i) => i unstable in y",
    "lemma2_same_state": "as lemma2_frustrations, restricted to y with y_i = x_i",
    "lemma2_strict": "as lemma2_frustrations with strict inclusion",
    "prop1_sign_parity": "every critical cycle is positive of even length or negative of odd length",
    "prop2_steps_valid": "every step of the layered derivation is a transition",
    "prop2_split_sequentialisable": "a layered derivation with >= 2 layers => search finds a derivation",
    "prop2_blocks_critical": "every layer of >= 2 automata lies on one x-critical closed trail",
    "prop2_statement": "some derivation of the transition has every step of >= 2 automata "
                       "on one x-critical closed trail",
    "prop2_corollary_total": "no x-critical cycle inside the change set => totally sequentialisable",
    "witness_replay": "every search witness replays with strictly smaller valid steps",
    "lemma3_hamiltonian": "only Hamiltonian critical cycles => at most x=>y and y=>x, loop and basin conditions",
    "lemma4_full_size": "only Hamiltonian critical cycles and all normal transitions of size n => "
                        "no impact or F with stable, basinless target",
    "lemma4_literal": "all normal transitions of size n (any critical cycles) => no impact or F",
    "prop3_prerequisites": "sensitivity kinds require their structural cycles",
    "impact_coverage": "every normal transition matches one of none/F/G/D",
    "conservation": "recurrent sets, destroyed/grown attractors and reachable sets behave as labelled",
    "totally_sequentialisable_no_impact": "totally sequentialisable synchronous transitions have no impact",
    "sequentialisable_no_impact": "sequentialisable synchronous transitions have no impact",
}

# reported, never refuting: readings that are known to admit counterexamples
AUDIT = {"lemma2_strict", "lemma4_literal", "sequentialisable_no_impact", "size3_sign_symmetry"}

WITNESS_CAP = 20


def worker_count() -> int:
    return max(1, int(os.environ.get("BANSYNC_WORKERS", "1")))


# -- enumeration ----------------------------------------------------------

@dataclass(frozen=True)
class EnumerationSpec:
    n: int
    monotone_only: bool = True
    canonical_only: bool = False
    sample: int | None = None
    seed: int = 0
    allow_nonmonotone_n3: bool = False

    def validate(self) -> None:
        if not 1 <= self.n <= 5:
            raise ValueError("enumeration supports 1 <= n <= 5")
        if self.sample is None:
            if self.n >= 4:
                raise ValueError(f"n={self.n} needs a sample size")
            if self.n == 3 and not self.monotone_only and not self.allow_nonmonotone_n3:
                raise ValueError("exhaustive non-monotone n=3 (256^3 networks) needs allow_nonmonotone_n3")
        if self.sample is not None and self.canonical_only:
            raise ValueError("canonical pruning applies to exhaustive runs only")

    @property
    def domain(self) -> str:
        kind = "monotone" if self.monotone_only else "all"
        how = f"sample of {self.sample} (seed {self.seed})" if self.sample else "exhaustive"
        canon = ", relabelling-canonical" if self.canonical_only else ""
        return f"n={self.n}, {kind}, {how}{canon}"


@lru_cache(maxsize=None)
def monotone_tables(n: int) -> tuple[int, ...]:
    """Truth tables over ``B^n`` that are locally monotone in every input."""
    if n > 4:
        raise ValueError("monotone tables are listed up to n=4")
    return tuple(t for t in range(1 << (1 << n))
                 if all(s != 0 for _, s in function_arcs(t, n)))


def _tables(spec: EnumerationSpec) -> tuple[int, ...]:
    return monotone_tables(spec.n) if spec.monotone_only else tuple(range(1 << (1 << spec.n)))


@lru_cache(maxsize=None)
def _config_perm(n: int, perm: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for x in range(1 << n):
        y = 0
        for i in range(n):
            if (x >> i) & 1:
                y |= 1 << perm[i]
        out.append(y)
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def _permute_table(t: int, n: int, perm: tuple[int, ...]) -> int:
    cp = _config_perm(n, perm)
    out = 0
    for x in range(1 << n):
        if (t >> x) & 1:
            out |= 1 << cp[x]
    return out


def relabel(tables: tuple[int, ...], n: int, perm: tuple[int, ...]) -> tuple[int, ...]:
    """Rename automaton ``i`` to ``perm[i]``."""
    out = [0] * n
    for i, t in enumerate(tables):
        out[perm[i]] = _permute_table(t, n, perm)
    return tuple(out)


def _relabellings(tables, n):
    return {relabel(tables, n, p) for p in permutations(range(n))}


def is_canonical(tables: tuple[int, ...], n: int) -> bool:
    return all(tables <= r for r in _relabellings(tables, n))


def orbit_size(tables: tuple[int, ...], n: int) -> int:
    return len(_relabellings(tables, n))


def enumerate_networks(spec: EnumerationSpec, first: int | None = None):
    """Yield networks in lexicographic table order (automaton 0 slowest).

    ``first`` pins automaton 0 to one table, which is how runs are sharded.
    """
    spec.validate()
    if spec.sample is not None:
        yield from sample_networks(spec)
        return
    tables = _tables(spec)
    heads = tables if first is None else (first,)
    n = spec.n
    for t0 in heads:
        for rest in product(tables, repeat=n - 1):
            tt = (t0,) + rest
            if spec.canonical_only and not is_canonical(tt, n):
                continue
            yield Network(n, tt)


def _random_unate(n: int, rng: random.Random) -> int:
    # random DNF over literals with one fixed polarity per variable
    from .expr import variable_mask
    full = (1 << (1 << n)) - 1
    polarity = [rng.random() < 0.5 for _ in range(n)]
    nterms = rng.randint(0, 4)
    if nterms == 0:
        return full if rng.random() < 0.5 else 0
    t = 0
    for _ in range(nterms):
        k = rng.randint(1, min(3, n))
        term = full
        for v in rng.sample(range(n), k):
            m = variable_mask(v, n)
            term &= m if polarity[v] else full & ~m
        t |= term
    return t


def sample_networks(spec: EnumerationSpec):
    rng = random.Random(spec.seed)
    n = spec.n
    if not spec.monotone_only:
        top = 1 << (1 << n)
        for _ in range(spec.sample):
            yield Network(n, tuple(rng.randrange(top) for _ in range(n)))
    elif n <= 4:
        tables = monotone_tables(n)
        for _ in range(spec.sample):
            yield Network(n, tuple(rng.choice(tables) for _ in range(n)))
    else:
        for _ in range(spec.sample):
            yield Network(n, tuple(_random_unate(n, rng) for _ in range(n)))


# -- ledger ---------------------------------------------------------------

@dataclass
class ClaimResult:
    claim: str
    checked: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    audit: bool = False  # audit claims are reported but never refute

    def fail(self, net: Network, detail: str) -> None:
        self.failures += 1
        if len(self.witnesses) < WITNESS_CAP:
            self.witnesses.append({"tables": list(net.tables), "n": net.n, "detail": detail})

    def add(self, net: Network, checked: int, failures: int, details=()) -> None:
        """Charge precomputed tallies to ``net``."""
        self.checked += checked
        self.failures += failures
        for d in details[:WITNESS_CAP - len(self.witnesses)]:
            self.witnesses.append({"tables": list(net.tables), "n": net.n, "detail": d})

    def merge(self, other: "ClaimResult") -> None:
        self.checked += other.checked
        self.failures += other.failures
        self.witnesses.extend(other.witnesses)
        self.witnesses.sort(key=lambda w: (w["tables"], w["detail"]))
        del self.witnesses[WITNESS_CAP:]


@dataclass
class VerificationLedger:
    domain: str = ""
    seed: int | None = None
    sampled: bool = False
    networks: int = 0
    weight: int = 0  # networks represented, counting relabelling orbits
    claims: dict[str, ClaimResult] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)
    records: dict[str, list] = field(default_factory=dict)

    def claim(self, cid: str, audit: bool | None = None) -> ClaimResult:
        c = self.claims.get(cid)
        if c is None:
            c = self.claims[cid] = ClaimResult(cid, audit=cid in AUDIT if audit is None else audit)
        return c

    def count(self, key: str, k: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + k

    def record(self, key: str, item) -> None:
        self.records.setdefault(key, []).append(item)

    def merge(self, other: "VerificationLedger") -> "VerificationLedger":
        self.networks += other.networks
        self.weight += other.weight
        for cid, c in other.claims.items():
            self.claim(cid, c.audit).merge(c)
        for k, v in other.counts.items():
            self.count(k, v)
        for k, v in other.records.items():
            self.records.setdefault(k, []).extend(v)
            self.records[k].sort()
        return self

    def verdict(self, cid: str) -> str:
        c = self.claims[cid]
        if c.failures and not c.audit:
            return "refuted"
        if c.failures:
            return "flagged"
        return "inconclusive" if self.sampled else "confirmed"

    @property
    def refuted(self) -> list[str]:
        return [cid for cid in sorted(self.claims) if self.verdict(cid) == "refuted"]

    def to_json(self) -> dict:
        return {
            "domain": self.domain,
            "seed": self.seed,
            "networks": self.networks,
            "weight": self.weight,
            "claims": {
                cid: {
                    "description": CLAIMS.get(cid, cid),
                    "verdict": self.verdict(cid),
                    "checked": c.checked,
                    "failures": c.failures,
                    "witnesses": [dict(w, network=format_network(Network(w["n"], tuple(w["tables"]))))
                                  for w in c.witnesses],
                }
                for cid, c in sorted(self.claims.items())
            },
            "counts": dict(sorted(self.counts.items())),
            "records": {k: v for k, v in sorted(self.records.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)


# -- per-network checks -----------------------------------------------------

def _lemma1_at(net: Network, i: int, c: "ClaimResult") -> None:
    # on non-monotone functions the loop may carry no definite sign; only its
    # presence (and the absence of the opposite sign) is claimed there
    st = net.structure
    monotone = st.is_monotone
    um = net.unstable_masks
    bit = 1 << i
    s = st.sign(i, i)
    for x in range(net.size):
        a = um[x] & bit
        b = um[x ^ bit] & bit
        c.checked += 1
        if not a and not b and (s != 1 if monotone else s not in (1, 0) or (i, i) not in st.signs):
            c.fail(net, f"i={i} x={to_bits(x, net.n)} stable twice, loop sign {s}")
        elif a and b and (s != -1 if monotone else s not in (-1, 0) or (i, i) not in st.signs):
            c.fail(net, f"i={i} x={to_bits(x, net.n)} unstable twice, loop sign {s}")


def _in_arc_masks(n: int) -> list[int]:
    return [sum(1 << (j * n + i) for j in range(n)) for i in range(n)]


def _lemma2_at(net: Network, i: int, c, c_same, c_strict) -> None:
    n = net.n
    um = net.unstable_masks
    into = _in_arc_masks(n)[i]
    bit = 1 << i
    restricted = [f & into for f in net.frustration_masks]
    for x in range(net.size):
        if not um[x] & bit:
            continue
        fx = restricted[x]
        for y in range(net.size):
            fy = restricted[y]
            if fx & ~fy:
                continue
            c.checked += 1
            same = not (x ^ y) & bit
            c_same.checked += same
            strict = fx != fy
            c_strict.checked += strict
            if not um[y] & bit:
                detail = f"i={i} x={to_bits(x, n)} y={to_bits(y, n)}"
                c.fail(net, detail)
                if same:
                    c_same.fail(net, detail)
                if strict:
                    c_strict.fail(net, detail)


@lru_cache(maxsize=1 << 16)
def _local_tallies(n: int, i: int, table: int, lemma2: bool) -> tuple:
    """Loop-sign and frustration-inclusion tallies for automaton ``i``.

    Both lemmas only read f_i (stability of i and the signs of the arcs into
    i), so they are computed once per function on a network whose other
    automata are constant, then charged to every network using f_i.
    """
    probe = Network(n, tuple(table if k == i else 0 for k in range(n)))
    parts = [ClaimResult("lemma1")]
    _lemma1_at(probe, i, parts[0])
    if lemma2:
        parts += [ClaimResult("lemma2_frustrations"), ClaimResult("lemma2_same_state"),
                  ClaimResult("lemma2_strict")]
        _lemma2_at(probe, i, *parts[1:])
    return tuple((c.claim, c.checked, c.failures, tuple(w["detail"] for w in c.witnesses)) for c in parts)


def _check_local_lemmas(net: Network, led: VerificationLedger, monotone: bool) -> None:
    for i, table in enumerate(net.tables):
        for cid, checked, failures, details in _local_tallies(net.n, i, table, monotone):
            if cid == "lemma1":
                cid = "lemma1_loops" if monotone else "lemma1_loops_nonmonotone"
            led.claim(cid).add(net, checked, failures, details)


def _critical_cycles_checked(net: Network, led: VerificationLedger) -> dict:
    """Critical cycles keyed by arc set (smallest witness kept); checks sign/parity."""
    c = led.claim("prop1_sign_parity")
    n = net.n
    st = net.structure
    seen: dict = {}
    for x in range(net.size):
        h = critical_arc_mask(net, x)
        if not h:
            continue
        for nodes in _cycles_of_mask(n, h):
            arcs = cycle_arcs(nodes)
            key = tuple(sorted(arcs))
            if key in seen:
                continue
            sign = 1
            for j, i in arcs:
                sign *= st.sign(j, i)
            seen[key] = (nodes, sign, x)
            c.checked += 1
            if (sign == 1) != (len(arcs) % 2 == 0):
                c.fail(net, f"cycle {list(nodes)} sign {sign} length {len(arcs)} witness {to_bits(x, n)}")
    return seen


def _transition_checks(net: Network, sig: TransitionGraph, oracle: SequentialisationOracle,
                       led: VerificationLedger) -> list[Transition]:
    """Search verdicts, witness replay and the layered decomposition of every
    synchronous transition; returns the normal ones.

    Works on raw configurations; :func:`decompose` and
    :meth:`SequentialisationOracle.verdict` are the reference versions.
    """
    n = net.n
    um = net.unstable_masks
    c_valid = led.claim("prop2_steps_valid")
    c_split = led.claim("prop2_split_sequentialisable")
    c_block = led.claim("prop2_blocks_critical")
    c_total = led.claim("prop2_corollary_total")
    c_stmt = led.claim("prop2_statement")
    c_replay = led.claim("witness_replay")
    c_tot = led.claim("totally_sequentialisable_no_impact")
    c_seq = led.claim("sequentialisable_no_impact")
    normals = []
    count = 0
    for x, u in enumerate(um):
        if u.bit_count() < 2:
            continue
        async_tree = oracle._tree(x, 1)
        for w in ordered_submasks(u):
            k = w.bit_count()
            if k < 2:
                continue
            count += 1
            y = x ^ w
            tree = oracle._tree(x, k - 1)
            seq = y in tree
            totally = y in async_tree
            if seq:
                c_replay.checked += 1
                path = oracle._path(tree, y)
                if len(path) < 3 or any(
                        not (a ^ b) or (a ^ b) & ~um[a] or (a ^ b).bit_count() >= k
                        for a, b in zip(path, path[1:])):
                    c_replay.fail(net, f"{Transition(x, y, n)}: witness {[to_bits(z, n) for z in path]}")
                label = _quick_label(sig, x, y)
                c_seq.checked += 1
                if label is not Impact.NONE:
                    c_seq.fail(net, f"{Transition(x, y, n)} sequentialisable with impact {label.value}")
                if totally:
                    c_tot.checked += 1
                    if label is not Impact.NONE:
                        c_tot.fail(net, f"{Transition(x, y, n)} totally sequentialisable with impact {label.value}")
            else:
                normals.append(Transition(x, y, n))
            # layered decomposition
            c_valid.checked += 1
            h = critical_arc_mask(net, x, w)
            layers = _layers(n, w, h)
            z = x
            broken = False
            for m in layers:
                if m & ~um[z]:
                    c_valid.fail(net, f"{Transition(x, y, n)}: flipping {indices_of(m)} "
                                      f"from {to_bits(z, n)} is not a transition")
                    broken = True
                    break
                z ^= m
            if broken:
                continue
            if len(layers) >= 2:
                c_split.checked += 1
                if not seq:
                    c_split.fail(net, f"{Transition(x, y, n)} splits into "
                                      f"{[indices_of(m) for m in layers]} but search says normal")
            singles = True
            layered_ok = True
            for m in layers:
                if m.bit_count() > 1:
                    singles = False
                    c_block.checked += 1
                    if not on_critical_trail(net, x, m):
                        layered_ok = False
                        c_block.fail(net, f"{Transition(x, y, n)}: layer {indices_of(m)} not on one critical closed trail")
            # the layers themselves witness the statement unless a layer failed
            c_stmt.checked += 1
            if not layered_ok and admissible_derivation(net, Transition(x, y, n)) is None:
                c_stmt.fail(net, f"{Transition(x, y, n)}: no derivation with critical blocks")
            if singles and not _cycles_of_mask(n, h):
                c_total.checked += 1
                if not totally:
                    c_total.fail(net, f"{Transition(x, y, n)}: acyclic change set but not totally sequentialisable")
    led.count("synchronous_transitions", count)
    return normals


def _quick_label(sig: TransitionGraph, x: int, y: int) -> Impact:
    return impact_label(sig, x, y)[0]


def check_network(net: Network, weight: int = 1) -> VerificationLedger:
    """Run every applicable claim on one network."""
    led = VerificationLedger(networks=1, weight=weight)
    n = net.n
    monotone = net.structure.is_monotone
    _check_local_lemmas(net, led, monotone)
    led.count("monotone" if monotone else "nonmonotone")
    sig = build_graph(net, "sig")
    oracle = SequentialisationOracle(net)
    if monotone:
        cycles = _critical_cycles_checked(net, led)
        normals = _transition_checks(net, sig, oracle, led)
    else:
        cycles = None
        normals = [t for t in synchronous_transitions(net) if not oracle.verdict(t).sequentialisable]
        led.count("synchronous_transitions", sum(1 for _ in synchronous_transitions(net)))
    impacts = [classify_impact(net, t, sig) for t in normals]
    c_cov = led.claim("impact_coverage")
    c_cons = led.claim("conservation")
    for r in impacts:
        led.count(f"impact_{r.label.value}")
        c_cov.checked += 1
        if r.label is Impact.EXTENDED:
            c_cov.fail(net, f"{r.transition}: {r.detail}")
        c_cons.checked += 1
        bad = impact_violations(r)
        if bad:
            c_cons.fail(net, f"{r.transition} ({r.label.value}): {'; '.join(bad)}")
    rep = sensitivity_from_impacts(net, sig, impacts)
    if normals:
        led.count("with_normal_transitions")
    for s in rep.sensitivities:
        led.count(f"sensitive_{s}")
    if rep.very_sensitive:
        led.count("very_sensitive")
        led.record("very_sensitive", [list(net.tables), sorted(rep.sensitivities),
                                      sorted({t.size for t in normals})])
    if monotone:
        c3 = led.claim("prop3_prerequisites")
        c3.checked += 1
        pre = check_structural_prerequisites(net, rep, sig, [len(v[0]) for v in cycles.values()])
        if not pre.ok:
            c3.fail(net, "; ".join(pre.violations))
        every = frozenset(range(n))
        hamiltonian = bool(cycles) and all(frozenset(nodes) == every for nodes, _, _ in cycles.values())
        if hamiltonian:
            c = led.claim("lemma3_hamiltonian")
            c.checked += 1
            ham = check_lemma_hamiltonian(net, normals, sig)
            if ham.violations:
                c.fail(net, "; ".join(ham.violations))
            if ham.full_size_checked:
                c4 = led.claim("lemma4_full_size")
                c4.checked += 1
                if ham.full_size_violations:
                    c4.fail(net, "; ".join(ham.full_size_violations))
        if normals and all(t.size == n for t in normals):
            c = led.claim("lemma4_literal")
            c.checked += 1
            bad = check_full_size_normals(net, normals, sig)
            if bad:
                c.fail(net, "; ".join(bad))
    return led


def scan_sensitivity(net: Network) -> tuple[frozenset[str], list[int]]:
    """Sensitivity kinds and normal-transition sizes, read off the SIG only.

    The light pass behind the size-2/size-3 scans: no augmented graphs, no
    decompositions.
    """
    n = net.n
    um = net.unstable_masks
    sig = build_graph(net, "sig")
    oracle = SequentialisationOracle(net)
    labelled = []
    for x, u in enumerate(um):
        if u.bit_count() < 2:
            continue
        for w in ordered_submasks(u):
            k = w.bit_count()
            if k < 2 or x ^ w in oracle._tree(x, k - 1):
                continue
            labelled.append((Transition(x, x ^ w, n), impact_label(sig, x, x ^ w)[0]))
    sens, _ = sensitivity_labels(sig, labelled)
    return sens, sorted({t.size for t, _ in labelled})


def scan_network(net: Network, weight: int = 1) -> VerificationLedger:
    led = VerificationLedger(networks=1, weight=weight)
    led.count("monotone" if net.structure.is_monotone else "nonmonotone")
    sens, sizes = scan_sensitivity(net)
    if sizes:
        led.count("with_normal_transitions")
    for k in sens:
        led.count(f"sensitive_{k}")
    if sens & {"D", "M"}:
        led.count("very_sensitive")
        led.record("very_sensitive", [list(net.tables), sorted(sens), sizes])
    return led


# -- drivers ----------------------------------------------------------------

def _shard(args) -> VerificationLedger:
    spec, first, light = args
    check = scan_network if light else check_network
    led = VerificationLedger()
    for net in enumerate_networks(spec, first):
        w = orbit_size(net.tables, net.n) if spec.canonical_only else 1
        led.merge(check(net, w))
    return led


def run(spec: EnumerationSpec, workers: int | None = None, light: bool = False) -> VerificationLedger:
    """Check every claim over the networks described by ``spec``.

    ``light`` only classifies sensitivity (see :func:`scan_network`).
    """
    spec.validate()
    check_size(spec.n, "eig")
    workers = worker_count() if workers is None else workers
    led = VerificationLedger(domain=spec.domain, seed=spec.seed if spec.sample else None,
                             sampled=spec.sample is not None)
    if spec.sample is not None:
        check = scan_network if light else check_network
        for net in sample_networks(spec):
            led.merge(check(net))
        return led
    shards = [(spec, t0, light) for t0 in _tables(spec)]
    if workers > 1:
        from multiprocessing import Pool
        with Pool(workers) as pool:
            for part in pool.imap_unordered(_shard, shards, chunksize=1):
                led.merge(part)
    else:
        for s in shards:
            led.merge(_shard(s))
    return led


XOR, XNOR = "x0 ^ x1", "!(x0 ^ x1)"
CAPTION_INSTANCE = ("x2 | (x0 & !x1)", "x2 | (!x0 & x1)", "!x2 & (x0 | x1)")


def verify_size2_claims(workers: int | None = None, ledger: VerificationLedger | None = None) -> VerificationLedger:
    """All 256 networks of size 2 (full checks are cheap here)."""
    led = ledger if ledger is not None else run(EnumerationSpec(2, monotone_only=False), workers)
    vs = {tuple(r[0]): r for r in led.records.get("very_sensitive", [])}
    c = led.claim("size2_monotone_not_very_sensitive")
    c.checked = led.counts.get("monotone", 0)
    for tables, rec in sorted(vs.items()):
        net = Network(2, tables)
        if net.structure.is_monotone:
            c.fail(net, f"monotone and very sensitive: {rec[1]}")
    c = led.claim("size2_xor_d_sensitive")
    for a, b in product((XOR, XNOR), repeat=2):
        net = Network.from_expressions([a, b])
        c.checked += 1
        rec = vs.get(net.tables)
        if rec is None or "D" not in rec[1]:
            c.fail(net, f"f0={a}, f1={b} not D-sensitive")
    return led


def _symmetric_signs(net: Network) -> bool:
    st = net.structure
    return all(st.sign(j, i) == st.sign(i, j) for i in range(net.n) for j in range(i + 1, net.n))


def verify_size3_claims(workers: int | None = None, canonical: bool = False,
                        ledger: VerificationLedger | None = None) -> VerificationLedger:
    """All monotone networks of size 3 (optionally one per relabelling orbit)."""
    if ledger is None:
        ledger = run(EnumerationSpec(3, monotone_only=True, canonical_only=canonical), workers, light=True)
    led = ledger
    witnesses = led.records.get("very_sensitive", [])
    c_d = led.claim("size3_very_sensitive_is_D")
    c_2 = led.claim("size3_normal_of_size_2")
    c_sym = led.claim("size3_sign_symmetry")
    for tables, sens, sizes in witnesses:
        net = Network(3, tuple(tables))
        c_d.checked += 1
        if "M" in sens or "D" not in sens:
            c_d.fail(net, f"very sensitive with {sens}")
        c_2.checked += 1
        if 2 not in sizes:
            c_2.fail(net, f"normal transition sizes {sizes}")
        c_sym.checked += 1
        if not _symmetric_signs(net):
            c_sym.fail(net, "signs not symmetric: " + str({k: int(v) for k, v in net.structure.signs.items()}))
    c_cap = led.claim("size3_caption_instance")
    c_cap.checked += 1
    cap = Network.from_expressions(list(CAPTION_INSTANCE))
    listed = {tuple(w[0]) for w in witnesses}
    if canonical:
        found = any(r in listed for r in _relabellings(cap.tables, 3))
    else:
        found = cap.tables in listed
    if not found:
        c_cap.fail(cap, "caption instance not among very-sensitive witnesses")
    return led


def verify_lemmas_and_propositions(spec: EnumerationSpec, workers: int | None = None) -> VerificationLedger:
    return run(spec, workers)


def replay_witness(claim: str, witness: dict) -> bool:
    """Re-run the checks on a witness network; True if the claim fails again."""
    net = Network(witness["n"], tuple(witness["tables"]))
    if claim.startswith("size"):
        from .impact import classify_sensitivity
        rep = classify_sensitivity(net)
        if claim == "size2_monotone_not_very_sensitive":
            return net.structure.is_monotone and rep.very_sensitive
        if claim == "size2_xor_d_sensitive":
            return "D" not in rep.sensitivities
        if claim == "size3_very_sensitive_is_D":
            return rep.very_sensitive and ("M" in rep.sensitivities or "D" not in rep.sensitivities)
        if claim == "size3_normal_of_size_2":
            return rep.very_sensitive and all(r.transition.size != 2 for r in rep.impacts)
        if claim == "size3_sign_symmetry":
            return not _symmetric_signs(net)
        if claim == "size3_caption_instance":
            return not rep.very_sensitive
        raise KeyError(claim)
    led = check_network(net)
    return claim in led.claims and led.claims[claim].failures > 0
