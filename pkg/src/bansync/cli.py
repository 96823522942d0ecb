"""Command-line front end: ``bansync <command> FILE ...``.

Exit codes: 0 success, 1 a verification claim was refuted, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import (
    LIMITS, Network, NonMonotoneNetwork, SizeCeiling, check_size, format_network, parse_config, raise_limits,
    to_bits,
)
from .cycles import critical_cycles
from .dynamics import InvalidTransition, Transition, build_graph
from .expr import ParseError
from .impact import classify_impact, classify_sensitivity
from .search import EnumerationSpec, run, verify_size2_claims, verify_size3_claims, worker_count
from .sequential import SequentialisationOracle, synchronous_transitions

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str) -> Network:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return Network.from_text(text, name=Path(path).stem if path != "-" else "")
    except ParseError as e:
        raise InputError(f"{path}:{e.line}:{e.column}: {e.message}") from None


def _config(bits: str, n: int, what: str) -> int:
    try:
        return parse_config(bits, n)
    except ValueError as e:
        raise InputError(f"{what}: {e}") from None


def _emit(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# -- commands -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    net = _load(args.file)
    check_size(net.n, "sig")
    n = net.n
    st = net.structure
    funcs = format_network(net).splitlines()
    funcs = [ln for ln in funcs if ln[:1].isdigit()]
    inst = [{"config": to_bits(x, n), "unstable": [i for i in range(n) if (u >> i) & 1]}
            for x, u in enumerate(net.unstable_masks)]
    data = {
        "n": n,
        "name": net.name,
        "functions": funcs,
        "arcs": [{"from": j, "to": i, "sign": int(s)} for (j, i), s in sorted(st.signs.items())],
        "monotone": st.is_monotone,
        "nonmonotone_arcs": [list(a) for a in st.nonmonotone_arcs],
        "instabilities": inst,
    }
    lines = [f"network {net.name or '(unnamed)'}: n = {n}", "functions:"]
    lines += [f"  {f}" for f in funcs]
    lines.append("arcs:")
    lines += [f"  {j} -> {i} [{s.symbol}]" for (j, i), s in sorted(st.signs.items())]
    lines.append(f"locally monotone: {'yes' if st.is_monotone else 'no'}")
    if not st.is_monotone:
        lines.append(f"non-monotone arcs: {st.nonmonotone_arcs}")
    lines.append("instabilities U(x):")
    for r in inst:
        lines.append(f"  {r['config']}  {{{', '.join(map(str, r['unstable']))}}}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _graph_text(g) -> str:
    n = g.n
    lines = [f"{g.variant.upper()}: {len(g.attractors)} attractor(s), "
             f"{g.transient_count} transient configuration(s), {g.edges_count} edge(s)"]
    for k, a in enumerate(g.attractors):
        lines.append(f"  [{k}] {a.kind} ({len(a.configs)}): {' '.join(a.bits(n))}")
    return "\n".join(lines)


def cmd_attractors(args) -> int:
    net = _load(args.file)
    g = build_graph(net, args.graph)
    _emit(args, g.to_json(), _graph_text(g))
    return EXIT_OK


def cmd_critical_cycles(args) -> int:
    net = _load(args.file)
    cs = critical_cycles(net)
    lines = [f"{len(cs)} critical cycle(s)"]
    for c in cs:
        arcs = " ".join(f"{j}->{i}" for j, i in c.arcs)
        lines.append(f"  length {c.length}, sign {c.sign:+d}: {arcs}  (witness {to_bits(c.witness, net.n)})")
    _emit(args, [c.to_json() for c in cs], "\n".join(lines))
    return EXIT_OK


def cmd_normal(args) -> int:
    net = _load(args.file)
    oracle = SequentialisationOracle(net, args.mode)
    verdicts = [oracle.verdict(t) for t in synchronous_transitions(net)]
    if not args.all:
        verdicts = [v for v in verdicts if not v.sequentialisable]
    lines = [f"{sum(not v.sequentialisable for v in verdicts)} normal transition(s) ({args.mode} mode)"]
    for v in verdicts:
        extra = ""
        if v.witness is not None:
            extra = "  via " + " , ".join(str(s) for s in v.witness.steps)
        lines.append(f"  {v.transition}  size {v.transition.size}  {v.verdict}"
                     f"{'  (totally)' if v.totally else ''}{extra}")
    _emit(args, [v.to_json() for v in verdicts], "\n".join(lines))
    return EXIT_OK


def cmd_impact(args) -> int:
    net = _load(args.file)
    x = _config(args.source, net.n, "--from")
    y = _config(args.target, net.n, "--to")
    try:
        rep = classify_impact(net, Transition(x, y, net.n))
    except InvalidTransition as e:
        raise InputError(str(e)) from None
    d = rep.to_json()
    lines = [
        f"{rep.transition}: impact {d['label']}",
        f"  x recurrent: {d['x_recurrent']}, y recurrent: {d['y_recurrent']}",
        f"  A_a(x): {d['Aa_x']}",
        f"  A_a(y): {d['Aa_y']}",
    ]
    if d["destroyed"]:
        lines.append(f"  destroyed: {d['destroyed']}")
    for gr in d["grown"]:
        lines.append(f"  grown: {gr['from']} into {gr['into']}")
    if d["detail"]:
        lines.append(f"  note: {d['detail']}")
    _emit(args, d, "\n".join(lines))
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    net = _load(args.file)
    rep = classify_sensitivity(net, args.mode)
    d = rep.to_json()
    kinds = ", ".join(d["sensitivities"]) or "none"
    lines = [
        f"sensitivity: {kinds}{'  (very sensitive)' if d['very_sensitive'] else ''}",
        f"normal transitions: {d['normal_count']}",
        "per label: " + ", ".join(f"{k}={v}" for k, v in d["per_label"].items()),
    ]
    for k, ts in d["witnesses"].items():
        lines.append(f"  {k}: " + ", ".join(f"{t['from']} => {t['to']}" for t in ts))
    for a, b in d["merge_pairs"]:
        lines.append(f"  merge: {a['from']} => {a['to']} with {b['from']} => {b['to']}")
    _emit(args, d, "\n".join(lines))
    return EXIT_OK


def _write_witnesses(led, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "ledger.json").write_text(led.dumps() + "\n")
    for cid, c in sorted(led.claims.items()):
        for k, w in enumerate(c.witnesses):
            net = Network(w["n"], tuple(w["tables"]), name=f"{cid} witness {k}")
            body = format_network(net)
            (out / f"{cid}_{k}.ban").write_text(f"# {w['detail']}\n{body}")


def cmd_verify(args) -> int:
    n = args.size
    check_size(n, "eig")
    spec = EnumerationSpec(n, monotone_only=args.monotone, canonical_only=args.canonical,
                           sample=args.sample, seed=args.seed)
    try:
        spec.validate()
    except ValueError as e:
        raise InputError(str(e)) from None
    workers = worker_count()
    led = run(spec, workers)
    if n == 2 and args.sample is None and not args.monotone:
        verify_size2_claims(workers, ledger=led)
    if n == 3 and args.sample is None and args.monotone:
        verify_size3_claims(workers, args.canonical, ledger=led)
    if args.out:
        _write_witnesses(led, Path(args.out))
    lines = [f"domain: {led.domain}", f"networks: {led.networks} (weight {led.weight}), workers: {workers}"]
    if args.sample is not None:
        lines.append(f"seed: {args.seed}")
    for cid, c in sorted(led.claims.items()):
        lines.append(f"  {led.verdict(cid):<12} {cid}: {c.failures}/{c.checked}")
    if led.refuted:
        lines.append("refuted: " + ", ".join(led.refuted))
    _emit(args, led.to_json(), "\n".join(lines))
    return EXIT_REFUTED if led.refuted else EXIT_OK


def cmd_export_dot(args) -> int:
    net = _load(args.file)
    variant = args.graph
    if args.add_transition:
        parts = args.add_transition.split(",")
        if len(parts) != 2:
            raise InputError("--add-transition expects FROM,TO")
        x = _config(parts[0].strip(), net.n, "--add-transition")
        y = _config(parts[1].strip(), net.n, "--add-transition")
        variant = Transition(x, y, net.n)
        try:
            g = build_graph(net, variant)
        except InvalidTransition as e:
            raise InputError(str(e)) from None
    else:
        g = build_graph(net, variant)
    dot = g.to_dot(net.name or None)
    if args.output:
        Path(args.output).write_text(dot)
    else:
        sys.stdout.write(dot)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--max-n", type=int, default=None,
                        help=f"raise the soft size ceilings (hard ceiling {LIMITS.hard})")

    p = argparse.ArgumentParser(prog="bansync", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("analyze", cmd_analyze, "structure, signs, monotony and instabilities")
    sp.add_argument("file")
    sp = add("attractors", cmd_attractors, "attractors of the SIG or EIG")
    sp.add_argument("file")
    sp.add_argument("--graph", choices=("sig", "eig"), default="sig")
    sp = add("critical-cycles", cmd_critical_cycles, "critical cycles of a monotone network")
    sp.add_argument("file")
    sp = add("normal", cmd_normal, "normal (non-sequentialisable) synchronous transitions")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("strict", "subcube", "below_n"), default="strict")
    sp.add_argument("--all", action="store_true", help="list sequentialisable transitions too")
    sp = add("impact", cmd_impact, "impact of one synchronous transition")
    sp.add_argument("file")
    sp.add_argument("--from", dest="source", required=True, metavar="BITS")
    sp.add_argument("--to", dest="target", required=True, metavar="BITS")
    sp = add("sensitivity", cmd_sensitivity, "sensitivity to synchronism")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("strict", "subcube", "below_n"), default="strict")
    sp = add("verify", cmd_verify, "check the structural claims over enumerated networks")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--monotone", action="store_true", help="locally monotone networks only")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sample", type=int, default=None, metavar="K")
    sp.add_argument("--canonical", action="store_true", help="one network per relabelling orbit")
    sp.add_argument("--out", default=None, metavar="DIR", help="write ledger.json and witness files")
    sp = add("export-dot", cmd_export_dot, "DOT drawing of a transition graph")
    sp.add_argument("file")
    sp.add_argument("--graph", choices=("sig", "eig"), default="sig")
    sp.add_argument("--add-transition", default=None, metavar="FROM,TO")
    sp.add_argument("-o", "--output", default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.max_n is not None:
            raise_limits(args.max_n)
        return args.func(args)
    except (InputError, SizeCeiling, NonMonotoneNetwork) as e:
        print(f"bansync: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
