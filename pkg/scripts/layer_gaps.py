#!/usr/bin/env python3
"""How often does the strongly-connected layering put automata that share no
single critical closed trail into one step, and does another derivation of
the same transition still meet that requirement?

Prints a tally and every offending transition with its network.
"""
import argparse

from bansync.core import format_network, indices_of
from bansync.cycles import critical_arc_mask
from bansync.search import EnumerationSpec, enumerate_networks, sample_networks
from bansync.sequential import _layers, admissible_derivation, on_critical_trail, synchronous_transitions


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=4)
    ap.add_argument("--sample", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show", type=int, default=3, help="networks to print")
    args = ap.parse_args()

    if args.size <= 3:
        nets = enumerate_networks(EnumerationSpec(args.size))
    else:
        nets = sample_networks(EnumerationSpec(args.size, sample=args.sample, seed=args.seed))
    transitions = layers = gaps = rescued = shown = 0
    for net in nets:
        for t in synchronous_transitions(net):
            transitions += 1
            x, w = t.source, t.changed_mask
            bad = []
            for m in _layers(net.n, w, critical_arc_mask(net, x, w)):
                if m.bit_count() > 1:
                    layers += 1
                    if not on_critical_trail(net, x, m):
                        bad.append(m)
            if not bad:
                continue
            gaps += 1
            d = admissible_derivation(net, t)
            rescued += d is not None
            if shown < args.show:
                shown += 1
                steps = [indices_of(s.changed_mask) for s in d.steps] if d else None
                print(f"{t}: layer {indices_of(bad[0])} on no critical closed trail; other derivation {steps}")
                print(format_network(net))
    print(f"{transitions} synchronous transitions, {layers} layers of >= 2 automata, "
          f"{gaps} transitions with an off-trail layer, {rescued} of them admit another derivation")


if __name__ == "__main__":
    main()
