#!/usr/bin/env python3
"""Golden runs on the worked examples in data/: attractors, normal transitions,
impacts and sensitivity, printed as JSON (one object per network)."""
import argparse
import json
from pathlib import Path

from bansync.core import Network
from bansync.dynamics import build_graph
from bansync.impact import classify_impact, classify_sensitivity
from bansync.sequential import normal_transitions

DATA = Path(__file__).resolve().parent.parent / "data"


def summarize(net: Network) -> dict:
    sig = build_graph(net, "sig")
    normals = normal_transitions(net)
    return {
        "network": net.name,
        "n": net.n,
        "attractors": [a.bits(net.n) for a in sig.attractors],
        "kinds": [a.kind for a in sig.attractors],
        "normal": [v.to_json() for v in normals],
        "impacts": [classify_impact(net, v.transition, sig).to_json() for v in normals],
        "sensitivity": classify_sensitivity(net, sig=sig).to_json(),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("files", nargs="*", type=Path, help="network files (default: every data/*.ban)")
    args = ap.parse_args()
    for path in args.files or sorted(DATA.glob("*.ban")):
        net = Network.from_text(path.read_text(), name=path.stem)
        print(json.dumps(summarize(net), indent=2))


if __name__ == "__main__":
    main()
