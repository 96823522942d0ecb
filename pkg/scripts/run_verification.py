#!/usr/bin/env python3
"""Run the claim ledger over an enumeration or a seeded sample and print a
verdict table.  Exhaustive at n <= 3 (monotone), sampled beyond.

    python3 scripts/run_verification.py --size 3
    python3 scripts/run_verification.py --size 4 --sample 10000 --seed 0 --out ledger4.json
"""
import argparse
import time
from pathlib import Path

from bansync.search import EnumerationSpec, run, verify_size2_claims, verify_size3_claims


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--size", type=int, required=True)
    ap.add_argument("--sample", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--all", action="store_true", help="include non-monotone networks")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, help="write the ledger as JSON")
    args = ap.parse_args()

    spec = EnumerationSpec(args.size, monotone_only=not args.all, sample=args.sample, seed=args.seed)
    t = time.perf_counter()
    led = run(spec, args.workers)
    if args.sample is None and args.size == 2 and args.all:
        verify_size2_claims(ledger=led)
    if args.sample is None and args.size == 3 and not args.all:
        verify_size3_claims(ledger=led)
    dt = time.perf_counter() - t

    print(f"{led.domain}: {led.networks} networks in {dt:.1f} s")
    width = max(map(len, led.claims))
    for cid in sorted(led.claims):
        c = led.claims[cid]
        print(f"  {cid:<{width}}  {led.verdict(cid):<12} {c.failures:>9} / {c.checked}")
    for k in sorted(led.counts):
        print(f"  # {k} = {led.counts[k]}")
    if args.out:
        args.out.write_text(led.dumps())
    return 1 if led.refuted else 0


if __name__ == "__main__":
    raise SystemExit(main())
