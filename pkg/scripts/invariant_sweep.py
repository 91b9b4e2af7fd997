"""Run the exact invariant checks over a randomized corpus and print a tally.

    python scripts/invariant_sweep.py --count 1000 --seed 7
"""

import argparse
import collections
import time

from coverlab.certifier import certify
from coverlab.exact import is_covering
from coverlab.invariants import check_certificates, check_trace, corpus


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--nonparallel", action="store_true")
    args = parser.parse_args()

    tally = collections.Counter()
    violations = []
    t0 = time.perf_counter()
    for i, (inst, delta) in enumerate(corpus(args.count, args.seed, nonparallel=args.nonparallel)):
        bad = check_trace(inst, delta) + check_certificates(inst, delta)
        violations += [f"#{i}: {b}" for b in bad]
        tally["covered" if is_covering(inst).covered else "not covered"] += 1
        for mode in ("exact", "pairwise"):
            tally[f"{mode} {certify(inst, delta, mode).verdict}"] += 1
    elapsed = time.perf_counter() - t0

    for key in sorted(tally):
        print(f"{key:28s} {tally[key]}")
    print(f"violations                   {len(violations)}")
    for line in violations[:20]:
        print("  ", line)
    print(f"elapsed {elapsed:.1f}s")


if __name__ == "__main__":
    main()
