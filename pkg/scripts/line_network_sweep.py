#!/usr/bin/env python3
"""Outcome rates of the protocol on a relay line as link erasure grows.

Writes one TSV row per erasure probability: successes, cell failures and
miscorrections out of ``--trials`` seeded trials.

    python3 scripts/line_network_sweep.py --relays 3 --trials 200 --seed 1
"""

import argparse
from fractions import Fraction

from flagcode.codes import build_max_distance_code, build_syndrome_table, example_code_t
from flagcode.gf import FieldSpec
from flagcode.netsim import line_topology, run_campaign

CODES = {
    "example-T": example_code_t,
    "max-distance-q2-n4": lambda: build_max_distance_code(FieldSpec(2), 4),
    "max-distance-q3-n4": lambda: build_max_distance_code(FieldSpec(3), 4),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", choices=sorted(CODES), default="example-T")
    ap.add_argument("--relays", type=int, default=3)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--erasures", default="0,1/50,1/20,1/10,1/5,1/3")
    ap.add_argument("--corruption", default="0")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    code = CODES[args.code]()
    table = build_syndrome_table(code)
    corruption = Fraction(args.corruption)
    print("erasure\tcorruption\ttrials\tsuccess\tcell_failure\tmiscorrection\tsuccess_rate")
    for text in args.erasures.split(","):
        p = Fraction(text)
        top = line_topology(args.relays, erasure=p, corruption=corruption)
        r = run_campaign(top, code, args.trials, args.seed, table=table, workers=args.workers)
        print(f"{p}\t{corruption}\t{r.trials}\t{r.successes}\t{r.cell_failures}\t{r.miscorrections}\t{r.successes / r.trials:.3f}")


if __name__ == "__main__":
    main()
