#!/usr/bin/env python3
"""Coordinate multiply-adds per relay with and without skipping projected-out entries.

Measures a single relay on a lossless line for each n and prints the per-step
counts next to the closed forms i(n+1) - i(i+1)/2 and i(n+1), plus the total
saving.
"""

import argparse
import random

from flagcode.flags import UpperTriangular
from flagcode.gf import FieldSpec
from flagcode.netsim import baseline_op_counts, expected_op_counts, node_combine, source_emit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--q", type=int, default=3)
    args = ap.parse_args()
    spec = FieldSpec.from_order(args.q)
    rng = random.Random(0)
    print("n\tprojected_per_step\tbaseline_per_step\tmatches_closed_form\tprojected_total\tbaseline_total\tsaving")
    for n in range(1, args.max_n + 1):
        delta = UpperTriangular.random(spec, n, rng)
        _, ops = node_combine(source_emit(delta), spec, n, rng)
        ok = ops.projected == expected_op_counts(n) and ops.baseline == baseline_op_counts(n)
        p, b = sum(ops.projected), sum(ops.baseline)
        print(f"{n}\t{ops.projected}\t{ops.baseline}\t{ok}\t{p}\t{b}\t{1 - p / b:.3f}")


if __name__ == "__main__":
    main()
