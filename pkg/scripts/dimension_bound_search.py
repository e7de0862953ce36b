#!/usr/bin/env python3
"""Best minimum distance of every dimension, by exhaustive search over subspaces.

For each dimension k of U^n(GF(q)) every k-dimensional subspace is visited
once (through its reduced echelon pattern) and the largest minimum flag rank
distance is reported, next to the number of subspaces reaching it.  Only
small cases are feasible: the subspace count grows like q^(k(N-k)).

    python3 scripts/dimension_bound_search.py --q 2 --n 3
"""

import argparse
import time

from flagcode.codes import FlagRankCode, min_distance
from flagcode.flags import UpperTriangular, d_max, packed_size
from flagcode.gf import FieldSpec
from flagcode.linalg import enumerate_subspaces, gaussian_binomial

LIMIT = 2_000_000


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--n", type=int, default=3)
    args = ap.parse_args()
    spec = FieldSpec.from_order(args.q)
    n, N = args.n, packed_size(args.n)
    print(f"# U^{n}({spec}): ambient dimension {N}, d_max(n+1) = {d_max(n + 1)}")
    print("dim\tsubspaces\tbest_distance\treaching_best\tseconds")
    for k in range(1, N + 1):
        total = gaussian_binomial(N, k, spec.q)
        if total > LIMIT:
            print(f"{k}\t{total}\tskipped\t-\t-")
            continue
        start = time.perf_counter()
        best, hits = 0, 0
        for U in enumerate_subspaces(spec, N, k):
            C = FlagRankCode(spec, n, tuple(UpperTriangular(spec, n, row) for row in U.basis.entries))
            d = min_distance(C)
            if d > best:
                best, hits = d, 1
            elif d == best:
                hits += 1
        print(f"{k}\t{total}\t{best}\t{hits}\t{time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    main()
