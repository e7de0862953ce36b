#!/usr/bin/env python3
"""Parameters of the 4-dimensional example code over GF(3) with n = 4.

Prints its minimum distance, weight distribution, dual dimension and
covering radius, the flags of the first two basis matrices and their sum,
and the largest flag rank inside the 6-dimensional block-pattern space that
caps the dimension of any distance-5 code at 4.
"""

from collections import Counter

from flagcode.codes import build_syndrome_table, example_code_t, max_flag_rank, min_distance
from flagcode.flags import flag_from_matrix, flag_rank


def main() -> None:
    T = example_code_t()
    print(f"field {T.spec}, n={T.n}, dim={T.dim}, codewords={T.spec.q ** T.dim}")
    print(f"minimum distance: {min_distance(T)}")
    weights = Counter(flag_rank(cw) for cw in T.codewords())
    print("weight distribution:", ", ".join(f"{w}:{c}" for w, c in sorted(weights.items())))
    table = build_syndrome_table(T)
    print(f"dual dimension: {len(T.dual_basis)}, syndrome lines: {len(table.leaders)}, covering radius: {table.covering_radius}")

    b1, b2 = T.basis[:2]
    for name, delta in (("B1", b1), ("B2", b2), ("B1+B2", b1 + b2)):
        print(f"\n{name} = {delta}  (flag rank {flag_rank(delta)})")
        for i, U in enumerate(flag_from_matrix(delta).spaces, start=1):
            print(f"  V{i} = {U}")

    support = [(1, 1), (1, 2), (2, 2), (3, 3), (3, 4), (4, 4)]
    print(f"\nmax flag rank on block pattern {support}: {max_flag_rank(T.spec, 4, support)}")
    print(f"so any code with distance >= 5 has dimension <= 10 - {len(support)}")


if __name__ == "__main__":
    main()
