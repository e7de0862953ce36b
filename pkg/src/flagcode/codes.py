"""Flag rank metric codes: linear subspaces of U^n(K) under the flag rank distance.

Everything here that enumerates field elements is exhaustive and guarded by
:data:`ENUMERATION_BUDGET`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import BudgetError, DomainError
from .flags import UpperTriangular, corner_indices, flag_rank, packed_size
from .gf import FieldElement, FieldSpec, find_irreducible, multiplication_matrix
from .linalg import MatrixF, nullspace, rank_rows

ENUMERATION_BUDGET = 2**24


def check_budget(count: int, what: str = "elements", budget: int | None = None) -> None:
    budget = ENUMERATION_BUDGET if budget is None else budget
    if count > budget:
        raise BudgetError(count, budget, what)


def projective_points(q: int, k: int) -> Iterator[tuple[int, ...]]:
    """Nonzero vectors of GF(q)^k whose first nonzero coordinate is 1."""
    for lead in range(k):
        for rest in itertools.product(range(q), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + rest


def normalize(v: Sequence[int], spec: FieldSpec) -> tuple[int, tuple[int, ...]]:
    """Split a nonzero vector as ``a * f`` with f projectively normalised."""
    t = spec.tables
    a = next(x for x in v if x)
    ms = t.mul[t.inv[a]]
    return a, tuple(ms[x] for x in v)


def _combine(spec: FieldSpec, coeffs: Sequence[int], vectors: Sequence[Sequence[int]], length: int) -> tuple[int, ...]:
    add, mul = spec.tables.add, spec.tables.mul
    acc = [0] * length
    for c, vec in zip(coeffs, vectors):
        if c:
            mc = mul[c]
            acc = [add[a][mc[b]] for a, b in zip(acc, vec)]
    return tuple(acc)


@dataclass(frozen=True)
class FlagRankCode:
    """A K-subspace of U^n(K) given by a basis."""

    spec: FieldSpec
    n: int
    basis: tuple[UpperTriangular, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        for B in self.basis:
            if B.spec != self.spec or B.n != self.n:
                raise DomainError("basis matrices must share the code's field and size")
        if rank_rows([B.entries for B in self.basis], self.spec.tables) != len(self.basis):
            raise DomainError("basis matrices are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def length(self) -> int:
        """Dimension of the ambient space U^n(K)."""
        return packed_size(self.n)

    def generator_matrix(self) -> MatrixF:
        return MatrixF(self.spec, self.dim, self.length, tuple(B.entries for B in self.basis))

    def codeword(self, coeffs: Sequence[int | FieldElement]) -> UpperTriangular:
        if len(coeffs) != self.dim:
            raise DomainError(f"need {self.dim} coefficients, got {len(coeffs)}")
        codes = [c.code if isinstance(c, FieldElement) else int(c) % self.spec.q for c in coeffs]
        entries = _combine(self.spec, codes, [B.entries for B in self.basis], self.length)
        return UpperTriangular(self.spec, self.n, entries)

    def codeword_from_index(self, index: int) -> UpperTriangular:
        """Message ``index`` in ``[0, q^dim)``, base-q digits low first, as a codeword."""
        q = self.spec.q
        if not 0 <= index < q**self.dim:
            raise DomainError(f"message index must lie in [0, {q ** self.dim})")
        digits = []
        for _ in range(self.dim):
            index, d = divmod(index, q)
            digits.append(d)
        return self.codeword(digits)

    def codewords(self) -> Iterator[UpperTriangular]:
        check_budget(self.spec.q**self.dim, "codewords")
        for coeffs in itertools.product(range(self.spec.q), repeat=self.dim):
            yield self.codeword(coeffs)

    @cached_property
    def dual_basis(self) -> tuple[UpperTriangular, ...]:
        kernel = nullspace(self.generator_matrix())
        return tuple(UpperTriangular(self.spec, self.n, row) for row in kernel.entries)

    def contains(self, A: UpperTriangular) -> bool:
        return not any(syndrome(A, self.dual_basis))

    @cached_property
    def _min_distance(self) -> int:
        if self.dim == 0:
            raise DomainError("the zero code has no minimum distance")
        check_budget(self.spec.q**self.dim, "codewords")
        # frk(aΔ) = frk(Δ), so one representative per line suffices
        vectors = [B.entries for B in self.basis]
        best = None
        for coeffs in projective_points(self.spec.q, self.dim):
            w = flag_rank(UpperTriangular(self.spec, self.n, _combine(self.spec, coeffs, vectors, self.length)))
            if best is None or w < best:
                best = w
        return best


def min_distance(C: FlagRankCode) -> int:
    """Minimum flag rank over the nonzero codewords (cached on the code)."""
    return C._min_distance


def trace_pairing(A: UpperTriangular, B: UpperTriangular) -> FieldElement:
    """``trace(A B^T)``, i.e. the entrywise dot product of the packed entries."""
    if A.spec != B.spec or A.n != B.n:
        raise DomainError("pairing needs matrices of equal size over the same field")
    return A.spec(_dot(A.spec, A.entries, B.entries))


def _dot(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> int:
    add, mul = spec.tables.add, spec.tables.mul
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = add[acc][mul[x][y]]
    return acc


def dual_code(C: FlagRankCode) -> FlagRankCode:
    return FlagRankCode(C.spec, C.n, C.dual_basis)


def syndrome(A: UpperTriangular, dual_basis: Sequence[UpperTriangular]) -> tuple[int, ...]:
    """Pairings of A with each dual basis matrix, as element codes."""
    for D in dual_basis:
        if D.spec != A.spec or D.n != A.n:
            raise DomainError("dual basis and word differ in size or field")
    return tuple(_dot(A.spec, D.entries, A.entries) for D in dual_basis)


@dataclass(frozen=True)
class SyndromeTable:
    """Minimal coset leaders, one per projective syndrome class.

    ``leaders`` maps a normalised syndrome f (first nonzero coordinate 1) to
    ``(A_f, d_f)``.
    """

    code: FlagRankCode
    dual_basis: tuple[UpperTriangular, ...]
    leaders: dict[tuple[int, ...], tuple[UpperTriangular, int]] = field(default_factory=dict)

    @property
    def covering_radius(self) -> int:
        return max((w for _, w in self.leaders.values()), default=0)


def build_syndrome_table(C: FlagRankCode, budget: int | None = None) -> SyndromeTable:
    """Find a minimal coset leader for every line of syndromes by scanning U^n(K).

    Matrices are visited in lexicographic order of their packed codes and a
    leader is only replaced by a strictly lighter one, so ties go to the
    lexicographically smallest matrix.
    """
    spec, n = C.spec, C.n
    dual = C.dual_basis
    if not dual:
        return SyndromeTable(C, dual, {})
    N = C.length
    check_budget(spec.q**N, "matrices of U^n", budget)
    t = spec.tables
    add, mul = t.add, t.mul
    ell = len(dual)
    # the syndrome is linear, so precompute it on each half of the positions
    # and combine; splitting after the first `half` positions keeps the
    # product order lexicographic
    half = N // 2

    def partial_syndromes(positions):
        out = {}
        for values in itertools.product(range(spec.q), repeat=len(positions)):
            s = [0] * ell
            for k, a in zip(positions, values):
                if a:
                    s = [add[x][mul[a][D.entries[k]]] for x, D in zip(s, dual)]
            out[values] = s
        return out

    high = partial_syndromes(range(half))
    low = partial_syndromes(range(half, N))
    low_items = list(low.items())
    corner_pos = [tuple(k for row in block for k in row) for block in corner_indices(n)]
    corner_shape = [len(block[0]) for block in corner_indices(n)]
    rank_memo: list[dict[tuple[int, ...], int]] = [{} for _ in corner_pos]

    def weight(entries):
        w = 0
        for pos, width, memo in zip(corner_pos, corner_shape, rank_memo):
            key = tuple(entries[k] for k in pos)
            r = memo.get(key)
            if r is None:
                r = memo[key] = rank_rows([key[j:j + width] for j in range(0, len(key), width)], t)
            w += r
        return w

    best: dict[tuple[int, ...], tuple[int, tuple[int, ...]]] = {}
    for hv, hs in high.items():
        for lv, ls in low_items:
            s = [add[x][y] for x, y in zip(hs, ls)]
            lead = next((x for x in s if x), 0)
            if lead != 1:
                continue
            key = tuple(s)
            entries = hv + lv
            prev = best.get(key)
            w = weight(entries)
            if prev is None or w < prev[0]:
                best[key] = (w, entries)
    leaders = {key: (UpperTriangular(spec, n, e), w) for key, (w, e) in best.items()}
    return SyndromeTable(C, dual, leaders)


def decode(table: SyndromeTable, A: UpperTriangular) -> UpperTriangular:
    """Nearest codeword by syndrome lookup: ``A - a*A_f`` where ``syn(A) = a*f``."""
    g = syndrome(A, table.dual_basis)
    if not any(g):
        return A
    a, f = normalize(g, A.spec)
    leader, _ = table.leaders[f]
    return A - leader.scale(a)


def exhaustive_nearest(C: FlagRankCode, A: UpperTriangular) -> tuple[UpperTriangular, int]:
    """Brute-force nearest codeword; ties go to the lexicographically smallest codeword."""
    best = None
    for cw in C.codewords():
        key = (flag_rank(A - cw), cw.entries)
        if best is None or key < best[0]:
            best = (key, cw)
    return best[1], best[0][0]


def build_max_distance_code(spec: FieldSpec, n: int) -> FlagRankCode:
    """Codes of dimension k reaching the largest possible minimum distance.

    With ``n+1 = 2k`` or ``2k+1``, ``Δ_f`` carries the multiplication matrix
    of f in a degree-k extension of K as the k x k block in rows 1..k and
    columns n+1-k..n; the codewords are ``Δ_f`` for all f.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    k = (n + 1) // 2
    modulus = find_irreducible(spec, k) if k > 1 else (0, 1)
    first_col = n - k  # 0-based
    off = [r * n - r * (r - 1) // 2 for r in range(n)]
    basis = []
    for power in range(k):
        f = [0] * power + [1]
        block = multiplication_matrix(f, modulus, spec)
        entries = [0] * packed_size(n)
        for r in range(k):
            for c in range(k):
                entries[off[r] + first_col + c - r] = block[r][c]
        basis.append(UpperTriangular(spec, n, tuple(entries)))
    return FlagRankCode(spec, n, tuple(basis))


EXAMPLE_T_ROWS = (
    ((1, 0, 1, 1), (0, 1, 0, 0), (0, 0, 1, 1), (0, 0, 0, 0)),
    ((0, 2, 1, 0), (0, 2, 2, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    ((0, 0, 1, 0), (0, 0, 0, 1), (0, 0, 0, 0), (0, 0, 0, 0)),
    ((0, 0, 0, 1), (0, 0, 2, 0), (0, 0, 0, 0), (0, 0, 0, 0)),
)


def example_code_t() -> FlagRankCode:
    """The 4-dimensional code over GF(3), n = 4, with minimum distance 5."""
    spec = FieldSpec(3)
    return FlagRankCode(spec, 4, tuple(UpperTriangular.from_rows(spec, rows) for rows in EXAMPLE_T_ROWS))


def random_code(spec: FieldSpec, n: int, dim: int, rng: random.Random) -> FlagRankCode:
    N = packed_size(n)
    if not 0 <= dim <= N:
        raise DomainError(f"dimension must lie in [0, {N}]")
    basis: list[UpperTriangular] = []
    while len(basis) < dim:
        cand = UpperTriangular.random(spec, n, rng)
        if rank_rows([B.entries for B in basis] + [cand.entries], spec.tables) == len(basis) + 1:
            basis.append(cand)
    return FlagRankCode(spec, n, tuple(basis))


def max_flag_rank(spec: FieldSpec, n: int, support: Iterable[tuple[int, int]] | None = None) -> int:
    """Largest flag rank over all matrices supported on ``support``.

    ``support`` lists 1-based (row, column) positions with row <= column;
    ``None`` means all of U^n(K).
    """
    off = [r * n - r * (r - 1) // 2 for r in range(n)]
    if support is None:
        positions = list(range(packed_size(n)))
    else:
        positions = []
        for r, c in support:
            if not 1 <= r <= c <= n:
                raise DomainError(f"({r}, {c}) is not an upper triangular position of a {n}x{n} matrix")
            positions.append(off[r - 1] + c - r)
    check_budget(spec.q ** len(positions), "matrices")
    best = 0
    entries = [0] * packed_size(n)
    for values in itertools.product(range(spec.q), repeat=len(positions)):
        for p, v in zip(positions, values):
            entries[p] = v
        best = max(best, flag_rank(UpperTriangular(spec, n, tuple(entries))))
    return best


@lru_cache(maxsize=32)
def matrices_up_to_weight(spec: FieldSpec, n: int, weight: int) -> tuple[UpperTriangular, ...]:
    """All matrices of flag rank at most ``weight``, in lexicographic order."""
    check_budget(spec.q ** packed_size(n), "matrices of U^n")
    return tuple(A for A in UpperTriangular.all(spec, n) if flag_rank(A) <= weight)
