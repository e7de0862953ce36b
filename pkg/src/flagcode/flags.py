"""Degenerate flags and their parametrisation by upper triangular matrices.

Indices follow the usual 1-based conventions for ``project``, corner slices
and flag positions: ``corner(i)`` is the i x (n+1-i) block of rows 1..i and
columns i..n, and the i-th space of a flag has dimension i.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import CellError, DomainError
from .gf import FieldElement, FieldSpec
from .linalg import (
    MatrixF,
    Subspace,
    _trusted_subspace,
    big_cell_matrix,
    grassmann_distance,
    inverse,
    is_big_cell,
    rank_rows,
    span,
    subspace_sum,
)

# --- upper triangular matrices --------------------------------------------------


def packed_size(n: int) -> int:
    return n * (n + 1) // 2


@lru_cache(maxsize=None)
def _packed_offsets(n: int) -> tuple[int, ...]:
    """Packed index of the diagonal entry of each (0-based) row."""
    return tuple(r * n - r * (r - 1) // 2 for r in range(n))


@lru_cache(maxsize=None)
def corner_indices(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Packed indices of every corner slice; entry ``i-1`` is the slice for i."""
    off = _packed_offsets(n)
    return tuple(
        tuple(tuple(off[k] + (col - k) for col in range(i - 1, n)) for k in range(i))
        for i in range(1, n + 1)
    )


@dataclass(frozen=True)
class UpperTriangular:
    """An n x n upper triangular matrix, stored as its packed upper entries.

    ``entries`` lists the codes of row 1 (columns 1..n), then row 2 (columns
    2..n), and so on.
    """

    spec: FieldSpec
    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("matrix side must be >= 1")
        if len(self.entries) != packed_size(self.n):
            raise DomainError(f"expected {packed_size(self.n)} packed entries, got {len(self.entries)}")
        q = self.spec.q
        if any(not 0 <= x < q for x in self.entries):
            raise DomainError(f"entries must be codes in [0, {q})")

    @classmethod
    def zero(cls, spec: FieldSpec, n: int) -> UpperTriangular:
        return cls(spec, n, (0,) * packed_size(n))

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[int | FieldElement]]) -> UpperTriangular:
        n = len(rows)
        full = MatrixF.from_rows(spec, rows, cols=n)
        if full.cols != n:
            raise DomainError("matrix must be square")
        if any(full.entries[r][c] for r in range(n) for c in range(r)):
            raise DomainError("matrix has nonzero entries below the diagonal")
        return cls(spec, n, tuple(full.entries[r][c] for r in range(n) for c in range(r, n)))

    @classmethod
    def random(cls, spec: FieldSpec, n: int, rng: random.Random) -> UpperTriangular:
        return cls(spec, n, tuple(rng.randrange(spec.q) for _ in range(packed_size(n))))

    @classmethod
    def all(cls, spec: FieldSpec, n: int) -> Iterator[UpperTriangular]:
        """Every matrix of U^n, in lexicographic order of the packed codes."""
        for entries in itertools.product(range(spec.q), repeat=packed_size(n)):
            yield cls(spec, n, entries)

    def to_rows(self) -> list[list[int]]:
        off = _packed_offsets(self.n)
        return [[self.entries[off[r] + c - r] if c >= r else 0 for c in range(self.n)] for r in range(self.n)]

    def as_matrix(self) -> MatrixF:
        return MatrixF.from_rows(self.spec, self.to_rows(), cols=self.n)

    def __getitem__(self, idx: tuple[int, int]) -> FieldElement:
        r, c = idx
        if not (0 <= r < self.n and 0 <= c < self.n):
            raise IndexError(idx)
        return self.spec(self.entries[_packed_offsets(self.n)[r] + c - r] if c >= r else 0)

    def corner(self, i: int) -> MatrixF:
        """The slice ``Δ_[i]``: rows 1..i, columns i..n."""
        if not 1 <= i <= self.n:
            raise DomainError(f"corner index {i} outside 1..{self.n}")
        e = self.entries
        rows = [[e[k] for k in row] for row in corner_indices(self.n)[i - 1]]
        return MatrixF.from_rows(self.spec, rows, cols=self.n + 1 - i)

    def _check(self, other: UpperTriangular) -> None:
        if not isinstance(other, UpperTriangular) or other.spec != self.spec or other.n != self.n:
            raise DomainError("upper triangular matrices of different shape or field")

    def __add__(self, other: UpperTriangular) -> UpperTriangular:
        self._check(other)
        add = self.spec.tables.add
        return UpperTriangular(self.spec, self.n, tuple(add[a][b] for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: UpperTriangular) -> UpperTriangular:
        self._check(other)
        sub = self.spec.tables.sub
        return UpperTriangular(self.spec, self.n, tuple(sub[a][b] for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> UpperTriangular:
        neg = self.spec.tables.neg
        return UpperTriangular(self.spec, self.n, tuple(neg[a] for a in self.entries))

    def scale(self, a: int | FieldElement) -> UpperTriangular:
        a = a.code if isinstance(a, FieldElement) else a
        ma = self.spec.tables.mul[a]
        return UpperTriangular(self.spec, self.n, tuple(ma[x] for x in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __str__(self):
        return ";".join(",".join(map(str, r)) for r in self.to_rows())


def flag_rank(delta: UpperTriangular) -> int:
    """Sum of the ranks of all corner slices."""
    t = delta.spec.tables
    e = delta.entries
    return sum(rank_rows([[e[k] for k in row] for row in block], t) for block in corner_indices(delta.n))


def d_max(n_plus_1: int) -> int:
    """Largest possible sum of Grassmann distances over Gr_1 x ... x Gr_n."""
    if n_plus_1 < 2:
        raise DomainError("ambient dimension must be >= 2")
    k, odd = divmod(n_plus_1, 2)
    return k * (k + 1) if odd else k * k


# --- projections and flags ---------------------------------------------------------


def project(v: Sequence[int], j: int, i: int) -> tuple[int, ...]:
    """``pr_{j,i}``: zero coordinates j+1..i (1-based); the identity when j == i."""
    if not 1 <= j <= i <= len(v):
        raise DomainError(f"projection indices need 1 <= j <= i <= {len(v)}, got j={j}, i={i}")
    return tuple(v[:j]) + (0,) * (i - j) + tuple(v[i:])


def _check_spaces(spaces: Sequence[Subspace]) -> None:
    if not spaces:
        raise DomainError("a flag needs at least one space")
    n = len(spaces)
    spec = spaces[0].spec
    for idx, U in enumerate(spaces, start=1):
        if U.ambient_dim != n + 1 or U.spec != spec:
            raise DomainError(f"space {idx} does not live in GF(q)^{n + 1} over {spec}")


def is_degenerate_flag(spaces: Sequence[Subspace]) -> bool:
    """Dimensions 1..n and ``pr_{i+1}(V_i) ⊆ V_{i+1}`` for every i."""
    try:
        _check_spaces(spaces)
    except DomainError:
        return False
    if [U.dim for U in spaces] != list(range(1, len(spaces) + 1)):
        return False
    return projection_chain_holds(spaces)


def projection_chain_holds(spaces: Sequence[Subspace]) -> bool:
    """``pr_{i+1}(V_i) ⊆ V_{i+1}`` for every i, whatever the dimensions."""
    for i in range(1, len(spaces)):
        nxt = spaces[i]
        for b in spaces[i - 1].basis.entries:
            piece = span(nxt.spec, [project(b, i, i + 1)], nxt.ambient_dim)
            if subspace_sum(nxt, piece).dim != nxt.dim:
                return False
    return True


def is_full_flag(spaces: Sequence[Subspace]) -> bool:
    try:
        _check_spaces(spaces)
    except DomainError:
        return False
    if [U.dim for U in spaces] != list(range(1, len(spaces) + 1)):
        return False
    return all(subspace_sum(spaces[i], spaces[i - 1]).dim == i + 1 for i in range(1, len(spaces)))


@dataclass(frozen=True)
class DegenerateFlag:
    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        object.__setattr__(self, "spaces", tuple(self.spaces))
        if not is_degenerate_flag(self.spaces):
            raise DomainError("spaces do not form a degenerate flag")

    @classmethod
    def _unchecked(cls, spaces: Sequence[Subspace]) -> DegenerateFlag:
        obj = object.__new__(cls)
        object.__setattr__(obj, "spaces", tuple(spaces))
        return obj

    @property
    def n(self) -> int:
        return len(self.spaces)

    @property
    def spec(self) -> FieldSpec:
        return self.spaces[0].spec


@dataclass(frozen=True)
class FullFlag:
    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        object.__setattr__(self, "spaces", tuple(self.spaces))
        if not is_full_flag(self.spaces):
            raise DomainError("spaces do not form a chain U_1 ⊆ ... ⊆ U_n")

    @classmethod
    def _unchecked(cls, spaces: Sequence[Subspace]) -> FullFlag:
        obj = object.__new__(cls)
        object.__setattr__(obj, "spaces", tuple(spaces))
        return obj

    @property
    def n(self) -> int:
        return len(self.spaces)

    @property
    def spec(self) -> FieldSpec:
        return self.spaces[0].spec


def flag_from_matrix(delta: UpperTriangular) -> DegenerateFlag:
    """V_i is the row space of ``(I_i | Δ_[i])``; already in reduced echelon form."""
    n = delta.n
    e = delta.entries
    spaces = []
    for i, block in enumerate(corner_indices(n), start=1):
        rows = [[int(r == c) for c in range(i)] + [e[k] for k in row] for r, row in enumerate(block)]
        spaces.append(_trusted_subspace(delta.spec, n + 1, rows))
    return DegenerateFlag._unchecked(spaces)


def check_big_cell_flag(spaces: Sequence[Subspace]) -> None:
    """Raise :class:`CellError` unless ``spaces`` lies in the big cell of the degenerate flag variety.

    Inside the big cell the containment ``pr_{i+1}(V_i) ⊆ V_{i+1}`` holds
    exactly when the first i rows of A(V_{i+1}) equal A(V_i) without its first
    column, which is what is compared here.
    """
    _check_spaces(spaces)
    blocks = [big_cell_matrix(U, i) for i, U in enumerate(spaces, start=1)]
    for i in range(1, len(blocks)):
        if tuple(r[1:] for r in blocks[i - 1].entries) != blocks[i].entries[:i]:
            raise CellError(f"pr_{i + 1}(V_{i}) is not contained in V_{i + 1}")


def matrix_from_flag(flag: DegenerateFlag | Sequence[Subspace]) -> UpperTriangular:
    """Recover Δ from a big-cell degenerate flag, one space at a time.

    Step 1 reads Δ_[1] off a vector u of V_1 with u_1 != 0.  Step i takes a
    vector w of V_i with w_i != 0, removes the contribution of the rows
    already known (Δ_[i-1] without its first column) and divides by w_i to
    get row i of Δ.  The chosen vectors are the canonical basis rows, whose
    pivot is 1, but the divisions are kept so any such vector would do.
    """
    spaces = flag.spaces if isinstance(flag, DegenerateFlag) else tuple(flag)
    check_big_cell_flag(spaces)
    spec = spaces[0].spec
    t = spec.tables
    n = len(spaces)

    # first corner from a vector of V_1 with nonzero first coordinate
    u = spaces[0].basis.entries[0]
    s = t.inv[u[0]]
    corner = [[t.mul[x][s] for x in u[1:]]]
    rows_of_delta = [corner[0]]
    for i in range(2, n + 1):
        # rows already known, seen from column i on
        A = [r[1:] for r in corner]
        # a vector of V_i with w_i != 0 determines the new row
        w = next(r for r in spaces[i - 1].basis.entries if r[i - 1])
        v = list(w[i:])
        for j in range(i - 1):
            if w[j]:
                mw = t.mul[w[j]]
                v = [t.sub[a][mw[b]] for a, b in zip(v, A[j])]
        s = t.inv[w[i - 1]]
        last = [t.mul[x][s] for x in v]
        corner = A + [last]
        rows_of_delta.append(last)
    # row i of Δ holds columns i..n
    return UpperTriangular(spec, n, tuple(x for row in rows_of_delta for x in row))


def flag_distance(F: DegenerateFlag | FullFlag, G: DegenerateFlag | FullFlag) -> int:
    """Sum of Grassmann distances of corresponding spaces."""
    if len(F.spaces) != len(G.spaces):
        raise DomainError(f"flags of different length {len(F.spaces)} and {len(G.spaces)}")
    return sum(grassmann_distance(U, W) for U, W in zip(F.spaces, G.spaces))


# --- full flags ------------------------------------------------------------------------


def phi(delta: UpperTriangular) -> MatrixF:
    """Unipotent (n+1) x (n+1) matrix with ``Φ(Δ)[i, j+1] = Δ[i, j]``."""
    n = delta.n
    rows = [[int(r == c) for c in range(n + 1)] for r in range(n + 1)]
    for r, row in enumerate(delta.to_rows()):
        for c in range(r, n):
            rows[r][c + 1] = row[c]
    return MatrixF.from_rows(delta.spec, rows)


def phi_inverse(M: MatrixF) -> UpperTriangular:
    """Inverse of :func:`phi` on unipotent upper triangular matrices."""
    size = M.rows
    if M.cols != size or size < 2:
        raise DomainError("need a square matrix of size >= 2")
    e = M.entries
    if any(e[r][c] for r in range(size) for c in range(r)) or any(e[r][r] != 1 for r in range(size)):
        raise DomainError("matrix is not unipotent upper triangular")
    n = size - 1
    return UpperTriangular(M.spec, n, tuple(e[r][c + 1] for r in range(n) for c in range(r, n)))


def full_flag_from_matrix(delta: UpperTriangular) -> FullFlag:
    """U_i is spanned by the first i rows of Φ(Δ)."""
    P = phi(delta)
    return FullFlag._unchecked([span(delta.spec, P.entries[:i], delta.n + 1) for i in range(1, delta.n + 1)])


def full_flag_difference(gamma: UpperTriangular, delta: UpperTriangular) -> UpperTriangular:
    """``Φ^{-1}(Φ(Γ) Φ(Δ)^{-1})``, whose flag rank is the distance of the full flags."""
    return phi_inverse(phi(gamma) @ inverse(phi(delta)))


__all__ = [
    "DegenerateFlag",
    "FullFlag",
    "UpperTriangular",
    "check_big_cell_flag",
    "corner_indices",
    "d_max",
    "flag_distance",
    "flag_from_matrix",
    "flag_rank",
    "full_flag_difference",
    "full_flag_from_matrix",
    "is_big_cell",
    "is_degenerate_flag",
    "is_full_flag",
    "matrix_from_flag",
    "packed_size",
    "phi",
    "phi_inverse",
    "project",
    "projection_chain_holds",
]
