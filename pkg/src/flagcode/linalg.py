"""Exact matrices and subspaces over a finite field.

Matrices store element codes (see :mod:`flagcode.gf`); indexing a
:class:`MatrixF` returns a :class:`~flagcode.gf.FieldElement`.  Subspaces are
kept in canonical form, the reduced row echelon basis without zero rows, so
equality and hashing are structural.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CellError, DomainError
from .gf import FieldElement, FieldSpec, Tables

Rows = list[list[int]]


# --- elimination kernels on plain code lists ---------------------------------


def rref_rows(rows: Iterable[Sequence[int]], ncols: int, t: Tables) -> tuple[Rows, list[int]]:
    """Reduced row echelon form; zero rows are moved to the bottom.

    Returns the reduced rows and the pivot column of each nonzero row.
    """
    rows = [list(r) for r in rows]
    add, mul, inv, neg = t.add, t.mul, t.inv, t.neg
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        if prow[c] != 1:
            ms = mul[inv[prow[c]]]
            prow = rows[r] = [ms[x] for x in prow]
        for k in range(nrows):
            if k != r and rows[k][c]:
                mf = mul[neg[rows[k][c]]]
                rows[k] = [add[x][mf[y]] for x, y in zip(rows[k], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank_rows(rows: Iterable[Sequence[int]], t: Tables) -> int:
    """Rank by forward elimination only."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    add, mul, inv, neg = t.add, t.mul, t.inv, t.neg
    ncols = len(rows[0])
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = next((k for k in range(r, nrows) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pinv = inv[prow[c]]
        for k in range(r + 1, nrows):
            x = rows[k][c]
            if x:
                mf = mul[neg[mul[x][pinv]]]
                rows[k] = [add[a][mf[b]] for a, b in zip(rows[k], prow)]
        r += 1
        if r == nrows:
            break
    return r


# --- matrices -----------------------------------------------------------------


@dataclass(frozen=True)
class MatrixF:
    spec: FieldSpec
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DomainError(f"entry grid does not match shape {self.rows}x{self.cols}")
        q = self.spec.q
        if any(not 0 <= x < q for r in self.entries for x in r):
            raise DomainError(f"entries must be codes in [0, {q})")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Iterable[Sequence[int | FieldElement]], cols: int | None = None) -> MatrixF:
        grid = tuple(tuple(_code(spec, x) for x in r) for r in rows)
        if cols is None:
            if not grid:
                raise DomainError("column count needed for a matrix without rows")
            cols = len(grid[0])
        return cls(spec, len(grid), cols, grid)

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> MatrixF:
        return cls(spec, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, spec: FieldSpec, size: int) -> MatrixF:
        return cls(spec, size, size, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx: tuple[int, int]) -> FieldElement:
        i, j = idx
        return self.spec(self.entries[i][j])

    def tolist(self) -> Rows:
        return [list(r) for r in self.entries]

    def _check(self, other: MatrixF) -> None:
        if not isinstance(other, MatrixF) or other.spec != self.spec:
            raise DomainError("matrices over different fields")

    def __add__(self, other: MatrixF) -> MatrixF:
        self._check(other)
        if other.shape != self.shape:
            raise DomainError(f"shape mismatch {self.shape} vs {other.shape}")
        add = self.spec.tables.add
        grid = tuple(tuple(add[a][b] for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        return MatrixF(self.spec, self.rows, self.cols, grid)

    def __sub__(self, other: MatrixF) -> MatrixF:
        self._check(other)
        if other.shape != self.shape:
            raise DomainError(f"shape mismatch {self.shape} vs {other.shape}")
        sub = self.spec.tables.sub
        grid = tuple(tuple(sub[a][b] for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        return MatrixF(self.spec, self.rows, self.cols, grid)

    def __matmul__(self, other: MatrixF) -> MatrixF:
        self._check(other)
        if self.cols != other.rows:
            raise DomainError(f"cannot multiply {self.shape} by {other.shape}")
        add, mul = self.spec.tables.add, self.spec.tables.mul
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        grid = []
        for r in self.entries:
            out = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    acc = add[acc][mul[a][b]]
                out.append(acc)
            grid.append(tuple(out))
        return MatrixF(self.spec, self.rows, other.cols, tuple(grid))

    def scale(self, a: int | FieldElement) -> MatrixF:
        ma = self.spec.tables.mul[_code(self.spec, a)]
        return MatrixF(self.spec, self.rows, self.cols, tuple(tuple(ma[x] for x in r) for r in self.entries))

    def transpose(self) -> MatrixF:
        return MatrixF(self.spec, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ((),) * self.cols)

    def __str__(self):
        return ";".join(",".join(map(str, r)) for r in self.entries)


def _code(spec: FieldSpec, x: int | FieldElement) -> int:
    if isinstance(x, FieldElement):
        if x.spec != spec:
            raise DomainError("element belongs to a different field")
        return x.code
    x = int(x)
    if not 0 <= x < spec.q:
        raise DomainError(f"code {x} out of range for {spec}")
    return x


def rref(M: MatrixF) -> tuple[MatrixF, int]:
    rows, pivots = rref_rows(M.entries, M.cols, M.spec.tables)
    return MatrixF(M.spec, M.rows, M.cols, tuple(map(tuple, rows))), len(pivots)


def rank(M: MatrixF) -> int:
    return rank_rows(M.entries, M.spec.tables)


def nullspace(M: MatrixF) -> MatrixF:
    """Basis (as rows) of ``{x : M x^T = 0}``, in reduced echelon form."""
    t = M.spec.tables
    rows, pivots = rref_rows(M.entries, M.cols, t)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [0] * M.cols
        x[f] = 1
        for r, pc in enumerate(pivots):
            x[pc] = t.neg[rows[r][f]]
        basis.append(x)
    kernel, _ = rref_rows(basis, M.cols, t)
    return MatrixF(M.spec, len(kernel), M.cols, tuple(map(tuple, kernel)))


def inverse(M: MatrixF) -> MatrixF:
    n = M.rows
    if M.cols != n:
        raise DomainError("only square matrices are invertible")
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.entries)]
    rows, pivots = rref_rows(aug, 2 * n, M.spec.tables)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise DomainError("matrix is singular")
    return MatrixF(M.spec, n, n, tuple(tuple(r[n:]) for r in rows))


# --- subspaces ----------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """Row space held as its RREF basis (no zero rows)."""

    ambient_dim: int
    basis: MatrixF

    @property
    def spec(self) -> FieldSpec:
        return self.basis.spec

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> list[int]:
        return [next(c for c, x in enumerate(r) if x) for r in self.basis.entries]

    def contains(self, v: Sequence[int]) -> bool:
        return subspace_sum(self, span(self.spec, [v], self.ambient_dim)).dim == self.dim

    def __str__(self):
        return "<" + "; ".join(",".join(map(str, r)) for r in self.basis.entries) + ">"


def _trusted_subspace(spec: FieldSpec, ambient_dim: int, rref_basis: Sequence[Sequence[int]]) -> Subspace:
    grid = tuple(tuple(r) for r in rref_basis)
    return Subspace(ambient_dim, MatrixF(spec, len(grid), ambient_dim, grid))


def subspace_from_rows(M: MatrixF) -> Subspace:
    rows, pivots = rref_rows(M.entries, M.cols, M.spec.tables)
    return _trusted_subspace(M.spec, M.cols, rows[: len(pivots)])


def span(spec: FieldSpec, vectors: Iterable[Sequence[int]], ambient_dim: int) -> Subspace:
    """Subspace spanned by code vectors of length ``ambient_dim``."""
    vectors = [tuple(v) for v in vectors]
    if any(len(v) != ambient_dim for v in vectors):
        raise DomainError(f"vectors must have length {ambient_dim}")
    rows, pivots = rref_rows(vectors, ambient_dim, spec.tables)
    return _trusted_subspace(spec, ambient_dim, rows[: len(pivots)])


def zero_subspace(spec: FieldSpec, ambient_dim: int) -> Subspace:
    return _trusted_subspace(spec, ambient_dim, [])


def _same_ambient(U: Subspace, W: Subspace) -> None:
    if U.ambient_dim != W.ambient_dim or U.spec != W.spec:
        raise DomainError("subspaces live in different ambient spaces")


def subspace_sum(U: Subspace, W: Subspace) -> Subspace:
    _same_ambient(U, W)
    return span(U.spec, U.basis.entries + W.basis.entries, U.ambient_dim)


def grassmann_distance(U: Subspace, W: Subspace) -> int:
    """Half of ``dim(U+W) - dim(U∩W)``; defined here for equal dimensions only.

    The intersection dimension comes from ``dim U + dim W - dim(U+W)``.
    """
    _same_ambient(U, W)
    if U.dim != W.dim:
        raise DomainError(f"grassmann_distance needs equal dimensions, got {U.dim} and {W.dim}")
    total = rank_rows(U.basis.entries + W.basis.entries, U.spec.tables)
    meet = U.dim + W.dim - total
    return (total - meet) // 2


def is_big_cell(U: Subspace) -> bool:
    return U.pivots == list(range(U.dim))


def big_cell_matrix(U: Subspace, i: int) -> MatrixF:
    """The matrix ``A`` with ``U = rowspace(I_i | A)``."""
    if U.dim != i or not is_big_cell(U):
        raise CellError(f"subspace of dimension {U.dim} with pivots {U.pivots} is not in the big cell of Gr_{i}")
    return MatrixF(U.spec, i, U.ambient_dim - i, tuple(r[i:] for r in U.basis.entries))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(spec: FieldSpec, ambient_dim: int, dim: int) -> Iterator[Subspace]:
    """Every ``dim``-dimensional subspace exactly once, via its RREF pattern."""
    q = spec.q
    for pivots in itertools.combinations(range(ambient_dim), dim):
        pivot_set = set(pivots)
        # free slots: right of the row's pivot, outside pivot columns
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, ambient_dim) if c not in pivot_set]
        for values in itertools.product(range(q), repeat=len(slots)):
            rows = [[0] * ambient_dim for _ in range(dim)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(slots, values):
                rows[r][c] = v
            yield _trusted_subspace(spec, ambient_dim, rows)
