import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagcode.errors import CellError, DomainError
from flagcode.flags import (
    DegenerateFlag,
    FullFlag,
    UpperTriangular,
    d_max,
    flag_distance,
    flag_from_matrix,
    flag_rank,
    full_flag_difference,
    full_flag_from_matrix,
    is_degenerate_flag,
    is_full_flag,
    matrix_from_flag,
    phi,
    phi_inverse,
    project,
)
from flagcode.gf import FieldSpec
from flagcode.linalg import (
    MatrixF,
    enumerate_subspaces,
    grassmann_distance,
    inverse,
    rank,
    span,
    subspace_from_rows,
)

from .conftest import field_and_pair, fields, upper_triangular

F2, F3 = FieldSpec(2), FieldSpec(3)


def big_cell_space(A: MatrixF) -> object:
    i = A.rows
    rows = [[int(r == c) for c in range(i)] + list(A.entries[r]) for r in range(i)]
    return subspace_from_rows(MatrixF.from_rows(A.spec, rows))


@pytest.mark.parametrize("ambient", [2, 3, 4, 5])
def test_max_grassmann_distance_is_min_i_and_complement(ambient):
    for i in range(1, ambient):
        spaces = list(enumerate_subspaces(F2, ambient, i))
        best = max(grassmann_distance(U, W) for U, W in itertools.product(spaces, repeat=2))
        assert best == min(i, ambient - i)


@pytest.mark.parametrize("i,cols", [(1, 3), (2, 2), (2, 3), (3, 1)])
def test_big_cell_distance_is_rank_of_difference(i, cols):
    mats = [MatrixF.from_rows(F2, [bits[r * cols:(r + 1) * cols] for r in range(i)], cols)
            for bits in itertools.product(range(2), repeat=i * cols)]
    spaces = [big_cell_space(A) for A in mats]
    for (A, U), (B, W) in itertools.product(zip(mats, spaces), repeat=2):
        assert grassmann_distance(U, W) == rank(A - B)


def test_project():
    v = (1, 2, 3, 4, 5)
    assert project(v, 2, 4) == (1, 2, 0, 0, 5)
    assert project(v, 3, 3) == v
    with pytest.raises(DomainError):
        project(v, 3, 2)


def test_corner_slices():
    delta = UpperTriangular.from_rows(F3, [[1, 2, 0], [0, 1, 2], [0, 0, 2]])
    assert delta.corner(1) == MatrixF.from_rows(F3, [[1, 2, 0]])
    assert delta.corner(2) == MatrixF.from_rows(F3, [[2, 0], [1, 2]])
    assert delta.corner(3) == MatrixF.from_rows(F3, [[0], [2], [2]])
    assert flag_rank(delta) == 1 + 2 + 1


def test_from_rows_rejects_lower_entries():
    with pytest.raises(DomainError):
        UpperTriangular.from_rows(F2, [[1, 0], [1, 1]])


@pytest.mark.parametrize("ambient,value", [(2, 1), (3, 2), (4, 4), (5, 6), (6, 9), (7, 12)])
def test_d_max_values(ambient, value):
    assert d_max(ambient) == value


@pytest.mark.parametrize("n", [1, 2, 3])
def test_flag_rank_never_exceeds_d_max(n):
    assert max(flag_rank(d) for d in UpperTriangular.all(F2, n)) == d_max(n + 1)


def test_roundtrip_and_isometry_exhaustive_u3_f2():
    mats = list(UpperTriangular.all(F2, 3))
    assert len(mats) == 64
    flags = [flag_from_matrix(d) for d in mats]
    assert len(set(flags)) == 64
    for d, F in zip(mats, flags):
        assert is_degenerate_flag(F.spaces)
        assert matrix_from_flag(F) == d
    for (a, F), (b, G) in itertools.product(zip(mats, flags), repeat=2):
        assert flag_distance(F, G) == flag_rank(a - b)


@given(field_and_pair())
def test_roundtrip_and_isometry_random_fields(args):
    spec, n, a, b = args
    F, G = flag_from_matrix(a), flag_from_matrix(b)
    assert matrix_from_flag(F) == a
    assert matrix_from_flag(list(G.spaces)) == b
    assert flag_distance(F, G) == flag_rank(a - b)


@given(field_and_pair())
def test_flag_rank_is_a_norm(args):
    spec, n, a, b = args
    assert (flag_rank(a) == 0) == a.is_zero()
    assert flag_rank(a + b) <= flag_rank(a) + flag_rank(b)
    for c in range(1, spec.q):
        assert flag_rank(a.scale(c)) == flag_rank(a)


def test_degenerate_flag_validation():
    V1 = span(F2, [[0, 1, 0]], 3)
    V2 = span(F2, [[1, 0, 0], [0, 0, 1]], 3)
    # pr_2 kills coordinate 2, so pr_2(V1) = 0 and the chain holds without V1 ⊆ V2
    assert is_degenerate_flag([V1, V2])
    assert not is_full_flag([V1, V2])
    DegenerateFlag([V1, V2])
    with pytest.raises(DomainError):
        FullFlag([V1, V2])
    bad = span(F2, [[1, 0, 1]], 3)
    assert not is_degenerate_flag([bad, span(F2, [[1, 0, 0], [0, 1, 0]], 3)])
    with pytest.raises(DomainError):
        DegenerateFlag([V2, V1])


def test_cell_failure_outside_big_cell():
    V1 = span(F2, [[0, 1, 0]], 3)
    V2 = span(F2, [[1, 0, 0], [0, 1, 0]], 3)
    with pytest.raises(CellError):
        matrix_from_flag([V1, V2])


def test_cell_failure_on_broken_chain():
    # both spaces in their big cells but pr_2(V1) is not inside V2
    V1 = span(F2, [[1, 1, 1]], 3)
    V2 = span(F2, [[1, 0, 0], [0, 1, 0]], 3)
    with pytest.raises(CellError):
        matrix_from_flag([V1, V2])


def test_degenerate_flags_of_u2_f2_are_exactly_big_cell():
    spaces1 = list(enumerate_subspaces(F2, 3, 1))
    spaces2 = list(enumerate_subspaces(F2, 3, 2))
    cell = {flag_from_matrix(d).spaces for d in UpperTriangular.all(F2, 2)}
    for V1, V2 in itertools.product(spaces1, spaces2):
        big = V1.pivots == [0] and V2.pivots == [0, 1]
        if big and is_degenerate_flag([V1, V2]):
            assert (V1, V2) in cell
        elif big:
            with pytest.raises(CellError):
                matrix_from_flag([V1, V2])


@given(fields(), st.integers(1, 4), st.data())
def test_phi_roundtrip(spec, n, data):
    d = data.draw(upper_triangular(spec, n))
    P = phi(d)
    assert phi_inverse(P) == d
    assert P @ inverse(P) == MatrixF.identity(spec, n + 1)


def test_full_flag_identities_exhaustive_u3_f2():
    mats = list(UpperTriangular.all(F2, 3))
    full = [full_flag_from_matrix(d) for d in mats]
    degen = [flag_from_matrix(d) for d in mats]
    for d, F in zip(mats, full):
        assert is_full_flag(F.spaces)
    for (a, Fa, Da), (b, Fb, Db) in itertools.product(zip(mats, full, degen), repeat=2):
        assert flag_distance(Fa, Fb) == flag_rank(full_flag_difference(a, b))
        assert flag_distance(Da, Db) == flag_rank(a - b)


def test_full_flag_difference_differs_from_plain_difference():
    # the two metrics really are different: the full-flag one is not frk(Γ-Δ)
    rnd = random.Random(7)
    found = False
    for _ in range(200):
        a, b = UpperTriangular.random(F3, 3, rnd), UpperTriangular.random(F3, 3, rnd)
        if flag_rank(full_flag_difference(a, b)) != flag_rank(a - b):
            found = True
            break
    assert found
