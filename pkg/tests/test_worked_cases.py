"""Hand-checkable input/output cases for each public operation."""

import random

import pytest

from flagcode.codes import (
    FlagRankCode,
    build_max_distance_code,
    build_syndrome_table,
    decode,
    dual_code,
    example_code_t,
    exhaustive_nearest,
    min_distance,
    syndrome,
    trace_pairing,
)
from flagcode.errors import CellError, DomainError
from flagcode.flags import (
    UpperTriangular,
    d_max,
    flag_distance,
    flag_from_matrix,
    flag_rank,
    full_flag_from_matrix,
    is_degenerate_flag,
    matrix_from_flag,
    project,
)
from flagcode.gf import FieldSpec, regular_representation
from flagcode.linalg import (
    MatrixF,
    big_cell_matrix,
    grassmann_distance,
    is_big_cell,
    rank,
    rref,
    span,
    subspace_from_rows,
    subspace_sum,
    zero_subspace,
)
from flagcode.netsim import Packet, line_topology, node_combine, receiver_reconstruct, run_campaign, run_trial, source_emit

F2, F3, F4 = FieldSpec(2), FieldSpec(3), FieldSpec(2, 2)
X = F4((0, 1))


def sp(spec, *rows):
    return span(spec, rows, len(rows[0]))


# the two first basis matrices of the example code T and their sum, with their flags
T_FLAGS = [
    (
        [[1, 0, 1, 1], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 0]],
        [
            [(1, 1, 0, 1, 1)],
            [(1, 0, 0, 1, 1), (0, 1, 1, 0, 0)],
            [(1, 0, 0, 1, 1), (0, 1, 0, 0, 0), (0, 0, 1, 1, 1)],
            [(1, 0, 0, 0, 1), (0, 1, 0, 0, 0), (0, 0, 1, 0, 1), (0, 0, 0, 1, 0)],
        ],
    ),
    (
        [[0, 2, 1, 0], [0, 2, 2, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [
            [(1, 0, 2, 1, 0)],
            [(1, 0, 2, 1, 0), (0, 1, 2, 2, 0)],
            [(1, 0, 0, 1, 0), (0, 1, 0, 2, 0), (0, 0, 1, 1, 0)],
            [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 1)],
        ],
    ),
    (
        [[1, 2, 2, 1], [0, 0, 2, 0], [0, 0, 2, 1], [0, 0, 0, 1]],
        [
            [(1, 1, 2, 2, 1)],
            [(1, 0, 2, 2, 1), (0, 1, 0, 2, 0)],
            [(1, 0, 0, 2, 1), (0, 1, 0, 2, 0), (0, 0, 1, 2, 1)],
            [(1, 0, 0, 0, 1), (0, 1, 0, 0, 0), (0, 0, 1, 0, 1), (0, 0, 0, 1, 1)],
        ],
    ),
]


# --- field arithmetic -------------------------------------------------------------------


def test_field_cases():
    assert F3(2) + F3(2) == F3(1)
    assert X + X == F4.zero
    assert X * X == X + F4.one
    assert F3(2) * F3(2) == F3(1)
    assert F3(2).inverse() == F3(2)
    assert X.inverse() == X + F4.one
    assert F4.one.inverse() == F4.one
    for a in F4.elements():
        assert a + F4.zero == a and a * F4.one == a
    with pytest.raises(DomainError):
        F3(1) + F2(1)
    with pytest.raises(DomainError):
        F3(1) * F2(1)


def test_regular_representation_cases():
    assert regular_representation(X, F2) == MatrixF.from_rows(F2, [[0, 1], [1, 1]])
    assert regular_representation(F4.one, F2) == MatrixF.identity(F2, 2)
    assert regular_representation(F4.zero, F2) == MatrixF.zeros(F2, 2, 2)


# --- linear algebra -------------------------------------------------------------------------


def test_rref_cases():
    R, r = rref(MatrixF.from_rows(F3, [[1, 1], [0, 0], [1, 1]]))
    assert r == 1 and R == MatrixF.from_rows(F3, [[1, 1], [0, 0], [0, 0]])
    I = MatrixF.identity(F3, 3)
    assert rref(I) == (I, 3)
    assert rref(MatrixF.from_rows(F3, [[0, 2], [1, 0]])) == (MatrixF.identity(F3, 2), 2)


def test_subspace_cases():
    U = subspace_from_rows(MatrixF.from_rows(F3, [[1, 1, 0, 1, 1]]))
    assert U.dim == 1 and U.contains((2, 2, 0, 2, 2))
    assert subspace_from_rows(MatrixF.zeros(F3, 2, 3)).dim == 0
    assert subspace_from_rows(MatrixF.identity(F2, 2)).dim == 2
    e1, e2 = sp(F2, (1, 0, 0)), sp(F2, (0, 1, 0))
    assert subspace_sum(e1, e2) == sp(F2, (1, 0, 0), (0, 1, 0))
    assert subspace_sum(e1, e1) == e1
    assert subspace_sum(e1, zero_subspace(F2, 3)) == e1
    with pytest.raises(DomainError):
        subspace_sum(e1, sp(F2, (1, 0)))


def test_grassmann_cases():
    assert grassmann_distance(sp(F2, (1, 0)), sp(F2, (0, 1))) == 1
    U = sp(F2, (1, 0, 1, 1), (0, 1, 1, 0))
    assert grassmann_distance(U, U) == 0
    assert grassmann_distance(sp(F2, (1, 0, 0, 0), (0, 1, 0, 0)), sp(F2, (0, 0, 1, 0), (0, 0, 0, 1))) == 2


def test_big_cell_cases():
    assert is_big_cell(sp(F2, (1, 0, 1), (0, 1, 1)))
    assert not is_big_cell(sp(F2, (0, 1)))
    assert is_big_cell(sp(F2, (1, 0)))
    assert big_cell_matrix(sp(F3, (1, 1, 0, 1, 1)), 1) == MatrixF.from_rows(F3, [[1, 0, 1, 1]])
    full = subspace_from_rows(MatrixF.identity(F2, 3))
    assert big_cell_matrix(full, 3).shape == (3, 0)
    assert big_cell_matrix(sp(F2, (1, 0, 0, 0), (0, 1, 0, 0)), 2) == MatrixF.zeros(F2, 2, 2)
    with pytest.raises(CellError):
        big_cell_matrix(sp(F2, (0, 1)), 1)


# --- flags ----------------------------------------------------------------------------------------


def test_project_cases():
    assert project((1, 2, 3, 4, 5), 1, 3) == (1, 0, 0, 4, 5)
    assert project((1, 2, 3), 2, 2) == (1, 2, 3)
    assert project((1, 1, 1), 1, 2) == (1, 0, 1)
    with pytest.raises(DomainError):
        project((1, 1, 1), 0, 2)


@pytest.mark.parametrize("rows,spaces", T_FLAGS)
def test_example_flags(rows, spaces):
    delta = UpperTriangular.from_rows(F3, rows)
    expected = [sp(F3, *gens) for gens in spaces]
    flag = flag_from_matrix(delta)
    assert list(flag.spaces) == expected
    assert is_degenerate_flag(expected)
    assert matrix_from_flag(expected) == delta


def test_example_flags_distance_matches_flag_rank():
    d1, d2 = (UpperTriangular.from_rows(F3, rows) for rows, _ in T_FLAGS[:2])
    assert d1 + d2 == UpperTriangular.from_rows(F3, T_FLAGS[2][0])
    assert flag_distance(flag_from_matrix(d1), flag_from_matrix(d2)) == flag_rank(d1 - d2)


def test_coordinate_flag():
    coordinate = [sp(F2, *[tuple(int(c == r) for c in range(4)) for r in range(i)]) for i in range(1, 4)]
    zero = UpperTriangular.zero(F2, 3)
    assert list(flag_from_matrix(zero).spaces) == coordinate
    assert list(full_flag_from_matrix(zero).spaces) == coordinate
    assert is_degenerate_flag(coordinate)
    assert matrix_from_flag(coordinate) == zero


def test_degenerate_flag_cases():
    assert is_degenerate_flag([sp(F2, (0, 1, 0)), sp(F2, (1, 0, 0), (0, 0, 1))])
    assert not is_degenerate_flag([sp(F2, (1, 1, 0)), sp(F2, (0, 1, 0), (0, 0, 1))])


def test_roundtrip_500_random():
    rnd = random.Random(500)
    for _ in range(500):
        d = UpperTriangular.random(F3, 4, rnd)
        assert matrix_from_flag(flag_from_matrix(d)) == d


def test_flag_rank_cases():
    first = UpperTriangular.from_rows(F3, T_FLAGS[0][0])
    assert [rank(first.corner(i)) for i in range(1, 5)] == [1, 2, 1, 1]
    assert flag_rank(first) == 5
    assert flag_rank(UpperTriangular.zero(F3, 4)) == 0
    C = build_max_distance_code(F2, 3)
    assert flag_rank(C.basis[1]) == 4 == d_max(4)


def test_d_max_cases():
    assert (d_max(4), d_max(5), d_max(2)) == (4, 6, 1)


def test_flag_distance_shape_mismatch():
    with pytest.raises(DomainError):
        flag_distance(flag_from_matrix(UpperTriangular.zero(F2, 2)), flag_from_matrix(UpperTriangular.zero(F2, 3)))


# --- codes ----------------------------------------------------------------------------------


def test_code_cases():
    T = example_code_t()
    assert min_distance(T) == 5
    with pytest.raises(DomainError):
        min_distance(FlagRankCode(F2, 3))
    assert min_distance(build_max_distance_code(F2, 3)) == 4
    assert dual_code(T).dim == 6
    full = FlagRankCode(F2, 2, tuple(UpperTriangular(F2, 2, tuple(int(k == j) for k in range(3))) for j in range(3)))
    assert dual_code(full).dim == 0
    for cw in T.codewords():
        assert not any(syndrome(cw, T.dual_basis))
    assert not any(syndrome(UpperTriangular.zero(F3, 4), T.dual_basis))


def test_trace_pairing_cases():
    E11 = UpperTriangular.from_rows(F2, [[1, 0], [0, 0]])
    E22 = UpperTriangular.from_rows(F2, [[0, 0], [0, 1]])
    assert trace_pairing(E11, E11) == F2.one
    assert trace_pairing(E11, E22) == F2.zero
    b1, b2 = example_code_t().basis[:2]
    # entrywise products, row by row: (0+0+1+0) + (2+0+0) + (1+0) + 0 = 4 = 1 mod 3
    assert trace_pairing(b1, b2) == F3(1)
    with pytest.raises(DomainError):
        trace_pairing(E11, UpperTriangular.zero(F2, 3))


def test_syndrome_table_cases():
    C = build_max_distance_code(F2, 3)
    table = build_syndrome_table(C)
    assert len(table.dual_basis) == 4 and len(table.leaders) == 15
    full = FlagRankCode(F2, 2, tuple(UpperTriangular(F2, 2, tuple(int(k == j) for k in range(3))) for j in range(3)))
    ftable = build_syndrome_table(full)
    assert ftable.leaders == {}
    A = UpperTriangular.from_rows(F2, [[1, 1], [0, 1]])
    assert decode(ftable, A) == A


def test_decode_cases():
    T = example_code_t()
    table = build_syndrome_table(T)
    cw = T.codeword([1, 2, 0, 1])
    assert decode(table, cw) == cw
    assert exhaustive_nearest(T, cw) == (cw, 0)
    E = UpperTriangular.from_rows(F3, [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 2]])
    assert flag_rank(E) == 2
    assert decode(table, cw + E) == cw


def test_decode_ties_agree_with_oracle_distance():
    C = build_max_distance_code(F2, 3)
    table = build_syndrome_table(C)
    ties = 0
    for A in UpperTriangular.all(F2, 3):
        dists = sorted(flag_rank(A - cw) for cw in C.codewords())
        if dists[0] == dists[1]:
            ties += 1
            assert flag_rank(A - decode(table, A)) == dists[0]
            assert exhaustive_nearest(C, A)[1] == dists[0]
    assert ties > 0
    assert table.covering_radius >= max(exhaustive_nearest(C, A)[1] for A in UpperTriangular.all(F2, 3))


def test_max_distance_cases():
    for n, d in ((3, 4), (4, 6)):
        C = build_max_distance_code(F2, n)
        assert (C.dim, min_distance(C)) == (2, d)


# --- protocol ---------------------------------------------------------------------------------


def test_source_cases():
    assert source_emit(UpperTriangular.zero(F2, 2)) == [Packet((1, 0, 0), 1), Packet((0, 1, 0), 2)]
    first = UpperTriangular.from_rows(F3, T_FLAGS[0][0])
    pkts = source_emit(first)
    assert pkts[0] == Packet((1, 1, 0, 1, 1), 1)
    assert pkts[2] == Packet((0, 0, 1, 1, 1), 3)


def test_node_combine_cases():
    n = 4
    d = UpperTriangular.from_rows(F3, T_FLAGS[0][0])
    identity = [[int(i == j) for j in range(n)] for i in range(n)]
    out, ops = node_combine(source_emit(d), F3, n, coefficients=identity)
    assert out == source_emit(d)
    assert ops.projected[2] == 9 and ops.baseline[2] == 15
    zeros = [[0] * n for _ in range(n)]
    out, _ = node_combine(source_emit(d), F3, n, coefficients=zeros)
    assert all(not any(p.payload) for p in out)


def test_receiver_cases():
    d = UpperTriangular.from_rows(F3, T_FLAGS[2][0])
    pkts = source_emit(d)
    assert receiver_reconstruct(pkts, F3, 4) == list(flag_from_matrix(d).spaces)
    assert receiver_reconstruct(pkts + pkts, F3, 4) == receiver_reconstruct(pkts, F3, 4)
    lost = [p for p in pkts if p.seq != 1]
    W = receiver_reconstruct(lost, F3, 4)
    assert W[0].dim == 0
    with pytest.raises(CellError):
        matrix_from_flag(W)


def test_trial_cases():
    T = example_code_t()
    cw = T.codeword([2, 0, 1, 1])
    assert run_trial(line_topology(3), T, cw, seed=1).sinks[0].recovered == cw
    assert run_trial(line_topology(1, erasure=1), T, cw, seed=1).outcome == "cell-failure"
    E = UpperTriangular.from_rows(F3, [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]])
    assert run_trial(line_topology(2), T, cw, seed=2, error=E).sinks[0].recovered == cw
    report = run_campaign(line_topology(2), T, 100, seed=5)
    assert report.successes == 100
    assert run_campaign(line_topology(2), T, 100, seed=5) == report
