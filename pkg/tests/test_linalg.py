from fractions import Fraction

from orbitspace.linalg import (
    RationalMatrix,
    det,
    normalize_vector,
    nullspace,
    principal_minor,
    rank,
    solve_linear,
)


def m(rows):
    return RationalMatrix.from_rows(rows)


def test_nullspace_of_identity_is_empty():
    assert nullspace(RationalMatrix.identity(3)) == []


def test_nullspace_single_row():
    assert nullspace(m([[1, 1]])) == [(1, -1)]


def test_nullspace_rank_one_normalized():
    assert nullspace(m([[1, 2], [2, 4]])) == [(2, -1)]


def test_nullspace_vectors_satisfy_system():
    matrix = m([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    basis = nullspace(matrix)
    assert len(basis) == 3 - rank(matrix)
    for v in basis:
        for row in matrix.entries:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_normalize_vector_coprime_and_sign():
    assert normalize_vector([Fraction(-2, 3), Fraction(4, 3)]) == (1, -2)
    assert normalize_vector([Fraction(0), Fraction(-5, 7)]) == (0, 1)


def test_rank_and_det():
    assert rank(m([[1, 2], [2, 4]])) == 1
    assert det(m([[1, 2], [3, 4]])) == -2
    assert det(m([[2, 0, 0], [0, 3, 0], [0, 0, 5]])) == 30
    assert det(m([[0, 1], [1, 0]])) == -1


def test_solve_linear_unique():
    solution, kernel = solve_linear(m([[2, 0], [0, 4]]), [1, 2])
    assert solution == (Fraction(1, 2), Fraction(1, 2))
    assert kernel == []


def test_solve_linear_inconsistent():
    solution, _ = solve_linear(m([[1, 1], [1, 1]]), [1, 2])
    assert solution is None


def test_solve_linear_underdetermined():
    solution, kernel = solve_linear(m([[1, 1]]), [3])
    assert solution is not None
    assert kernel == [(1, -1)]


def test_principal_minor():
    matrix = m([[4, 4], [4, 4]])
    assert principal_minor(matrix, (0,)) == 4
    assert principal_minor(matrix, (0, 1)) == 0


def test_matmul_and_transpose():
    a = m([[1, 2], [3, 4]])
    assert (a @ RationalMatrix.identity(2)).entries == a.entries
    assert a.transpose().entries == ((1, 3), (2, 4))
    assert not a.is_symmetric()
    assert m([[1, 2], [2, 5]]).is_symmetric()
