import random

import pytest

from orbitspace.basisreg import IntegrityBasis, builtin_basis, orbit_map
from orbitspace.pmatrix import (
    BadIbt,
    IbtSpec,
    PMatrix,
    RewriteFailed,
    apply_ibt,
    build_p_matrix,
    evaluate_p,
    format_p_matrix,
    grading_check,
    gradient_grammian_at,
    identity_ibt,
    invert_ibt,
    parse_p_matrix,
    transport_poly,
)
from orbitspace.polyring import MultiPoly, VariableSpace, parse_poly, p_space

from conftest import random_ambient_point


def test_build_i2_3_matrix():
    matrix = build_p_matrix(builtin_basis("I2", 3))
    sp = matrix.space
    assert matrix.entries[0][0] == parse_poly("9*p2^2", sp)
    assert matrix.entries[0][1] == parse_poly("6*p1", sp)
    assert matrix.entries[1][1] == parse_poly("4*p2", sp)


def test_last_column_law_everywhere(pmats):
    for key, matrix in pmats.items():
        sp = matrix.space
        for a in range(matrix.q):
            expected = MultiPoly.variable(sp, f"p{a + 1}") * (2 * matrix.degrees[a])
            assert matrix.entries[a][matrix.q - 1] == expected, (key, a)


def test_b3_entry_12():
    matrix = build_p_matrix(builtin_basis("B3"))
    expected = parse_poly("32*p1*p3 + 12*p2^2 - 24*p2*p3^2 + 4*p3^4", matrix.space)
    assert matrix.entries[0][1] == expected


def test_grading_check_passes_for_builds(pmats):
    for key, matrix in pmats.items():
        assert grading_check(matrix) == [], key


def test_grading_check_weight_violation():
    matrix = build_p_matrix(builtin_basis("I2", 3))
    sp = matrix.space
    broken = PMatrix(
        matrix.degrees,
        ((parse_poly("p2", sp), matrix.entries[0][1]),
         (matrix.entries[1][0], matrix.entries[1][1])),
    )
    kinds = {v.kind for v in grading_check(broken)}
    assert "WrongWeight" in kinds


def test_grading_check_last_column_violation():
    matrix = build_p_matrix(builtin_basis("I2", 3))
    sp = matrix.space
    broken = PMatrix(
        matrix.degrees,
        ((matrix.entries[0][0], parse_poly("3*p1", sp)),
         (parse_poly("3*p1", sp), matrix.entries[1][1])),
    )
    kinds = {v.kind for v in grading_check(broken)}
    assert "LastColumnLaw" in kinds


def test_evaluate_p_examples():
    m3 = build_p_matrix(builtin_basis("I2", 3))
    assert evaluate_p(m3, (0, 1)).entries == ((9, 0), (0, 4))
    m2 = build_p_matrix(builtin_basis("I2", 2))
    assert evaluate_p(m2, (1, 1)).entries == ((4, 4), (4, 4))
    assert all(v == 0 for row in evaluate_p(m3, (0, 0)).entries for v in row)


def test_round_trip_grammian_random_points(bases, pmats):
    rng = random.Random(5)
    for key, basis in bases.items():
        matrix = pmats[key]
        for _ in range(10):
            x = random_ambient_point(basis, rng)
            image = orbit_map(basis, x)
            assert evaluate_p(matrix, image) == gradient_grammian_at(basis, x), key


def test_build_fails_loudly_for_dependent_basis():
    space = VariableSpace.unit(("x", "y"))
    dependent = IntegrityBasis(
        "dependent",
        space,
        (parse_poly("(x^2 + y^2)^2", space), parse_poly("x^2 + y^2", space)),
        (4, 2),
    )
    with pytest.raises(RewriteFailed) as info:
        build_p_matrix(dependent)
    assert info.value.entry == (0, 0)


# -- triangular basis changes --------------------------------------------------

def test_identity_ibt_is_noop():
    matrix = build_p_matrix(builtin_basis("B3"))
    assert apply_ibt(matrix, identity_ibt(matrix.space)).entries == matrix.entries


def test_diagonal_ibt_bilinearity():
    matrix = build_p_matrix(builtin_basis("I2", 3))
    sp = matrix.space
    ibt = IbtSpec(sp, (parse_poly("5*p1", sp), parse_poly("p2", sp)))
    out = apply_ibt(matrix, ibt)
    # P'11 = c^2 P11 and P'12 = c P12, rewritten in the new coordinates.
    assert out.entries[0][0] == matrix.entries[0][0] * 25
    assert out.entries[0][1] == matrix.entries[0][1]  # c * (6 p1) = 6 p1'
    assert out.entries[1][1] == matrix.entries[1][1]


def test_equal_degree_block_keeps_last_column_law():
    matrix = build_p_matrix(builtin_basis("I2", 2))
    sp = matrix.space
    ibt = IbtSpec(sp, (parse_poly("p1 + 7*p2", sp), parse_poly("p2", sp)))
    out = apply_ibt(matrix, ibt)
    assert grading_check(out) == []


def test_d4_equal_degree_block_ibt(pmats):
    # D4 carries the one equal-degree pair among the built-ins; the change
    # may mix the two degree-4 invariants through a constant block.
    matrix = pmats[("D4", None)]
    sp = matrix.space
    ibt = IbtSpec(
        sp,
        (
            parse_poly("p1 + 2*p2*p4 - p3*p4 + p4^3", sp),
            parse_poly("p2 + p3 + p4^2", sp),
            parse_poly("p2 - p3", sp),
            parse_poly("p4", sp),
        ),
    )
    transformed = apply_ibt(matrix, ibt)
    assert grading_check(transformed) == []
    assert apply_ibt(transformed, invert_ibt(ibt)).entries == matrix.entries
    assert transformed.det() == transport_poly(ibt, matrix.det()) * ibt.determinant() ** 2


def test_ibt_inverse_round_trip_b3():
    matrix = build_p_matrix(builtin_basis("B3"))
    sp = matrix.space
    ibt = IbtSpec(
        sp,
        (
            parse_poly("2*p1 + p2*p3 - 3*p3^3", sp),
            parse_poly("p2 + 2*p3^2", sp),
            parse_poly("p3", sp),
        ),
    )
    transformed = apply_ibt(matrix, ibt)
    assert grading_check(transformed) == []
    assert apply_ibt(transformed, invert_ibt(ibt)).entries == matrix.entries


@pytest.mark.parametrize("key", [("I2", 4), ("B3", None)])
def test_det_transforms_by_jacobian_square(key, pmats):
    matrix = pmats[key]
    sp = matrix.space
    if matrix.q == 2:
        ibt = IbtSpec(sp, (parse_poly("3*p1 + p2^2", sp), parse_poly("p2", sp)))
    else:
        ibt = IbtSpec(
            sp,
            (
                parse_poly("p1 + p2*p3", sp),
                parse_poly("2*p2 - p3^2", sp),
                parse_poly("p3", sp),
            ),
        )
    transformed = apply_ibt(matrix, ibt)
    expected = transport_poly(ibt, matrix.det()) * ibt.determinant() ** 2
    assert transformed.det() == expected


def test_bad_ibt_rejected():
    sp = p_space((3, 2))
    with pytest.raises(BadIbt):
        IbtSpec(sp, (parse_poly("p2", sp), parse_poly("p2", sp)))
    with pytest.raises(BadIbt):
        IbtSpec(sp, (MultiPoly.zero(sp), parse_poly("p2", sp)))
    sp22 = p_space((2, 2))
    with pytest.raises(BadIbt):
        # singular constant block on the equal-degree pair
        IbtSpec(sp22, (parse_poly("p1 + p2", sp22), parse_poly("p1 + p2", sp22)))


# -- serialization --------------------------------------------------------------

def test_p_matrix_serialization_round_trip(pmats):
    for key, matrix in pmats.items():
        text = format_p_matrix(matrix)
        again = parse_p_matrix(text)
        assert again.degrees == matrix.degrees
        assert again.entries == matrix.entries
        assert format_p_matrix(again) == text, key
