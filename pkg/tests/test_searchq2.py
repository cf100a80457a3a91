import pytest

from orbitspace.basisreg import builtin_basis
from orbitspace.boundary import STRICTLY_ACTIVE, check_active, initial_conditions_check
from orbitspace.pmatrix import build_p_matrix, grading_check
from orbitspace.polyring import parse_poly
from orbitspace.searchq2 import search_allowable_q2
from orbitspace.strata import classify_point


def test_d1_3_unique_representative():
    solutions = search_allowable_q2(3)
    assert len(solutions) == 1
    sol = solutions[0]
    assert sol.p11 == parse_poly("9*p2^2", sol.p11.space)
    assert sol.a == parse_poly("p2^3 - p1^2", sol.a.space)


def test_d1_4_mixed_coefficient_forced_to_zero():
    solutions = search_allowable_q2(4)
    assert len(solutions) == 1
    sol = solutions[0]
    assert sol.p11 == parse_poly("16*p2^3", sol.p11.space)
    assert sol.p11.coefficient((1, 1)) == 0
    assert any("case c0 != 0" in note for note in sol.notes)


@pytest.mark.parametrize("d1", range(2, 9))
def test_matches_dihedral_matrix(d1):
    solutions = search_allowable_q2(d1)
    assert len(solutions) == 1
    built = build_p_matrix(builtin_basis("I2", d1))
    assert solutions[0].pmatrix().entries == built.entries


@pytest.mark.parametrize("d1", range(2, 9))
def test_solutions_pass_every_gate(d1):
    (sol,) = search_allowable_q2(d1)
    matrix = sol.pmatrix()
    assert grading_check(matrix) == []
    assert check_active(matrix, matrix.det()).kind == STRICTLY_ACTIVE
    assert initial_conditions_check(matrix, sol.a).all_passed
    label = classify_point(matrix, (0, 1))
    assert label.inside and label.rank == 2


def test_rejects_degenerate_degree():
    with pytest.raises(ValueError):
        search_allowable_q2(1)
