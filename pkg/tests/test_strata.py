import random
from fractions import Fraction

import pytest

from orbitspace.basisreg import builtin_basis, orbit_map
from orbitspace.linalg import NotSymmetric, RationalMatrix
from orbitspace.pmatrix import build_p_matrix
from orbitspace.strata import (
    IN_S,
    OUTSIDE,
    classify_point,
    principal_connectivity,
    psd_rank,
    read_section_csv,
    section_grid,
    section_summary,
    write_section_csv,
)

from conftest import random_ambient_point


def test_psd_rank_examples():
    assert psd_rank(RationalMatrix.from_rows([[4, 4], [4, 4]])) == (True, 1)
    assert psd_rank(RationalMatrix.from_rows([[4, 8], [8, 4]])) == (False, 2)
    assert psd_rank(RationalMatrix.from_rows([[0, 0], [0, 0]])) == (True, 0)


def test_psd_rank_needs_leading_minors_insufficient_case():
    # Leading principal minors alone would wrongly accept this one.
    matrix = RationalMatrix.from_rows([[0, 0], [0, -1]])
    assert psd_rank(matrix) == (False, 1)


def test_psd_rank_rejects_nonsymmetric():
    with pytest.raises(NotSymmetric):
        psd_rank(RationalMatrix.from_rows([[1, 2], [3, 4]]))


def test_classify_i2_2_sample_points(pmats):
    matrix = pmats[("I2", 2)]
    assert classify_point(matrix, (0, 1)).rank == 2
    assert classify_point(matrix, (1, 1)).rank == 1
    assert classify_point(matrix, (2, 1)).status == OUTSIDE
    origin = classify_point(matrix, (0, 0))
    assert origin.status == IN_S and origin.rank == 0


def test_images_never_outside(bases, pmats):
    rng = random.Random(23)
    for key, basis in bases.items():
        matrix = pmats[key]
        for _ in range(10):
            x = random_ambient_point(basis, rng)
            assert classify_point(matrix, orbit_map(basis, x)).inside, key


def test_scaling_ray_preserves_rank(pmats):
    matrix = pmats[("I2", 3)]
    for p1 in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        base_label = classify_point(matrix, (p1, 1))
        for t in (Fraction(1, 3), Fraction(5, 2)):
            scaled = (t**3 * p1, t**2)
            label = classify_point(matrix, scaled)
            assert label == base_label


def test_section_grid_i2_3(pmats):
    matrix = pmats[("I2", 3)]
    grid = section_grid(matrix, [(-2, 2)], 401)
    for index in grid.indices():
        p1 = grid.node(index)[0]
        label = grid.label(index)
        assert label.inside == (p1 * p1 <= 1)
        if p1 * p1 == 1:
            assert label.rank == 1
    assert principal_connectivity(grid) == 1


def test_section_grid_resolution_two_corners_only(pmats):
    matrix = pmats[("I2", 3)]
    grid = section_grid(matrix, [(-2, 2)], 2)
    assert grid.shape == (2,)
    assert [grid.label((i,)).status for i in range(2)] == [OUTSIDE, OUTSIDE]


def test_section_grid_validates_box_and_resolution(pmats):
    matrix = pmats[("I2", 3)]
    with pytest.raises(ValueError):
        section_grid(matrix, [(-2, 2), (-2, 2)], 11)
    with pytest.raises(ValueError):
        section_grid(matrix, [(-2, 2)], 1)


def test_section_grid_outside_box_has_zero_components(pmats):
    matrix = pmats[("I2", 3)]
    grid = section_grid(matrix, [(3, 4)], 11)
    assert principal_connectivity(grid) == 0


def test_section_grid_threads_deterministic(pmats):
    matrix = pmats[("I2", 3)]
    serial = section_grid(matrix, [(-2, 2)], 41)
    threaded = section_grid(matrix, [(-2, 2)], 41, threads=3)
    assert serial.labels == threaded.labels


def test_section_csv_round_trip(pmats):
    matrix = pmats[("I2", 3)]
    grid = section_grid(matrix, [(-2, 2)], 41)
    text = write_section_csv(grid)
    again = read_section_csv(text)
    assert again.q == grid.q
    assert again.labels == grid.labels
    assert again.axes == grid.axes
    assert write_section_csv(again) == text


def test_section_summary_counts(pmats):
    matrix = pmats[("I2", 3)]
    grid = section_grid(matrix, [(-2, 2)], 401)
    summary = section_summary(grid)
    assert summary["counts"]["rank_1"] == 2
    assert summary["counts"]["rank_2"] == 199
    assert summary["counts"]["Outside"] == 200
    assert summary["principal_components"] == 1
    assert summary["in_s_bounds"] == [["-1", "1"]]


def test_boundary_nodes_lie_on_complete_factor_zero_set(pmats):
    from orbitspace.boundary import complete_factor_scan

    matrix = pmats[("I2", 3)]
    a_poly = complete_factor_scan(matrix).a
    grid = section_grid(matrix, [(-2, 2)], 401)
    for index in grid.indices():
        label = grid.label(index)
        if not label.inside:
            continue
        value = a_poly.evaluate(grid.node(index))
        if label.rank < matrix.q:
            assert value == 0
        else:
            assert value != 0


def test_b3_section_nonempty_connected_sample():
    matrix = build_p_matrix(builtin_basis("B3"))
    # Box around the fat part of the section, away from its cusps, where
    # the grid spacing resolves the region.
    grid = section_grid(matrix, [(Fraction(1, 5), Fraction(11, 20)), (Fraction(2, 5), Fraction(3, 4))], 61)
    summary = section_summary(grid)
    assert summary["counts"].get("rank_3", 0) > 100
    assert summary["principal_components"] == 1
