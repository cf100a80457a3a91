import random

import pytest

from orbitspace.catalog import (
    BadParameters,
    CLASS_TABLE,
    class_degrees,
    find_class,
    is_extrapolated,
    table_match,
)


def test_class_degrees_quoted_rows():
    assert class_degrees("I", (), 5) == ((5, 2), 10)
    assert class_degrees("III.3", (), 1) == ((10, 6, 2), 30)
    assert class_degrees("E5", (), 1) == ((30, 20, 12, 2), 120)
    assert class_degrees("A8", (3, 2), 1) == ((4, 3, 2, 2), 14)


def test_class_degrees_scaled_fractional_base():
    # Odd parameter sum is fine when the scale restores integrality.
    assert class_degrees("I(j1,j2)", (1, 2), 4) == ((6, 4, 2), 12)
    with pytest.raises(BadParameters):
        class_degrees("I(j1,j2)", (1, 2), 1)


def test_class_degrees_rejects_bad_input():
    with pytest.raises(BadParameters):
        class_degrees("I", (), 1)  # d1 = 1 < 2
    with pytest.raises(BadParameters):
        class_degrees("A8", (3,), 1)  # wrong parameter count
    with pytest.raises(BadParameters):
        class_degrees("A8", (0, 2), 1)
    with pytest.raises(BadParameters):
        class_degrees("A8", (2, 3), 1)  # unsorted degrees
    with pytest.raises(BadParameters):
        class_degrees("ZZ", (), 1)


def test_class_degrees_a4_wa_uses_parameter():
    degrees, wa = class_degrees("A4", (1, 3), 1)
    assert degrees == (6, 4, 2, 2)
    assert wa == 2 * 6 + 1 * 2
    degrees2, wa2 = class_degrees("A4", (2, 2), 1)
    assert degrees2 == (4, 4, 2, 2)
    assert wa2 == 2 * 4 + 2 * 2


def test_table_match_examples():
    matches = {(m.label, m.params, m.s) for m in table_match(3, (6, 4, 2))}
    assert ("III.2", (), 1) in matches
    assert ("I(j1,j2)", (1, 2), 4) in matches
    assert ("II(j1)", (2,), 2) in matches

    only = table_match(2, (7, 2))
    assert [(m.label, m.s) for m in only] == [("I", 7)]
    assert not only[0].extrapolated  # class I is the whole family in s

    e1 = table_match(4, (5, 4, 3, 2))
    assert [(m.label, m.s) for m in e1] == [("E1", 1)]

    f4 = {(m.label, m.s) for m in table_match(4, (12, 8, 6, 2))}
    assert ("E4", 1) in f4


def test_table_match_excluded_degrees():
    assert table_match(2, (2, 2)) != []  # sanity: I with s = 2
    assert table_match(3, (7, 5, 2)) == []


def test_table_match_validates_input():
    with pytest.raises(ValueError):
        table_match(3, (4, 6, 2))
    with pytest.raises(ValueError):
        table_match(3, (6, 4, 3))
    with pytest.raises(ValueError):
        table_match(2, (6, 4, 2))


def test_builtin_degree_vectors_recover_named_rows(bases):
    named = {
        ("I2", 3): "I",
        ("A3", None): "III.1",
        ("B3", None): "III.2",
        ("A4", None): "E1",
        ("D4", None): "E2",
        ("B4", None): "E3",
    }
    for key, label in named.items():
        basis = bases[key]
        matches = table_match(basis.q, basis.degrees)
        assert matches, key
        assert label in {m.label for m in matches}, key
    for m in range(2, 9):
        basis = bases[("I2", m)]
        assert "I" in {mt.label for mt in table_match(2, basis.degrees)}


def test_generated_rows_satisfy_weight_bound():
    rng = random.Random(1)
    for row in CLASS_TABLE:
        for _ in range(8):
            params = tuple(rng.randint(1, 4) for _ in row.param_names)
            s = rng.randint(1, 3)
            try:
                degrees, wa = class_degrees(row.label, params, s)
            except BadParameters:
                continue
            assert degrees == tuple(sorted(degrees, reverse=True))
            assert degrees[-2] >= 2
            assert 2 * degrees[0] <= wa <= 2 * sum(d - 1 for d in degrees), (row.label, params, s)


def test_extrapolation_flag():
    assert is_extrapolated("III.2", 2)
    assert not is_extrapolated("III.2", 1)
    assert not is_extrapolated("I", 9)
    assert not is_extrapolated("II(j1)", 3)


def test_find_class_disambiguation():
    assert find_class("I", 0).q == 2
    assert find_class("I", 2).q == 3
    assert find_class("A3", 3).label == "A3(j1,j2,j3)"
    with pytest.raises(BadParameters):
        find_class("A3", 1)
