"""Catalog of allowable degree patterns for orbit spaces of dimension 2-4.

Each row gives a class of allowable P-matrices: the base degree vector
(a formula in positive integer parameters j_i, evaluated exactly, possibly
with fractional values), the weight of the complete factor, and the finite
reflection group realizing the class when one is known.  A uniform scale
factor s multiplies the base vector while the last degree stays 2; the
*scaled* degrees must come out as integers with d1 >= ... >= d_(q-1) >= 2,
which encodes every divisibility condition implied by the formulas.
Scaling a group-annotated row beyond s = 1 is permitted but flagged as
extrapolation.

Lookups canonicalize parameters: where a formula depends on parameters only
through sums or products, the lexicographically smallest tuple producing
the same degrees and complete-factor weight represents the whole family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence


class BadParameters(Exception):
    """Class parameters violate the row's constraints; the message names
    the violated condition."""


def _f(*values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class AllowableClass:
    label: str
    q: int
    param_names: tuple[str, ...]
    group: str | None
    base: Callable[..., tuple[Fraction, ...]]
    wa: Callable[[Sequence[int], Sequence[int]], int]


def _wa_2d1(d, j):
    return 2 * d[0]


def _wa_3d1(d, j):
    return 3 * d[0]


def _wa_4d1(d, j):
    return 4 * d[0]


CLASS_TABLE: tuple[AllowableClass, ...] = (
    # q = 2
    AllowableClass("I", 2, (), "I2(s)", lambda: _f(1), _wa_2d1),
    # q = 3
    AllowableClass(
        "I(j1,j2)", 3, ("j1", "j2"), None,
        lambda j1, j2: _f(Fraction(j1 + j2, 2), 1),
        _wa_2d1,
    ),
    AllowableClass(
        "II(j1)", 3, ("j1",), None,
        lambda j1: _f(j1 + 1, 2),
        lambda d, j: 2 * d[0] + d[1],
    ),
    AllowableClass("III.1", 3, (), "A3", lambda: _f(4, 3), _wa_3d1),
    AllowableClass("III.2", 3, (), "B3", lambda: _f(6, 4), _wa_3d1),
    AllowableClass("III.3", 3, (), "H3", lambda: _f(10, 6), _wa_3d1),
    # q = 4
    AllowableClass(
        "A1(j1,j2,j3,j4)", 4, ("j1", "j2", "j3", "j4"), None,
        lambda j1, j2, j3, j4: _f(
            Fraction((j1 + j2) * (j3 + j4), 4), Fraction(j1 + j2, 2), 1
        ),
        _wa_2d1,
    ),
    AllowableClass(
        "A2(j1,j2,j3,j4)", 4, ("j1", "j2", "j3", "j4"), None,
        lambda j1, j2, j3, j4: _f(
            Fraction((j1 + 1) * (j2 + j3), 2) + j4, j1 + 1, 2
        ),
        _wa_2d1,
    ),
    AllowableClass(
        "A3(j1,j2,j3)", 4, ("j1", "j2", "j3"), None,
        lambda j1, j2, j3: _f(Fraction((j1 + 1) * (j2 + j3), 2), j1 + 1, 2),
        lambda d, j: 2 * d[0] + d[2],
    ),
    AllowableClass(
        "A4(j1,j2)", 4, ("j1", "j2"), None,
        lambda j1, j2: _f(2 * j2, j1 + j2, 2),
        lambda d, j: 2 * d[0] + j[0] * d[2],
    ),
    AllowableClass(
        "A5(j1,j2,j3)", 4, ("j1", "j2", "j3"), None,
        lambda j1, j2, j3: _f(j1 * (j2 + 1) + j3, 2 * (j2 + 1), 2),
        lambda d, j: 2 * d[0] + d[1],
    ),
    AllowableClass(
        "A6(j1,j2,j3)", 4, ("j1", "j2", "j3"), None,
        lambda j1, j2, j3: _f(Fraction((j1 + j2) * (j3 + 1), 2), j1 + j2, 1),
        lambda d, j: 2 * d[0] + d[1],
    ),
    AllowableClass(
        "A7(j1,j2)", 4, ("j1", "j2"), None,
        lambda j1, j2: _f(j1 * (j2 + 1), 2 * j1, 2),
        lambda d, j: 2 * d[0] + d[1] + d[2],
    ),
    AllowableClass(
        "A8(j1,j2)", 4, ("j1", "j2"), None,
        lambda j1, j2: _f(j1 + 1, j2 + 1, 2),
        lambda d, j: 2 * d[0] + 2 * d[1],
    ),
    AllowableClass("B1(j1)", 4, ("j1",), None, lambda j1: _f(6 * j1, 4, 3), _wa_2d1),
    AllowableClass("B2", 4, (), None, lambda: _f(4, 3, 3), _wa_3d1),
    AllowableClass(
        "B3(j1,j2)", 4, ("j1", "j2"), None,
        lambda j1, j2: _f(2 * (j1 + j2), Fraction(3 * (j1 + j2), 2), 1),
        _wa_3d1,
    ),
    AllowableClass(
        "B4(j1)", 4, ("j1",), None,
        lambda j1: _f(4 * j1, 3 * j1, 2),
        lambda d, j: 3 * d[0] + d[2],
    ),
    AllowableClass(
        "C1(j1,j2)", 4, ("j1", "j2"), None,
        lambda j1, j2: _f(3 * (j1 + 2 * j2), 6, 4),
        _wa_2d1,
    ),
    AllowableClass(
        "C2(j1)", 4, ("j1",), None,
        lambda j1: _f(6 * j1, 6, 4),
        lambda d, j: 2 * d[0] + d[1],
    ),
    AllowableClass(
        "C3(j1)", 4, ("j1",), None,
        lambda j1: _f(3 * (j1 + 1), 6, 4),
        lambda d, j: 2 * d[0] + 2 * d[1],
    ),
    AllowableClass("C4", 4, (), None, lambda: _f(6, 4, 3), _wa_3d1),
    AllowableClass(
        "C5(j1,j2)", 4, ("j1", "j2"), None,
        lambda j1, j2: _f(3 * (j1 + j2), 2 * (j1 + j2), 1),
        _wa_3d1,
    ),
    AllowableClass(
        "C6(j1)", 4, ("j1",), None,
        lambda j1: _f(6 * j1, 4 * j1, 2),
        lambda d, j: 3 * d[0] + d[2],
    ),
    AllowableClass("D1(j1)", 4, ("j1",), None, lambda j1: _f(15 * j1, 10, 6), _wa_2d1),
    AllowableClass("D2", 4, (), None, lambda: _f(10, 6, 4), _wa_3d1),
    AllowableClass(
        "D3(j1,j2)", 4, ("j1", "j2"), None,
        lambda j1, j2: _f(5 * (j1 + j2), 3 * (j1 + j2), 1),
        _wa_3d1,
    ),
    AllowableClass(
        "D4(j1)", 4, ("j1",), None,
        lambda j1: _f(10 * j1, 6 * j1, 2),
        lambda d, j: 3 * d[0] + d[2],
    ),
    AllowableClass("E1", 4, (), "A4", lambda: _f(5, 4, 3), _wa_4d1),
    AllowableClass("E2", 4, (), "D4", lambda: _f(6, 4, 4), _wa_4d1),
    AllowableClass("E3", 4, (), "B4", lambda: _f(8, 6, 4), _wa_4d1),
    AllowableClass("E4", 4, (), "F4", lambda: _f(12, 8, 6), _wa_4d1),
    AllowableClass("E5", 4, (), "H4", lambda: _f(30, 20, 12), _wa_4d1),
)


def find_class(label: str, nparams: int | None = None) -> AllowableClass:
    """Row lookup by exact label, or by bare prefix plus parameter count."""
    for row in CLASS_TABLE:
        if row.label == label and (nparams is None or len(row.param_names) == nparams):
            return row
    prefix_matches = [
        row for row in CLASS_TABLE
        if row.label.split("(")[0] == label
        and (nparams is None or len(row.param_names) == nparams)
    ]
    if len(prefix_matches) == 1:
        return prefix_matches[0]
    if len(prefix_matches) > 1:
        raise BadParameters(f"label {label!r} is ambiguous; use the full form")
    raise BadParameters(f"unknown class label {label!r} (with {nparams} parameters)")


def class_degrees(label: str, params: Sequence[int] = (), s: int = 1) -> tuple[tuple[int, ...], int]:
    """Scaled degree vector (with the final 2 appended) and the weight of
    the complete factor for a class row."""
    params = tuple(int(v) for v in params)
    row = find_class(label, len(params))
    if len(params) != len(row.param_names):
        raise BadParameters(
            f"class {row.label} takes parameters {row.param_names}, got {len(params)}"
        )
    if any(v < 1 for v in params):
        raise BadParameters("parameters must be positive integers")
    if not isinstance(s, int) or s < 1:
        raise BadParameters("scale s must be a positive integer")
    scaled = [b * s for b in row.base(*params)]
    for value in scaled:
        if value.denominator != 1:
            raise BadParameters(
                f"degree {value} of class {row.label} is not an integer "
                f"for parameters {params} and s = {s}"
            )
    degrees = tuple(int(v) for v in scaled) + (2,)
    for i in range(len(degrees) - 1):
        if degrees[i] < degrees[i + 1]:
            raise BadParameters(f"degrees {degrees} violate d1 >= ... >= d_(q-1) >= 2")
    if degrees[-2] < 2:
        raise BadParameters(f"degrees {degrees} violate d_(q-1) >= 2")
    return degrees, row.wa(degrees, params)


def is_extrapolated(label: str, s: int) -> bool:
    """True when a group-annotated row is scaled beyond the recorded group.

    Rows whose annotation is itself a family in s (class I) scale freely.
    """
    row = find_class(label)
    return row.group is not None and "(s)" not in row.group and s > 1


@dataclass(frozen=True)
class Match:
    label: str
    params: tuple[int, ...]
    s: int
    wa: int
    group: str | None
    extrapolated: bool


def table_match(q: int, degrees: Sequence[int]) -> list[Match]:
    """All catalog rows reproducing a degree vector, canonical parameters.

    The search is exhaustive with parameters bounded by the largest degree
    (all formulas are monotone increasing in each parameter, and the scale
    is pinned by the last degree).  An empty list means the degrees are
    excluded: no allowable class produces them.
    """
    degs = tuple(int(d) for d in degrees)
    if len(degs) != q:
        raise ValueError(f"expected {q} degrees, got {len(degs)}")
    if any(degs[i] < degs[i + 1] for i in range(len(degs) - 1)):
        raise ValueError("degrees must be sorted non-increasing")
    if degs[-1] != 2:
        raise ValueError("the last degree must be 2")
    head = degs[:-1]
    bound = max(degs)
    found: dict[tuple[int, int, int], tuple[int, ...]] = {}
    for row_index, row in enumerate(CLASS_TABLE):
        if row.q != q:
            continue
        nparams = len(row.param_names)
        # The last base entry is parameter-independent in every row, which
        # pins the scale factor down to at most one candidate.
        last = row.base(*(1,) * nparams)[-1]
        s_frac = Fraction(head[-1]) / last
        if s_frac.denominator != 1:
            continue
        s = int(s_frac)
        target = tuple(Fraction(d, s) for d in head)
        for params in product(range(1, bound + 1), repeat=nparams):
            if row.base(*params) == target:
                wa = row.wa(degs, params)
                key = (row_index, s, wa)
                if key not in found or params < found[key]:
                    found[key] = params
    matches = []
    for (row_index, s, wa), params in sorted(found.items()):
        row = CLASS_TABLE[row_index]
        matches.append(
            Match(row.label, params, s, wa, row.group, is_extrapolated(row.label, s))
        )
    return matches
