"""Inverse classification of 2x2 matrices from the boundary equation alone.

With q = 2 and a chosen top degree d1, only the entry P11 is free: the last
column is forced to P12 = 2 d1 p1, P22 = 4 p2, and the complete factor is
det(P) itself since its weight hits the lower bound 2 d1.  Writing P11 as an
unknown combination of the monomials of weight 2 d1 - 2 turns the boundary
equation into a small polynomial system in the coefficients (quadratic,
because det(P) is linear in P11).  At q = 2 there are at most two unknown
coefficients: the pure monomial p2^(d1-1) and, for even d1, one mixed
monomial p1 * p2^((d1-2)/2); the system is solved by direct elimination
with a case split on the mixed coefficient vanishing.

The residual basis freedom is the triangular rescaling p1 -> c p1 (plus,
for even d1, an additive p2^(d1/2) shift, which the equation itself rules
out).  A returned representative is canonicalized by zeroing the mixed
coefficient and scaling so that P11(p0) = d1^2; it must then pass the local
checks at p0 and carry the full-rank label there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .boundary import (
    STRICTLY_ACTIVE,
    check_active,
    initial_conditions_check,
    normalize_factor,
    p0_point,
)
from .polyring import MultiPoly, VariableSpace, monomials_of_weight, p_space
from .pmatrix import PMatrix
from .strata import classify_point


@dataclass(frozen=True)
class Q2Solution:
    """One canonicalized allowable 2x2 matrix for a given d1."""

    d1: int
    p11: MultiPoly
    p12: MultiPoly
    p22: MultiPoly
    a: MultiPoly
    notes: tuple[str, ...]

    def pmatrix(self) -> PMatrix:
        return PMatrix((self.d1, 2), ((self.p11, self.p12), (self.p12, self.p22)))


def _combined_space(d1: int, unknowns: int) -> VariableSpace:
    """Ring Q[c...][p1, p2]; the coefficient variables carry weight 1."""
    names = tuple(f"c{i}" for i in range(unknowns)) + ("p1", "p2")
    weights = (1,) * unknowns + (d1, 2)
    return VariableSpace(names, weights)


def _coefficient_equations(residual: MultiPoly, unknowns: int) -> list[dict[tuple[int, ...], Fraction]]:
    """Group the residual by its (p1, p2) part; each group is one equation
    in the c variables, stored as {c-exponent: coefficient}."""
    groups: dict[tuple[int, int], dict[tuple[int, ...], Fraction]] = {}
    for exponent, coeff in residual.terms().items():
        p_part = exponent[unknowns:]
        c_part = exponent[:unknowns]
        groups.setdefault(p_part, {})[c_part] = coeff
    return [groups[key] for key in sorted(groups)]


def _substitute_zero(equation: dict[tuple[int, ...], Fraction], index: int) -> dict[tuple[int, ...], Fraction]:
    return {e: c for e, c in equation.items() if e[index] == 0}


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction] | None:
    """Exact rational roots of a univariate polynomial given by its
    coefficient list (ascending); None when it is identically zero."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return None
    if len(coeffs) == 1:
        return []
    denom = lcm(*[c.denominator for c in coeffs])
    ints = [int(c * denom) for c in coeffs]
    low = next(i for i, c in enumerate(ints) if c)
    roots = [Fraction(0)] if low > 0 else []
    ints = ints[low:]

    def divisors(n: int) -> list[int]:
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.extend((d, n // d))
            d += 1
        return sorted(set(out))

    candidates = {
        Fraction(sign * p, qd)
        for p in divisors(abs(ints[0]))
        for qd in divisors(abs(ints[-1]))
        for sign in (1, -1)
    }
    for t in sorted(candidates):
        if sum(c * t**k for k, c in enumerate(ints)) == 0:
            roots.append(t)
    return sorted(set(roots))


def _univariate_solutions(equations, index: int, arity: int, notes: list[str], label: str) -> list[Fraction] | str:
    """Solve equations that involve only variable `index`.

    Returns "free" when every equation vanishes identically, else the list
    of common rational roots.
    """
    root_sets = []
    for eq in equations:
        degree = max((e[index] for e in eq), default=0)
        coeffs = [Fraction(0)] * (degree + 1)
        for e, c in eq.items():
            if any(e[k] for k in range(arity) if k != index):
                raise ValueError("equation is not univariate")
            coeffs[e[index]] += c
        roots = _rational_roots(coeffs)
        if roots is None:
            continue
        root_sets.append(set(roots))
    if not root_sets:
        notes.append(f"{label}: residual vanishes identically")
        return "free"
    common = sorted(set.intersection(*root_sets))
    notes.append(f"{label}: isolated roots {common}")
    return common


def _solve_coefficient_system(equations, unknowns: int, notes: list[str]) -> list[tuple[Fraction, ...]]:
    """Solution families of the boundary system, one representative each.

    A representative is reported per one-parameter family (the generic
    outcome: the whole line through the representative solves the system)
    or per isolated point.  The case split follows the structure of the
    q = 2 system: the mixed coefficient c0 either vanishes or divides its
    equations out, leaving constants and linear relations.
    """
    if unknowns == 1:
        outcome = _univariate_solutions(equations, 0, 1, notes, "single coefficient")
        if outcome == "free":
            return [(Fraction(1),)]
        return [(root,) for root in outcome if root != 0]
    assert unknowns == 2
    families: list[tuple[Fraction, ...]] = []
    # Branch c0 = 0 (no mixed monomial).
    reduced = [eq for eq in (_substitute_zero(eq, 0) for eq in equations) if eq]
    outcome = _univariate_solutions(reduced, 1, 2, notes, "case c0 = 0")
    if outcome == "free":
        families.append((Fraction(0), Fraction(1)))
    else:
        families.extend((Fraction(0), root) for root in outcome if root != 0)
    # Branch c0 != 0: divide each equation by its common power of c0, then
    # the remaining system must be constant/linear (verified below).
    linear_rows: list[tuple[Fraction, Fraction, Fraction]] = []  # a*c0 + b*c1 + k = 0
    inconsistent = False
    for eq in equations:
        common = min(e[0] for e in eq)
        shifted = {(e[0] - common, e[1]): c for e, c in eq.items()}
        degree = max(sum(e) for e in shifted)
        if degree == 0:
            inconsistent = True
            notes.append("case c0 != 0: constant residual equation, inconsistent")
            break
        if degree > 1:
            raise NotImplementedError(
                "unexpected nonlinear residual structure after dividing by c0"
            )
        linear_rows.append(
            (
                shifted.get((1, 0), Fraction(0)),
                shifted.get((0, 1), Fraction(0)),
                shifted.get((0, 0), Fraction(0)),
            )
        )
    if not inconsistent:
        solutions = _solve_linear_two(linear_rows)
        if solutions == "plane":
            notes.append("case c0 != 0: residual vanishes identically")
            families.append((Fraction(1), Fraction(0)))
        else:
            for c0, c1 in solutions:
                if c0 != 0:
                    notes.append(f"case c0 != 0: solution ({c0}, {c1})")
                    families.append((c0, c1))
            if not any(c0 != 0 for c0, _ in solutions):
                notes.append("case c0 != 0: inconsistent")
    return families


def _solve_linear_two(rows) -> list[tuple[Fraction, Fraction]] | str:
    """Common solutions of a*x + b*y + k = 0 rows in two variables.

    Returns "plane" when unconstrained; a line is represented by a single
    nonzero point on it (plus the origin when it passes through it).
    """
    rows = [r for r in rows if any(r)]
    if not rows:
        return "plane"
    for (a1, b1, k1) in rows:
        for (a2, b2, k2) in rows:
            det = a1 * b2 - a2 * b1
            if det:
                x = (-k1 * b2 + k2 * b1) / det
                y = (-a1 * k2 + a2 * k1) / det
                if all(a * x + b * y + k == 0 for a, b, k in rows):
                    return [(x, y)]
                return []
    # All rows proportional: a single line (or empty when k is inconsistent).
    a, b, k = rows[0]
    if a == 0 and b == 0:
        return [] if k else "plane"
    for (a2, b2, k2) in rows[1:]:
        if a * k2 != a2 * k or b * k2 != b2 * k:
            return []
    if k == 0:
        return [(b, -a)]  # direction of the homogeneous line
    if a != 0:
        return [(-k / a, Fraction(0))]
    return [(Fraction(0), -k / b)]


def search_allowable_q2(d1: int) -> list[Q2Solution]:
    """All canonicalized allowable 2x2 matrices with top degree d1."""
    if d1 < 2:
        raise ValueError("d1 must be at least 2")
    pspace = p_space((d1, 2))
    # Mixed monomial (the one containing p1) first: its coefficient is the
    # case-split variable c0.
    exponents = sorted(monomials_of_weight(pspace, 2 * d1 - 2), key=lambda e: -e[0])
    unknowns = len(exponents)
    notes = [
        "unknown P11 monomials: "
        + ", ".join(str(MultiPoly.monomial(pspace, e)) for e in exponents)
    ]
    space = _combined_space(d1, unknowns)
    shift = unknowns

    def lift(exponent: tuple[int, int], c_index: int | None = None) -> MultiPoly:
        e = [0] * space.arity
        if c_index is not None:
            e[c_index] = 1
        e[shift], e[shift + 1] = exponent
        return MultiPoly.monomial(space, tuple(e))

    p11 = MultiPoly.zero(space)
    for i, exponent in enumerate(exponents):
        p11 = p11 + lift(exponent, i)
    p1 = MultiPoly.variable(space, "p1")
    p2 = MultiPoly.variable(space, "p2")
    p12 = p1 * (2 * d1)
    det = p11 * (p2 * 4) - p12 * p12
    residual = p11 * det.differentiate("p1") + p12 * det.differentiate("p2")
    equations = _coefficient_equations(residual, unknowns)
    families = _solve_coefficient_system(equations, unknowns, notes)

    mixed_index = 0 if exponents[0][0] > 0 else None
    pure_index = next(i for i, e in enumerate(exponents) if e[0] == 0)
    solutions = []
    for family in families:
        if mixed_index is not None and family[mixed_index] != 0:
            notes.append(f"family {family}: mixed coefficient survives, discarded")
            continue
        if family[pure_index] <= 0:
            notes.append(f"family {family}: P11(p0) <= 0, degenerate or indefinite at p0")
            continue
        scale = Fraction(d1 * d1) / family[pure_index]
        coeffs = [c * scale for c in family]
        p11_final = MultiPoly(pspace, dict(zip(exponents, coeffs)))
        p1_final = MultiPoly.variable(pspace, "p1")
        p2_final = MultiPoly.variable(pspace, "p2")
        matrix = PMatrix(
            (d1, 2),
            (
                (p11_final, p1_final * (2 * d1)),
                (p1_final * (2 * d1), p2_final * 4),
            ),
        )
        det_final = matrix.det()
        if check_active(matrix, det_final).kind != STRICTLY_ACTIVE:
            notes.append(f"family {family}: determinant not strictly active, discarded")
            continue
        a_norm = normalize_factor(det_final)
        conditions = initial_conditions_check(matrix, a_norm)
        if not conditions.all_passed:
            notes.append(f"family {family}: local checks at p0 failed, discarded")
            continue
        label = classify_point(matrix, p0_point(2))
        if not label.inside or label.rank != 2:
            notes.append(f"family {family}: p0 not in the full-rank stratum, discarded")
            continue
        notes.append(f"representative normalized to P11(p0) = {d1 * d1}")
        solutions.append(
            Q2Solution(
                d1,
                p11_final,
                matrix.entries[0][1],
                matrix.entries[1][1],
                a_norm,
                tuple(notes),
            )
        )
    return solutions
