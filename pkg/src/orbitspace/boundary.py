"""The boundary equation: residuals, activity of factors of det(P), the
weight scan for unknown strictly-active factors, the complete-factor split,
and the local checks at the distinguished section point p0 = (0, ..., 0, 1).

A w-homogeneous polynomial A is *strictly active* for P when the residual
r_a = sum_b P_ab dA/dp_b vanishes identically for a = 1..q-1 (the last
component is forced to 2 w(A) A by the Euler identity through the last row
of P).  Under a triangular change of basic invariants the residual vector
transforms linearly by the Jacobian, picking up J_{aq} * 2 w(A) A terms, so
exact divisibility of every residual component by A is the basis-independent
signature of activity; the strict form holds only in adapted bases.
Activity is therefore reported in three levels: StrictlyActive,
ActiveWithLambda (with the quotient polynomials), or Inactive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polyring import (
    MultiPoly,
    SpaceMismatch,
    ZeroPolynomial,
    exact_divide,
    monomials_of_weight,
)
from .linalg import RationalMatrix, normalize_vector, nullspace
from .pmatrix import PMatrix

STRICTLY_ACTIVE = "StrictlyActive"
ACTIVE_WITH_LAMBDA = "ActiveWithLambda"
INACTIVE = "Inactive"


class WeightOutOfBounds(Exception):
    """Requested weight outside [2, w(det P)]."""


class NothingActive(Exception):
    """No strictly-active factor of det(P) exists at any admissible weight
    in this basis -- the basis is not adapted to the complete factor."""


class DegenerateMatrix(Exception):
    """det(P) vanishes identically (non-coregular data)."""


@dataclass(frozen=True)
class BoundaryResidual:
    """The q residual components r_a = sum_b P_ab dA/dp_b."""

    components: tuple[MultiPoly, ...]

    def strict_part_zero(self) -> bool:
        """True when r_a = 0 for every a < q."""
        return all(not r for r in self.components[:-1])


@dataclass(frozen=True)
class Activity:
    kind: str
    lambdas: tuple[MultiPoly, ...] | None = None

    @property
    def is_active(self) -> bool:
        return self.kind in (STRICTLY_ACTIVE, ACTIVE_WITH_LAMBDA)


@dataclass(frozen=True)
class FactorSplit:
    """det(P) = A * B with A the complete (active) factor, normalized so
    that A(p0) = 1 whenever A does not vanish at p0."""

    a: MultiPoly
    b: MultiPoly


@dataclass(frozen=True)
class InitialConditionsReport:
    """Local structure of A around p0 on the section hyperplane.

    The diagonals of the Hessian of A and of P at p0 are recorded side by
    side without asserting any particular relation between them.
    """

    positive_at_p0: bool
    no_linear_terms: bool
    quadratic_diagonal: bool
    hessian_diagonal: bool
    p_diagonal: bool
    nondegenerate: bool
    hessian_at_p0: tuple[tuple[Fraction, ...], ...]
    p_at_p0: tuple[tuple[Fraction, ...], ...]

    @property
    def all_passed(self) -> bool:
        return (
            self.positive_at_p0
            and self.no_linear_terms
            and self.quadratic_diagonal
            and self.hessian_diagonal
            and self.p_diagonal
            and self.nondegenerate
        )


def p0_point(q: int) -> tuple[Fraction, ...]:
    """The distinguished point (0, ..., 0, 1) of the section hyperplane."""
    return tuple(Fraction(0) for _ in range(q - 1)) + (Fraction(1),)


def boundary_residual(p: PMatrix, a_poly: MultiPoly) -> BoundaryResidual:
    """Exact residual vector of the boundary equation for a candidate A."""
    if a_poly.space != p.space:
        raise SpaceMismatch("A must live in the matrix's p space")
    if a_poly and a_poly.weight() is None:
        raise ZeroPolynomial(f"A = {a_poly} is not w-homogeneous")
    gradient = [a_poly.differentiate(name) for name in p.space.names]
    components = []
    for a in range(p.q):
        total = MultiPoly.zero(p.space)
        for b in range(p.q):
            if gradient[b] and p.entries[a][b]:
                total = total + p.entries[a][b] * gradient[b]
        components.append(total)
    return BoundaryResidual(tuple(components))


def check_active(p: PMatrix, a_poly: MultiPoly) -> Activity:
    """Classify a candidate factor as strictly active, divisibly active
    (returning the quotients lambda_a), or inactive."""
    if not a_poly:
        raise ZeroPolynomial("activity of the zero polynomial is undefined")
    if a_poly.weight() is None:
        raise ZeroPolynomial(f"A = {a_poly} is not w-homogeneous")
    residual = boundary_residual(p, a_poly)
    if residual.strict_part_zero():
        return Activity(STRICTLY_ACTIVE)
    lambdas = []
    for r in residual.components[:-1]:
        quotient = exact_divide(r, a_poly)
        if quotient is None:
            return Activity(INACTIVE)
        lambdas.append(quotient)
    return Activity(ACTIVE_WITH_LAMBDA, tuple(lambdas))


def find_active(p: PMatrix, weight: int) -> list[MultiPoly]:
    """Basis of the space of strictly-active polynomials of one weight.

    Writes A as an unknown combination of the monomials of that weight,
    imposes r_a = 0 coefficientwise for a < q, and returns the normalized
    nullspace mapped back to polynomials.  An empty list means no strictly
    active factor of that weight exists in this basis.
    """
    det_weight = _det_weight(p)
    if weight < 2 or weight > det_weight:
        raise WeightOutOfBounds(f"weight {weight} outside [2, {det_weight}]")
    candidates = monomials_of_weight(p.space, weight)
    if not candidates:
        return []
    candidate_residuals = [
        boundary_residual(p, MultiPoly.monomial(p.space, exponent)) for exponent in candidates
    ]
    rows: list[list[Fraction]] = []
    for a in range(p.q - 1):
        residuals = [r.components[a] for r in candidate_residuals]
        row_monomials = sorted({e for r in residuals for e in r.terms()})
        for monomial in row_monomials:
            rows.append([r.coefficient(monomial) for r in residuals])
    if not rows:
        return [MultiPoly.monomial(p.space, e) for e in candidates]
    kernel = nullspace(RationalMatrix.from_rows(rows))
    return [MultiPoly(p.space, dict(zip(candidates, vector))) for vector in kernel]


def _det_weight(p: PMatrix) -> int:
    return 2 * sum(d - 1 for d in p.degrees)


def normalize_factor(a_poly: MultiPoly) -> MultiPoly:
    """Scale so A(p0) = 1; when A vanishes at p0, scale to coprime integer
    coefficients with positive leading coefficient instead."""
    value = a_poly.evaluate(p0_point(a_poly.space.arity))
    if value != 0:
        return a_poly * (1 / value)
    exponents = sorted(a_poly.terms())
    ints = normalize_vector([a_poly.coefficient(e) for e in exponents])
    normalized = MultiPoly(a_poly.space, dict(zip(exponents, ints)))
    leading_exp = max(normalized.terms(), key=lambda e: (sum(e), e))
    if normalized.coefficient(leading_exp) < 0:
        normalized = -normalized
    return normalized


def complete_factor_scan(p: PMatrix) -> FactorSplit:
    """Split det(P) = A * B with A the complete factor.

    det(P) itself is accepted as the complete factor whenever it is active,
    strictly or divisibly (irreducible actions have a constant passive
    part, and divisible activity is the basis-independent signature).
    Otherwise the admissible weights are scanned downward; each strictly
    active solution is tested as an exact divisor of det(P), and the
    highest-weight divisor found wins.  Nothing active signals a basis not
    adapted to the boundary.
    """
    det_p = p.det()
    if not det_p:
        raise DegenerateMatrix("det(P) is identically zero")
    activity = check_active(p, det_p)
    if activity.is_active:
        a_norm = normalize_factor(det_p)
        b = exact_divide(det_p, a_norm)
        assert b is not None
        return FactorSplit(a_norm, b)
    w_det = det_p.weight()
    d1 = p.degrees[0]
    for weight in range(w_det - 1, 2 * d1 - 1, -1):
        for solution in find_active(p, weight):
            quotient = exact_divide(det_p, solution)
            if quotient is None:
                continue
            a_norm = normalize_factor(solution)
            b = exact_divide(det_p, a_norm)
            assert b is not None
            return FactorSplit(a_norm, b)
    raise NothingActive(
        "no strictly-active divisor of det(P) at any admissible weight; "
        "the current basic invariants are not adapted to the boundary"
    )


def initial_conditions_check(p: PMatrix, a_poly: MultiPoly) -> InitialConditionsReport:
    """The local checks at p0, each reported separately.

    (i) the restriction of A to the section hyperplane has no linear terms;
    (ii) its quadratic part is a diagonal form; (iii) the full Hessian of A
    at p0 is diagonal; (iv) P(p0) is diagonal; (v) the critical point of the
    restriction at the section origin is non-degenerate.  The sign
    convention A(p0) > 0 is reported first.
    """
    space = p.space
    q = p.q
    p0 = p0_point(q)
    positive = a_poly.evaluate(p0) > 0

    one = MultiPoly.constant(space, 1)
    restricted = a_poly.substitute({space.names[-1]: one})
    linear_ok = True
    quadratic_ok = True
    for exponent, _ in restricted.terms().items():
        support = [i for i, e in enumerate(exponent[:-1]) if e]
        degree = sum(exponent[:-1])
        if degree == 1:
            linear_ok = False
        if degree == 2 and len(support) > 1:
            quadratic_ok = False

    hessian = []
    for i in range(q):
        row = []
        for j in range(q):
            second = a_poly.differentiate(space.names[i]).differentiate(space.names[j])
            row.append(second.evaluate(p0))
        hessian.append(tuple(row))
    hessian_ok = all(hessian[i][j] == 0 for i in range(q) for j in range(q) if i != j)

    p_at_p0 = tuple(tuple(entry.evaluate(p0) for entry in row) for row in p.entries)
    p_diag_ok = all(p_at_p0[i][j] == 0 for i in range(q) for j in range(q) if i != j)

    nondegenerate = True
    for i in range(q - 1):
        second = restricted.differentiate(space.names[i]).differentiate(space.names[i])
        if second.evaluate(p0) == 0:
            nondegenerate = False

    return InitialConditionsReport(
        positive_at_p0=positive,
        no_linear_terms=linear_ok,
        quadratic_diagonal=quadratic_ok,
        hessian_diagonal=hessian_ok,
        p_diagonal=p_diag_ok,
        nondegenerate=nondegenerate,
        hessian_at_p0=tuple(hessian),
        p_at_p0=p_at_p0,
    )
