"""Registry of integrity bases: built-in families, file loading, validation,
orbit-map evaluation, and rewriting invariant polynomials in terms of the
basic invariants.

Built-in constructions
----------------------
Every built-in basis uses exact rational coefficients, is homogeneous with
non-increasing degrees, and has the squared norm as its last invariant.
One conventional normalization is stored per group; every statement about a
particular matrix representative therefore holds up to a triangular change
of basic invariants.

``I2(m)``   Dihedral family on the plane: ``p1`` is the harmonic polynomial
            obtained by expanding the real part of ``(x + i*y)**m``, and
            ``p2 = x^2 + y^2``.  Rational orthogonal generators exist only
            for m = 2 and m = 4 and are attached in those cases.

``A2``      The symmetry group of the triangle acting on the plane; its
            invariants coincide with the ``I2(3)`` normal form
            ``x^3 - 3*x*y^2``, ``x^2 + y^2``.

``A3``      Permutations of four coordinates restricted to the sum-zero
            hyperplane, pushed down to 3 variables through the exact
            orthonormal chart with columns (1,1,-1,-1)/2, (1,-1,1,-1)/2,
            (1,-1,-1,1)/2 (this hyperplane admits a fully rational
            orthonormal chart).  After a diagonal rescaling the invariants
            are ``sum x^4 + 6*sum_{i<j} x_i^2 x_j^2``, ``x1*x2*x3`` and the
            norm; the transformed group is generated by coordinate
            permutations and even sign changes.

``A4``      Permutations of five coordinates on the sum-zero hyperplane.
            This hyperplane has no rational chart with orthonormal columns
            (the Gram determinant of any rational basis is 5 times a
            square), so the basis is kept in ambient form: power sums
            ``s5, s4, s3, s2`` of five variables together with the linear
            ``restriction`` x1+..+x5 = 0.  Gradients are orthogonally
            projected onto the hyperplane and rewriting works modulo the
            restriction; this is exactly the matrix the chart would give.

``B2/B3/B4``  Signed permutations of n coordinates: even power sums
            ``sum x^(2n), ..., sum x^4, sum x^2``.

``D4``      Permutations and even sign changes of four coordinates:
            ``sum x^6``, ``sum x^4``, ``x1*x2*x3*x4``, ``sum x^2`` with
            degrees (6, 4, 4, 2).

Basis file format
-----------------
Line oriented, UTF-8; blank lines and ``#`` comments are skipped::

    name: <label>
    n: <int>
    q: <int>
    vars: <id> <id> ...
    degrees: <d1> ... <dq>
    p[1]: <polynomial expression>
    ...
    p[q]: <polynomial expression>
    generator: [r11 r12 ...; r21 r22 ...; ...]

Unknown keys are rejected; the ``p[i]`` lines must appear in order and match
``degrees``.  Entries of generator rows are exact rationals.  A parsed basis
is fully validated before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .linalg import RationalMatrix, solve_linear
from .polyring import (
    MultiPoly,
    SpaceMismatch,
    VariableSpace,
    monomials_of_weight,
    p_space,
    parse_poly,
    ParseError,
)


class UnknownBasis(Exception):
    """No built-in basis of that name."""


class BadParameter(Exception):
    """A built-in family parameter is out of range."""


class BasisFormatError(Exception):
    """Syntax error in a basis file."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class BasisValidationError(Exception):
    """A basis failed validation; `report` lists every violated check."""

    def __init__(self, message: str, report: "BasisReport | None" = None):
        super().__init__(message)
        self.report = report


class DegreesNotSorted(BasisValidationError):
    pass


class LastDegreeNotTwo(BasisValidationError):
    pass


class LastInvariantNotNorm(BasisValidationError):
    pass


class InvariantNotHomogeneous(BasisValidationError):
    pass


class NotOrthogonal(BasisValidationError):
    pass


class NotInvariant(BasisValidationError):
    pass


class BadRestriction(BasisValidationError):
    pass


class NotInvariantInSpan(Exception):
    """The polynomial is not a combination of invariant monomials of its degree."""


class RelationFound(Exception):
    """Rewriting was ambiguous: the basic invariants satisfy an algebraic
    relation, witnessed by a nonzero polynomial in the p variables."""

    def __init__(self, witness: MultiPoly):
        super().__init__(f"algebraic relation among basic invariants: {witness} = 0")
        self.witness = witness


@dataclass(frozen=True)
class BasisViolation:
    kind: str
    message: str


@dataclass(frozen=True)
class BasisReport:
    violations: tuple[BasisViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


_VIOLATION_EXCEPTIONS = {
    "DegreesNotSorted": DegreesNotSorted,
    "LastDegreeNotTwo": LastDegreeNotTwo,
    "LastInvariantNotNorm": LastInvariantNotNorm,
    "InvariantNotHomogeneous": InvariantNotHomogeneous,
    "NotOrthogonal": NotOrthogonal,
    "NotInvariant": NotInvariant,
    "BadRestriction": BadRestriction,
}


@dataclass(frozen=True)
class IntegrityBasis:
    """A set of basic invariants p1..pq in n ambient variables.

    ``restriction``, when present, is a linear form whose zero hyperplane is
    the space the group actually acts on; gradients are then projected onto
    that hyperplane and rewriting works modulo the restriction.
    """

    name: str
    space: VariableSpace
    polys: tuple[MultiPoly, ...]
    degrees: tuple[int, ...]
    generators: tuple[RationalMatrix, ...] | None = None
    restriction: MultiPoly | None = None

    def __post_init__(self):
        if len(self.polys) != len(self.degrees):
            raise ValueError("one degree per basic invariant is required")
        if not self.polys:
            raise ValueError("a basis needs at least one invariant")
        for poly in self.polys:
            if poly.space != self.space:
                raise SpaceMismatch("all invariants must live in the ambient space")
        if any(w != 1 for w in self.space.weights):
            raise ValueError("the ambient space is degree-graded (all weights 1)")
        if self.restriction is not None and self.restriction.space != self.space:
            raise SpaceMismatch("restriction must live in the ambient space")

    @property
    def n(self) -> int:
        return self.space.arity

    @property
    def q(self) -> int:
        return len(self.polys)

    @property
    def pspace(self) -> VariableSpace:
        return p_space(self.degrees)

    def reduce(self, poly: MultiPoly) -> MultiPoly:
        """Canonical representative modulo the restriction (identity if none)."""
        if self.restriction is None:
            return poly
        return poly.substitute(_restriction_substitution(self))


def _restriction_substitution(basis: IntegrityBasis) -> dict[str, MultiPoly]:
    """Solve the restriction for its last involved variable."""
    terms = basis.restriction.sorted_terms()
    linear = {}
    for exp, coeff in terms:
        (i,) = [k for k, e in enumerate(exp) if e]
        linear[i] = coeff
    pivot = max(linear)
    rest = MultiPoly.zero(basis.space)
    for i, coeff in linear.items():
        if i != pivot:
            rest = rest + MultiPoly.variable(basis.space, basis.space.names[i]) * coeff
    value = rest * Fraction(-1, 1) * (1 / linear[pivot])
    return {basis.space.names[pivot]: value}


# -- built-in bases -----------------------------------------------------------


def _power_sum(space: VariableSpace, k: int) -> MultiPoly:
    total = MultiPoly.zero(space)
    for name in space.names:
        total = total + MultiPoly.variable(space, name) ** k
    return total


def _norm(space: VariableSpace) -> MultiPoly:
    return _power_sum(space, 2)


def _permutation_matrix(n: int, images: dict[int, int]) -> RationalMatrix:
    """Matrix sending e_j to e_images[j] (identity elsewhere)."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        rows[images.get(j, j)][j] = Fraction(1)
    return RationalMatrix.from_rows(rows)


def _diagonal_matrix(signs: list[int]) -> RationalMatrix:
    n = len(signs)
    rows = [[Fraction(signs[i] if i == j else 0) for j in range(n)] for i in range(n)]
    return RationalMatrix.from_rows(rows)


def _i2_basis(m: int) -> IntegrityBasis:
    if m < 2:
        raise BadParameter(f"I2 needs m >= 2, got {m}")
    space = VariableSpace.unit(("x", "y"))
    x = MultiPoly.variable(space, "x")
    y = MultiPoly.variable(space, "y")
    # Real part of (x + i*y)^m: alternating even powers of y.
    p1 = MultiPoly.zero(space)
    for j in range(m // 2 + 1):
        term = x ** (m - 2 * j) * y ** (2 * j) * Fraction((-1) ** j * comb(m, 2 * j))
        p1 = p1 + term
    p2 = x**2 + y**2
    generators = None
    if m == 2:
        generators = (_diagonal_matrix([-1, 1]), _diagonal_matrix([1, -1]))
    elif m == 4:
        rot90 = RationalMatrix.from_rows([[0, -1], [1, 0]])
        generators = (rot90, _diagonal_matrix([1, -1]))
    return IntegrityBasis(f"I2({m})", space, (p1, p2), (m, 2), generators)


def _a2_basis() -> IntegrityBasis:
    base = _i2_basis(3)
    return IntegrityBasis("A2", base.space, base.polys, base.degrees, None)


def _a3_basis() -> IntegrityBasis:
    space = VariableSpace.unit(("x1", "x2", "x3"))
    x1 = MultiPoly.variable(space, "x1")
    x2 = MultiPoly.variable(space, "x2")
    x3 = MultiPoly.variable(space, "x3")
    p1 = _power_sum(space, 4) + 6 * (x1**2 * x2**2 + x1**2 * x3**2 + x2**2 * x3**2)
    p2 = x1 * x2 * x3
    p3 = _norm(space)
    generators = (
        _permutation_matrix(3, {0: 1, 1: 0}),
        _permutation_matrix(3, {0: 1, 1: 2, 2: 0}),
        _diagonal_matrix([-1, -1, 1]),
    )
    return IntegrityBasis("A3", space, (p1, p2, p3), (4, 3, 2), generators)


def _a4_basis() -> IntegrityBasis:
    space = VariableSpace.unit(tuple(f"x{i + 1}" for i in range(5)))
    polys = tuple(_power_sum(space, k) for k in (5, 4, 3, 2))
    restriction = _power_sum(space, 1)
    generators = (
        _permutation_matrix(5, {0: 1, 1: 0}),
        _permutation_matrix(5, {0: 1, 1: 2, 2: 3, 3: 4, 4: 0}),
    )
    return IntegrityBasis("A4", space, polys, (5, 4, 3, 2), generators, restriction)


def _b_basis(n: int) -> IntegrityBasis:
    space = VariableSpace.unit(tuple(f"x{i + 1}" for i in range(n)))
    polys = tuple(_power_sum(space, 2 * (n - k)) for k in range(n))
    degrees = tuple(2 * (n - k) for k in range(n))
    gens = [_diagonal_matrix([-1] + [1] * (n - 1))]
    if n > 1:
        gens.insert(0, _permutation_matrix(n, {0: 1, 1: 0}))
    if n > 2:
        gens.insert(1, _permutation_matrix(n, {i: (i + 1) % n for i in range(n)}))
    return IntegrityBasis(f"B{n}", space, polys, degrees, tuple(gens))


def _d4_basis() -> IntegrityBasis:
    space = VariableSpace.unit(("x1", "x2", "x3", "x4"))
    product = MultiPoly.constant(space, 1)
    for name in space.names:
        product = product * MultiPoly.variable(space, name)
    polys = (_power_sum(space, 6), _power_sum(space, 4), product, _norm(space))
    generators = (
        _permutation_matrix(4, {0: 1, 1: 0}),
        _permutation_matrix(4, {0: 1, 1: 2, 2: 3, 3: 0}),
        _diagonal_matrix([-1, -1, 1, 1]),
    )
    return IntegrityBasis("D4", space, polys, (6, 4, 4, 2), generators)


_BUILTIN_NAMES = ("I2", "A2", "A3", "A4", "B2", "B3", "B4", "D4")


def builtin_names() -> tuple[str, ...]:
    return _BUILTIN_NAMES


def builtin_basis(name: str, m: int | None = None) -> IntegrityBasis:
    """One of the built-in bases; ``m`` is only meaningful for I2."""
    if name == "I2":
        if m is None:
            raise BadParameter("I2 needs the parameter m")
        return _i2_basis(m)
    if m is not None:
        raise BadParameter(f"{name} takes no parameter")
    if name == "A2":
        return _a2_basis()
    if name == "A3":
        return _a3_basis()
    if name == "A4":
        return _a4_basis()
    if name in ("B2", "B3", "B4"):
        return _b_basis(int(name[1]))
    if name == "D4":
        return _d4_basis()
    raise UnknownBasis(f"unknown basis {name!r}; built-ins are {', '.join(_BUILTIN_NAMES)}")


# -- validation ---------------------------------------------------------------


def _apply_generator(basis: IntegrityBasis, g: RationalMatrix, poly: MultiPoly) -> MultiPoly:
    """Symbolic substitution x -> g*x: variable i becomes the i-th row form."""
    space = basis.space
    forms = {}
    for i, name in enumerate(space.names):
        expr = MultiPoly.zero(space)
        for j in range(space.arity):
            c = g.entries[i][j]
            if c:
                expr = expr + MultiPoly.variable(space, space.names[j]) * c
        forms[name] = expr
    return poly.substitute(forms)


def verify_basis(basis: IntegrityBasis) -> BasisReport:
    """Run every structural check and report each violation individually."""
    violations: list[BasisViolation] = []
    degrees = basis.degrees
    if any(degrees[i] < degrees[i + 1] for i in range(len(degrees) - 1)):
        violations.append(BasisViolation("DegreesNotSorted", f"degrees {degrees} are not non-increasing"))
    if degrees[-1] != 2:
        violations.append(BasisViolation("LastDegreeNotTwo", f"last degree is {degrees[-1]}, expected 2"))
    for i, (poly, d) in enumerate(zip(basis.polys, degrees)):
        if not poly:
            violations.append(BasisViolation("InvariantNotHomogeneous", f"p{i + 1} is zero"))
            continue
        w = poly.weight()
        if w != d:
            violations.append(
                BasisViolation("InvariantNotHomogeneous", f"p{i + 1} is not homogeneous of degree {d}")
            )
    if basis.polys[-1] != _norm(basis.space):
        violations.append(BasisViolation("LastInvariantNotNorm", "last invariant must be the squared norm"))
    if basis.restriction is not None:
        r = basis.restriction
        if not r or r.weight() != 1:
            violations.append(BasisViolation("BadRestriction", "restriction must be homogeneous of degree 1"))
    if basis.generators:
        identity = RationalMatrix.identity(basis.n)
        for gi, g in enumerate(basis.generators):
            if g.rows != basis.n or g.cols != basis.n:
                violations.append(BasisViolation("NotOrthogonal", f"generator {gi + 1} is not {basis.n}x{basis.n}"))
                continue
            if g.transpose() @ g != identity:
                violations.append(BasisViolation("NotOrthogonal", f"generator {gi + 1} is not orthogonal"))
                continue
            for pi, poly in enumerate(basis.polys):
                if _apply_generator(basis, g, poly) != poly:
                    violations.append(
                        BasisViolation("NotInvariant", f"p{pi + 1} is not invariant under generator {gi + 1}")
                    )
            if basis.restriction is not None:
                if _apply_generator(basis, g, basis.restriction) != basis.restriction:
                    violations.append(
                        BasisViolation("BadRestriction", f"generator {gi + 1} does not preserve the restriction")
                    )
    return BasisReport(tuple(violations))


def _raise_for_report(report: BasisReport):
    if report.ok:
        return
    first = report.violations[0]
    exc = _VIOLATION_EXCEPTIONS.get(first.kind, BasisValidationError)
    raise exc(first.message, report)


def raise_if_invalid(basis: IntegrityBasis) -> None:
    """Run verify_basis and raise the first violation's exception class."""
    _raise_for_report(verify_basis(basis))


# -- basis files --------------------------------------------------------------


def _parse_matrix_literal(text: str, line_no: int) -> RationalMatrix:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise BasisFormatError("generator must be bracketed like [a b; c d]", line_no)
    rows = []
    for chunk in body[1:-1].split(";"):
        entries = chunk.split()
        if not entries:
            raise BasisFormatError("empty generator row", line_no)
        try:
            rows.append([Fraction(e) for e in entries])
        except (ValueError, ZeroDivisionError):
            raise BasisFormatError(f"bad rational in generator row {chunk!r}", line_no) from None
    if len({len(r) for r in rows}) != 1:
        raise BasisFormatError("generator rows have unequal lengths", line_no)
    return RationalMatrix.from_rows(rows)


def parse_basis(text: str) -> IntegrityBasis:
    """Parse and fully validate a basis file."""
    fields: dict[str, tuple[str, int]] = {}
    p_lines: list[tuple[int, str, int]] = []
    generator_lines: list[tuple[str, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise BasisFormatError(f"expected 'key: value', got {line!r}", line_no)
        key, value = line.split(":", 1)
        key = key.strip()
        value = value.strip()
        if key == "generator":
            generator_lines.append((value, line_no))
        elif key.startswith("p[") and key.endswith("]"):
            try:
                index = int(key[2:-1])
            except ValueError:
                raise BasisFormatError(f"bad invariant key {key!r}", line_no) from None
            p_lines.append((index, value, line_no))
        elif key in ("name", "n", "q", "vars", "degrees"):
            if key in fields:
                raise BasisFormatError(f"duplicate key {key!r}", line_no)
            fields[key] = (value, line_no)
        else:
            raise BasisFormatError(f"unknown key {key!r}", line_no)
    for required in ("name", "n", "q", "vars", "degrees"):
        if required not in fields:
            raise BasisFormatError(f"missing key {required!r}", 0)
    name = fields["name"][0]
    try:
        n = int(fields["n"][0])
        q = int(fields["q"][0])
    except ValueError:
        raise BasisFormatError("n and q must be integers", fields["n"][1]) from None
    var_names = tuple(fields["vars"][0].split())
    if len(var_names) != n:
        raise BasisFormatError(f"vars lists {len(var_names)} names but n = {n}", fields["vars"][1])
    try:
        degrees = tuple(int(v) for v in fields["degrees"][0].split())
    except ValueError:
        raise BasisFormatError("degrees must be integers", fields["degrees"][1]) from None
    if len(degrees) != q:
        raise BasisFormatError(f"degrees lists {len(degrees)} values but q = {q}", fields["degrees"][1])
    if [index for index, _, _ in p_lines] != list(range(1, q + 1)):
        raise BasisFormatError("p[i] lines must appear once each, in order p[1]..p[q]", 0)
    space = VariableSpace.unit(var_names)
    polys = []
    for _, expr, line_no in p_lines:
        try:
            polys.append(parse_poly(expr, space))
        except ParseError as err:
            raise BasisFormatError(f"bad polynomial: {err}", line_no) from None
    generators = tuple(_parse_matrix_literal(g, ln) for g, ln in generator_lines) or None
    basis = IntegrityBasis(name, space, tuple(polys), degrees, generators)
    _raise_for_report(verify_basis(basis))
    return basis


def format_basis(basis: IntegrityBasis) -> str:
    """Basis file text for a basis (restrictions are registry-only, not written)."""
    lines = [
        f"name: {basis.name}",
        f"n: {basis.n}",
        f"q: {basis.q}",
        "vars: " + " ".join(basis.space.names),
        "degrees: " + " ".join(str(d) for d in basis.degrees),
    ]
    for i, poly in enumerate(basis.polys, start=1):
        lines.append(f"p[{i}]: {poly}")
    if basis.generators:
        for g in basis.generators:
            rows = "; ".join(" ".join(str(v) for v in row) for row in g.entries)
            lines.append(f"generator: [{rows}]")
    return "\n".join(lines) + "\n"


# -- orbit map and rewriting --------------------------------------------------


def orbit_map(basis: IntegrityBasis, x) -> tuple[Fraction, ...]:
    """Exact image (p1(x), ..., pq(x)) of a rational point.

    For a restricted basis the point must satisfy the restriction, since
    only those points represent orbits of the underlying action.
    """
    point = [Fraction(v) for v in x]
    if basis.restriction is not None and basis.restriction.evaluate(point) != 0:
        raise ValueError(f"point {tuple(point)} does not satisfy the restriction {basis.restriction} = 0")
    return tuple(poly.evaluate(point) for poly in basis.polys)


def expand_in_x(basis: IntegrityBasis, f_p: MultiPoly) -> MultiPoly:
    """Composition f(p1(x), ..., pq(x)) as an ambient polynomial."""
    values = {f"p{i + 1}": poly for i, poly in enumerate(basis.polys)}
    return f_p.substitute(values)


def rewrite_in_basis(basis: IntegrityBasis, f: MultiPoly) -> MultiPoly:
    """Express an invariant polynomial of x in the basic invariants.

    Proceeds degree by degree: candidate monomials in the p variables of
    matching weight are expanded through the orbit map and an exact linear
    system matches coefficients.  A unique solution is returned as a
    polynomial in p; no solution raises NotInvariantInSpan; several
    solutions raise RelationFound with a nonzero algebraic relation among
    the basic invariants (the signature of a non-coregular basis).
    """
    if f.space != basis.space:
        raise SpaceMismatch("polynomial must live in the basis's ambient space")
    pspace = basis.pspace
    result = MultiPoly.zero(pspace)
    if not f:
        return result
    for degree, part in f.weight_components().items():
        result = result + _rewrite_homogeneous(basis, part, degree)
    return result


def _rewrite_homogeneous(basis: IntegrityBasis, f: MultiPoly, degree: int) -> MultiPoly:
    pspace = basis.pspace
    target = basis.reduce(f)
    candidates = monomials_of_weight(pspace, degree)
    if not candidates:
        if not target:
            return MultiPoly.zero(pspace)
        raise NotInvariantInSpan(f"no invariant monomials of degree {degree} exist")
    columns = []
    for exponent in candidates:
        composed = basis.reduce(expand_in_x(basis, MultiPoly.monomial(pspace, exponent)))
        columns.append(composed)
    row_monomials = set(target.terms())
    for column in columns:
        row_monomials.update(column.terms())
    rows = sorted(row_monomials)
    if not rows:
        return MultiPoly.zero(pspace)
    matrix = RationalMatrix.from_rows(
        [[column.coefficient(r) for column in columns] for r in rows]
    )
    rhs = [target.coefficient(r) for r in rows]
    solution, kernel = solve_linear(matrix, rhs)
    if solution is None:
        raise NotInvariantInSpan(f"{f} is not a polynomial in the basic invariants")
    if kernel:
        witness = MultiPoly(pspace, dict(zip(candidates, kernel[0])))
        raise RelationFound(witness)
    return MultiPoly(pspace, dict(zip(candidates, solution)))
