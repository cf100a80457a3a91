"""Construction and transformation of the gradient grammian matrix P.

``build_p_matrix`` forms the scalar products of the gradients of the basic
invariants and rewrites every entry as a polynomial in the invariants
themselves.  The result is a symmetric q x q matrix over the weighted p
space whose entry (a, b) is w-homogeneous of weight ``d_a + d_b - 2`` and
whose last column is forced to ``2 d_a p_a``.

A triangular change of basic invariants (here ``IbtSpec``) acts on P as a
contravariant tensor; ``apply_ibt`` performs the tensor transformation and
substitutes the exact symbolic inverse of the coordinate change so that the
result is again a function of the new coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .basisreg import (
    IntegrityBasis,
    NotInvariantInSpan,
    RelationFound,
    raise_if_invalid,
    rewrite_in_basis,
)
from .linalg import RationalMatrix, det as matrix_det
from .polyring import (
    MultiPoly,
    PolyMatrix,
    SpaceMismatch,
    VariableSpace,
    ParseError,
    p_space,
    parse_poly,
    poly_det,
)


class RewriteFailed(Exception):
    """A grammian entry could not be rewritten in the basic invariants.

    This signals a wrong or non-coregular basis; the offending entry and the
    underlying cause are attached.
    """

    def __init__(self, entry: tuple[int, int], cause: Exception):
        super().__init__(f"entry P[{entry[0] + 1}][{entry[1] + 1}] could not be rewritten: {cause}")
        self.entry = entry
        self.cause = cause


class BadIbt(Exception):
    """The proposed basis change is not triangular-invertible."""


class PMatrixFormatError(Exception):
    """Syntax error in the P-matrix serialization."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


@dataclass(frozen=True)
class PMatrix:
    """Symmetric matrix of w-homogeneous polynomials in the p variables."""

    degrees: tuple[int, ...]
    entries: tuple[tuple[MultiPoly, ...], ...]

    def __post_init__(self):
        q = len(self.degrees)
        if len(self.entries) != q or any(len(row) != q for row in self.entries):
            raise ValueError("entries must form a q x q array")
        space = self.entries[0][0].space
        if tuple(space.weights) != tuple(self.degrees):
            raise ValueError("the p space weights must equal the degrees")
        for row in self.entries:
            for e in row:
                if e.space != space:
                    raise SpaceMismatch("all entries must share the p space")

    @property
    def q(self) -> int:
        return len(self.degrees)

    @property
    def space(self) -> VariableSpace:
        return self.entries[0][0].space

    def entry(self, a: int, b: int) -> MultiPoly:
        return self.entries[a][b]

    def det(self) -> MultiPoly:
        return poly_det(PolyMatrix(self.entries))


@dataclass(frozen=True)
class GradingViolation:
    kind: str
    position: tuple[int, int]
    message: str


def _gradients(basis: IntegrityBasis) -> list[list[MultiPoly]]:
    return [
        [poly.differentiate(name) for name in basis.space.names]
        for poly in basis.polys
    ]


def _grammian_polys(basis: IntegrityBasis) -> list[list[MultiPoly]]:
    """Scalar products of gradients in the ambient variables.

    With a restriction present, gradients are projected onto the restriction
    hyperplane: the normal component (u . grad a)(u . grad b)/|u|^2 is
    subtracted, which is exactly the grammian an orthonormal chart of the
    hyperplane would produce.
    """
    grads = _gradients(basis)
    q = basis.q
    normal = None
    normal_norm = None
    if basis.restriction is not None:
        normal = [basis.restriction.coefficient(tuple(1 if j == i else 0 for j in range(basis.n)))
                  for i in range(basis.n)]
        normal_norm = sum(c * c for c in normal)
    out: list[list[MultiPoly]] = [[None] * q for _ in range(q)]  # type: ignore[list-item]
    for a in range(q):
        for b in range(a, q):
            dot = MultiPoly.zero(basis.space)
            for i in range(basis.n):
                dot = dot + grads[a][i] * grads[b][i]
            if normal is not None:
                na = MultiPoly.zero(basis.space)
                nb = MultiPoly.zero(basis.space)
                for i in range(basis.n):
                    if normal[i]:
                        na = na + grads[a][i] * normal[i]
                        nb = nb + grads[b][i] * normal[i]
                dot = dot - na * nb * Fraction(1, normal_norm)
            out[a][b] = dot
            out[b][a] = dot
    return out


def build_p_matrix(basis: IntegrityBasis) -> PMatrix:
    """The grammian of the basic invariants, written in the invariants.

    The ambient grammian is transient: the object of record is the matrix
    over the p space.  Fails loudly (RewriteFailed) when an entry is not
    expressible, which certifies a wrong or non-coregular basis.
    """
    raise_if_invalid(basis)
    raw = _grammian_polys(basis)
    q = basis.q
    rewritten: list[list[MultiPoly]] = [[None] * q for _ in range(q)]  # type: ignore[list-item]
    for a in range(q):
        for b in range(a, q):
            try:
                value = rewrite_in_basis(basis, raw[a][b])
            except (NotInvariantInSpan, RelationFound) as cause:
                raise RewriteFailed((a, b), cause) from cause
            rewritten[a][b] = value
            rewritten[b][a] = value
    return PMatrix(basis.degrees, tuple(tuple(row) for row in rewritten))


def gradient_grammian_at(basis: IntegrityBasis, x) -> RationalMatrix:
    """Numeric grammian of the invariant gradients at a rational point.

    Used as the independent cross-check of ``build_p_matrix``: evaluating
    the built matrix at the orbit-map image of x must reproduce this matrix
    entry for entry, exactly.
    """
    point = [Fraction(v) for v in x]
    grads = _gradients(basis)
    values = [[g.evaluate(point) for g in row] for row in grads]
    normal = None
    normal_norm = None
    if basis.restriction is not None:
        if basis.restriction.evaluate(point) != 0:
            raise ValueError("point does not satisfy the restriction")
        normal = [basis.restriction.coefficient(tuple(1 if j == i else 0 for j in range(basis.n)))
                  for i in range(basis.n)]
        normal_norm = sum(c * c for c in normal)
    q = basis.q
    rows = [[Fraction(0)] * q for _ in range(q)]
    for a in range(q):
        for b in range(a, q):
            dot = sum(va * vb for va, vb in zip(values[a], values[b]))
            if normal is not None:
                na = sum(v * c for v, c in zip(values[a], normal))
                nb = sum(v * c for v, c in zip(values[b], normal))
                dot -= na * nb / normal_norm
            rows[a][b] = rows[b][a] = dot
    return RationalMatrix.from_rows(rows)


def grading_check(p: PMatrix) -> list[GradingViolation]:
    """Symmetry, entry weights, and the forced last column; empty = pass."""
    violations: list[GradingViolation] = []
    q = p.q
    for a in range(q):
        for b in range(a, q):
            if p.entries[a][b] != p.entries[b][a]:
                violations.append(GradingViolation("NotSymmetric", (a, b), "entries (a,b) and (b,a) differ"))
            entry = p.entries[a][b]
            expected = p.degrees[a] + p.degrees[b] - 2
            if entry:
                w = entry.weight()
                if w != expected:
                    violations.append(
                        GradingViolation(
                            "WrongWeight",
                            (a, b),
                            f"entry has weight {w}, expected {expected}",
                        )
                    )
    for a in range(q):
        expected = MultiPoly.variable(p.space, p.space.names[a]) * (2 * p.degrees[a])
        if p.entries[a][q - 1] != expected:
            violations.append(
                GradingViolation(
                    "LastColumnLaw",
                    (a, q - 1),
                    f"entry must equal {expected}",
                )
            )
    return violations


def evaluate_p(p: PMatrix, point) -> RationalMatrix:
    """Exact value of P at a rational point of the p space."""
    values = [Fraction(v) for v in point]
    if len(values) != p.q:
        raise ValueError(f"point has arity {len(values)}, expected {p.q}")
    return RationalMatrix.from_rows(
        [[entry.evaluate(values) for entry in row] for row in p.entries]
    )


# -- triangular changes of basic invariants -----------------------------------


@dataclass(frozen=True)
class IbtSpec:
    """A triangular polynomial change of the basic invariants.

    ``maps[i]`` is the new invariant p'_{i+1} expressed in the old
    coordinates; it must be w-homogeneous of weight d_{i+1}.  Because the
    weights are positive and sorted, the Jacobian is automatically upper
    triangular with constant diagonal blocks on equal-degree runs; those
    blocks must be invertible.  The last-column law of a transformed matrix
    survives exactly when the new last invariant is the old one.
    """

    space: VariableSpace
    maps: tuple[MultiPoly, ...]

    def __post_init__(self):
        q = self.space.arity
        if len(self.maps) != q:
            raise BadIbt(f"expected {q} coordinate maps, got {len(self.maps)}")
        for i, m in enumerate(self.maps):
            if m.space != self.space:
                raise BadIbt("maps must live in the p space")
            if not m:
                raise BadIbt(f"map {i + 1} is zero")
            if m.weight() != self.space.weights[i]:
                raise BadIbt(
                    f"map {i + 1} must be w-homogeneous of weight {self.space.weights[i]}"
                )
        for block in _degree_blocks(self.space.weights):
            matrix = RationalMatrix.from_rows(
                [[self._linear_coefficient(i, j) for j in block] for i in block]
            )
            if matrix_det(matrix) == 0:
                raise BadIbt(f"diagonal block on coordinates {tuple(b + 1 for b in block)} is singular")

    def _linear_coefficient(self, i: int, j: int) -> Fraction:
        unit = tuple(1 if k == j else 0 for k in range(self.space.arity))
        return self.maps[i].coefficient(unit)

    def jacobian(self) -> tuple[tuple[MultiPoly, ...], ...]:
        names = self.space.names
        return tuple(tuple(m.differentiate(n) for n in names) for m in self.maps)

    def determinant(self) -> Fraction:
        """Constant determinant of the Jacobian."""
        jac = self.jacobian()
        d = poly_det(PolyMatrix(jac))
        return d.constant_value()

    def inverse_maps(self) -> tuple[MultiPoly, ...]:
        """Old coordinates as polynomials in the new ones.

        Solved by back-substitution through the degree blocks in increasing
        weight order; the positive grading guarantees termination.
        """
        space = self.space
        q = space.arity
        inverse: dict[int, MultiPoly] = {}
        blocks = sorted(_degree_blocks(space.weights), key=lambda b: space.weights[b[0]])
        for block in blocks:
            matrix = RationalMatrix.from_rows(
                [[self._linear_coefficient(i, j) for j in block] for i in block]
            )
            inv = _invert_matrix(matrix)
            residuals = []
            for i in block:
                linear = MultiPoly.zero(space)
                for j in block:
                    c = self._linear_coefficient(i, j)
                    if c:
                        linear = linear + MultiPoly.variable(space, space.names[j]) * c
                tail = self.maps[i] - linear
                if tail:
                    tail = tail.substitute({space.names[k]: poly for k, poly in inverse.items()})
                residuals.append(MultiPoly.variable(space, space.names[i]) - tail)
            for row, j in enumerate(block):
                expr = MultiPoly.zero(space)
                for col, i in enumerate(block):
                    c = inv.entries[row][col]
                    if c:
                        expr = expr + residuals[col] * c
                inverse[j] = expr
        return tuple(inverse[i] for i in range(q))


def _degree_blocks(weights) -> list[list[int]]:
    blocks: list[list[int]] = []
    for i, w in enumerate(weights):
        if blocks and weights[blocks[-1][0]] == w:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def _invert_matrix(matrix: RationalMatrix) -> RationalMatrix:
    n = matrix.rows
    augmented = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
                 for i, row in enumerate(matrix.entries)]
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if augmented[i][c]), None)
        if pivot_row is None:
            raise BadIbt("singular block in basis change")
        augmented[c], augmented[pivot_row] = augmented[pivot_row], augmented[c]
        pivot = augmented[c][c]
        augmented[c] = [v / pivot for v in augmented[c]]
        for i in range(n):
            if i != c and augmented[i][c]:
                f = augmented[i][c]
                augmented[i] = [a - f * b for a, b in zip(augmented[i], augmented[c])]
    return RationalMatrix.from_rows([row[n:] for row in augmented])


def identity_ibt(space: VariableSpace) -> IbtSpec:
    return IbtSpec(space, tuple(MultiPoly.variable(space, n) for n in space.names))


def invert_ibt(ibt: IbtSpec) -> IbtSpec:
    return IbtSpec(ibt.space, ibt.inverse_maps())


def apply_ibt(p: PMatrix, ibt: IbtSpec) -> PMatrix:
    """Contravariant tensor transform, expressed in the new coordinates.

    P'_{ab} = J_{ai} J_{bj} P_{ij} followed by substitution of the exact
    inverse coordinate change, so the result is a function of the new p.
    """
    if ibt.space != p.space:
        raise BadIbt("basis change must live in the matrix's p space")
    jac = ibt.jacobian()
    q = p.q
    transformed: list[list[MultiPoly]] = [[None] * q for _ in range(q)]  # type: ignore[list-item]
    for a in range(q):
        for b in range(a, q):
            total = MultiPoly.zero(p.space)
            for i in range(q):
                if not jac[a][i]:
                    continue
                for j in range(q):
                    if not jac[b][j] or not p.entries[i][j]:
                        continue
                    total = total + jac[a][i] * jac[b][j] * p.entries[i][j]
            transformed[a][b] = total
            transformed[b][a] = total
    inverse = ibt.inverse_maps()
    substitution = {p.space.names[i]: inverse[i] for i in range(q)}
    final = tuple(
        tuple(entry.substitute(substitution) for entry in row) for row in transformed
    )
    return PMatrix(p.degrees, final)


def transport_poly(ibt: IbtSpec, f: MultiPoly) -> MultiPoly:
    """A polynomial of the old coordinates, expressed in the new ones."""
    inverse = ibt.inverse_maps()
    return f.substitute({ibt.space.names[i]: inverse[i] for i in range(ibt.space.arity)})


# -- serialization -------------------------------------------------------------


def format_p_matrix(p: PMatrix) -> str:
    lines = [
        f"q: {p.q}",
        "degrees: " + " ".join(str(d) for d in p.degrees),
    ]
    for a in range(p.q):
        for b in range(a, p.q):
            lines.append(f"P[{a + 1}][{b + 1}]: {p.entries[a][b]}")
    return "\n".join(lines) + "\n"


def parse_p_matrix(text: str) -> PMatrix:
    """Parse the serialization produced by format_p_matrix (bit-exact round trip)."""
    q: int | None = None
    degrees: tuple[int, ...] | None = None
    entry_lines: list[tuple[int, int, str, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise PMatrixFormatError(f"expected 'key: value', got {line!r}", line_no)
        key, value = line.split(":", 1)
        key = key.strip()
        value = value.strip()
        if key == "q":
            q = int(value)
        elif key == "degrees":
            degrees = tuple(int(v) for v in value.split())
        elif key.startswith("P[") and key.endswith("]"):
            try:
                a_text, b_text = key[2:-1].split("][")
                a, b = int(a_text), int(b_text)
            except ValueError:
                raise PMatrixFormatError(f"bad entry key {key!r}", line_no) from None
            entry_lines.append((a, b, value, line_no))
        else:
            raise PMatrixFormatError(f"unknown key {key!r}", line_no)
    if q is None or degrees is None:
        raise PMatrixFormatError("missing q or degrees", 0)
    if len(degrees) != q:
        raise PMatrixFormatError(f"degrees lists {len(degrees)} values but q = {q}", 0)
    space = p_space(degrees)
    entries: list[list[MultiPoly | None]] = [[None] * q for _ in range(q)]
    for a, b, value, line_no in entry_lines:
        if not (1 <= a <= b <= q):
            raise PMatrixFormatError(f"entry P[{a}][{b}] out of range (need a <= b)", line_no)
        try:
            poly = parse_poly(value, space)
        except ParseError as err:
            raise PMatrixFormatError(f"bad polynomial: {err}", line_no) from None
        entries[a - 1][b - 1] = poly
        entries[b - 1][a - 1] = poly
    for a in range(q):
        for b in range(q):
            if entries[a][b] is None:
                raise PMatrixFormatError(f"missing entry P[{min(a, b) + 1}][{max(a, b) + 1}]", 0)
    return PMatrix(degrees, tuple(tuple(row) for row in entries))  # type: ignore[arg-type]
