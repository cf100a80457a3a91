"""Exact dense linear algebra over the rationals for small matrices.

Elimination uses the first nonzero entry in row order as pivot (no
magnitude pivoting -- there is no roundoff to manage), so echelon forms,
ranks and nullspace bases are deterministic.  Nullspace vectors are
normalized to coprime integer entries with the first nonzero entry
positive, which removes all scale ambiguity from solution reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


class NotSymmetric(Exception):
    """A symmetric matrix was required."""


def _frac_rows(rows: Iterable[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


@dataclass(frozen=True)
class RationalMatrix:
    """An immutable rectangular matrix of exact rationals."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty matrix")
        width = len(self.entries[0])
        if width == 0 or any(len(row) != width for row in self.entries):
            raise ValueError("matrix must be rectangular and nonempty")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> "RationalMatrix":
        return cls(_frac_rows(rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries)))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        cols = other.transpose().entries
        return RationalMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            )
        )

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place forward elimination; returns (rows, pivot column list)."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][c]
        rows[r] = [v / pivot for v in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows, pivots


def rank(matrix: RationalMatrix) -> int:
    rows = [list(row) for row in matrix.entries]
    _, pivots = _echelon(rows)
    return len(pivots)


def normalize_vector(vector: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    fracs = [Fraction(v) for v in vector]
    if all(v == 0 for v in fracs):
        return tuple(0 for _ in fracs)
    denom = lcm(*[v.denominator for v in fracs])
    ints = [int(v * denom) for v in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    ints = [v // g for v in ints]
    first = next(v for v in ints if v)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def nullspace(matrix: RationalMatrix) -> list[tuple[int, ...]]:
    """Normalized basis of {v : Mv = 0}; one vector per free column,
    ordered by free column index."""
    rows = [list(row) for row in matrix.entries]
    reduced, pivots = _echelon(rows)
    n_cols = matrix.cols
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][f]
        basis.append(normalize_vector(v))
    return basis


def solve_linear(matrix: RationalMatrix, rhs: Sequence) -> tuple[tuple[Fraction, ...] | None, list[tuple[int, ...]]]:
    """Solve Mx = b exactly.

    Returns (particular solution or None when inconsistent, normalized
    nullspace basis).  A unique solution is the pair (solution, []).
    """
    b = [Fraction(v) for v in rhs]
    if len(b) != matrix.rows:
        raise ValueError("right-hand side length does not match")
    rows = [list(row) + [bv] for row, bv in zip(matrix.entries, b)]
    reduced, pivots = _echelon(rows)
    n_cols = matrix.cols
    if n_cols in pivots:
        return None, nullspace(matrix)
    solution = [Fraction(0)] * n_cols
    for r, pc in enumerate(pivots):
        solution[pc] = reduced[r][n_cols]
    return tuple(solution), nullspace(matrix)


def det(matrix: RationalMatrix) -> Fraction:
    """Exact determinant via fraction-free-style elimination."""
    if not matrix.is_square():
        raise ValueError("determinant needs a square matrix")
    n = matrix.rows
    rows = [list(row) for row in matrix.entries]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            sign = -sign
        pivot = rows[c][c]
        result *= pivot
        for i in range(c + 1, n):
            if rows[i][c]:
                factor = rows[i][c] / pivot
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[c])]
    return result * sign


def principal_minor(matrix: RationalMatrix, indices: Sequence[int]) -> Fraction:
    """Determinant of the principal submatrix on the given index set."""
    sub = RationalMatrix(
        tuple(tuple(matrix.entries[i][j] for j in indices) for i in indices)
    )
    return det(sub)
