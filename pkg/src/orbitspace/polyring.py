"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a finite map from exponent vectors to nonzero Fraction
coefficients, attached to a :class:`VariableSpace` that fixes the variable
names and their positive integer weights.  An ordinary degree-graded space
uses weight 1 for every variable; the coordinate space of an orbit map uses
the degrees of the basic invariants as weights, so that "degree" of a
polynomial in those coordinates means its weighted degree.

Everything here is exact: coefficients are arbitrary-precision rationals and
there are no floats anywhere.  All values are immutable after construction
and all operations are pure functions, so they are safe to evaluate
concurrently and results never depend on scheduling.

The text grammar accepted by :func:`parse_poly` (and emitted, in canonical
form, by ``str()``) is: integer literals, rational literals ``a/b``,
variable identifiers, ``+ - * ^ ( )``.  ``^`` takes a nonnegative integer
exponent and multiplication must be written explicitly (no juxtaposition).
Printing is deterministic -- terms are ordered by graded lexicographic order,
largest first -- and ``parse_poly(str(f))`` reproduces ``f`` bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

Exponent = tuple[int, ...]


class SpaceMismatch(Exception):
    """Operands are attached to different variable spaces."""


class UnknownVariable(Exception):
    """A variable name does not belong to the space at hand."""


class ArityMismatch(Exception):
    """A point or exponent vector has the wrong number of entries."""


class ZeroPolynomial(Exception):
    """The zero polynomial was used where its weight would be needed."""


class ZeroDivisor(Exception):
    """Division by the zero polynomial."""


class ParseError(Exception):
    """Syntax error in the polynomial grammar, with source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("floats are not exact; use Fraction or int")
    return Fraction(value)


@dataclass(frozen=True)
class VariableSpace:
    """An ordered tuple of variable names with positive integer weights."""

    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("a variable space needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if len(self.weights) != len(self.names):
            raise ValueError("one weight per variable is required")
        for w in self.weights:
            if not isinstance(w, int) or w < 1:
                raise ValueError(f"weights must be positive integers, got {w}")

    @classmethod
    def unit(cls, names: Sequence[str]) -> "VariableSpace":
        """Space with all weights 1 (plain total-degree grading)."""
        return cls(tuple(names), (1,) * len(tuple(names)))

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a variable of {self.names}") from None

    def exponent_weight(self, exponent: Exponent) -> int:
        """Weighted degree sum(e_i * w_i) of a single exponent vector."""
        if len(exponent) != self.arity:
            raise ArityMismatch(f"exponent {exponent} has arity {len(exponent)}, expected {self.arity}")
        return sum(e * w for e, w in zip(exponent, self.weights))


def p_space(degrees: Sequence[int]) -> VariableSpace:
    """Coordinate space p1..pq carrying the invariant degrees as weights."""
    degs = tuple(int(d) for d in degrees)
    names = tuple(f"p{i + 1}" for i in range(len(degs)))
    return VariableSpace(names, degs)


def _grlex_key(exponent: Exponent) -> tuple[int, Exponent]:
    return (sum(exponent), exponent)


class MultiPoly:
    """A sparse polynomial with exact rational coefficients.

    Terms are stored canonically: no zero coefficients, every exponent
    vector has the space's arity.  Two polynomials are equal iff their term
    maps are equal.  Treat instances as immutable.
    """

    __slots__ = ("space", "_terms")

    def __init__(self, space: VariableSpace, terms: Mapping[Exponent, Fraction | int]):
        clean: dict[Exponent, Fraction] = {}
        arity = space.arity
        for exponent, coeff in terms.items():
            c = _as_fraction(coeff)
            if not c:
                continue
            e = tuple(exponent)
            if len(e) != arity:
                raise ArityMismatch(f"exponent {e} has arity {len(e)}, expected {arity}")
            if any(not isinstance(v, int) or v < 0 for v in e):
                raise ValueError(f"exponents must be nonnegative integers, got {e}")
            clean[e] = c
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "_terms", clean)

    @classmethod
    def _make(cls, space: VariableSpace, terms: dict[Exponent, Fraction]) -> "MultiPoly":
        # Internal fast path: terms already canonical.
        poly = object.__new__(cls)
        object.__setattr__(poly, "space", space)
        object.__setattr__(poly, "_terms", terms)
        return poly

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, space: VariableSpace) -> "MultiPoly":
        return cls._make(space, {})

    @classmethod
    def constant(cls, space: VariableSpace, value) -> "MultiPoly":
        c = _as_fraction(value)
        if not c:
            return cls.zero(space)
        return cls._make(space, {(0,) * space.arity: c})

    @classmethod
    def variable(cls, space: VariableSpace, name: str) -> "MultiPoly":
        i = space.index(name)
        exp = [0] * space.arity
        exp[i] = 1
        return cls._make(space, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, space: VariableSpace, exponent: Exponent, coeff=1) -> "MultiPoly":
        return cls(space, {tuple(exponent): coeff})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> dict[Exponent, Fraction]:
        """A copy of the term map."""
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in canonical order (graded lexicographic, largest first)."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def num_terms(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self._terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial.

        Raises ValueError when the polynomial actually depends on a variable.
        """
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self._terms.values()))

    def total_degree(self) -> int:
        """Largest plain (unweighted) degree among the terms; 0 for the zero polynomial."""
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def weight(self) -> int | None:
        """Weighted degree if the polynomial is w-homogeneous, else None.

        The zero polynomial has no weight by convention and raises
        ZeroPolynomial; callers must branch before asking.
        """
        if not self._terms:
            raise ZeroPolynomial("the zero polynomial has undefined weight")
        weights = {self.space.exponent_weight(e) for e in self._terms}
        if len(weights) == 1:
            return weights.pop()
        return None

    def weight_components(self) -> dict[int, "MultiPoly"]:
        """Split into w-homogeneous components, keyed by weight."""
        buckets: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self._terms.items():
            buckets.setdefault(self.space.exponent_weight(e), {})[e] = c
        return {w: MultiPoly._make(self.space, t) for w, t in sorted(buckets.items())}

    # -- ring operations ----------------------------------------------------

    def _check_space(self, other: "MultiPoly"):
        if self.space != other.space:
            raise SpaceMismatch(f"cannot combine polynomials over {self.space.names} and {other.space.names}")

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            self._check_space(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.space, other)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in rhs._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._make(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._make(self.space, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if not self._terms or not rhs._terms:
            return MultiPoly.zero(self.space)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in rhs._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, Fraction(0)) + ca * cb
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._make(self.space, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"polynomial powers take nonnegative integers, got {exponent!r}")
        result = MultiPoly.constant(self.space, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.space == other.space and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == MultiPoly.constant(self.space, other)._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.space, frozenset(self._terms.items())))

    # -- calculus and evaluation --------------------------------------------

    def differentiate(self, var: str) -> "MultiPoly":
        """Formal partial derivative with respect to one variable."""
        i = self.space.index(var)
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            if e[i] == 0:
                continue
            d = list(e)
            d[i] -= 1
            out[tuple(d)] = c * e[i]
        return MultiPoly._make(self.space, out)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point (one value per variable, in order)."""
        values = [_as_fraction(v) for v in point]
        if len(values) != self.space.arity:
            raise ArityMismatch(f"point has arity {len(values)}, expected {self.space.arity}")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for exp, v in zip(e, values):
                if exp:
                    term *= v**exp
            total += term
        return total

    def substitute(self, values: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Simultaneous substitution of polynomials for variables.

        With a value for every variable this is composition into the common
        space of the values.  A partial substitution keeps the remaining
        variables fixed, which requires the values to live in this
        polynomial's own space.
        """
        if not values:
            return self
        spaces = {v.space for v in values.values()}
        if len(spaces) != 1:
            raise SpaceMismatch("substitution values must share one variable space")
        target = spaces.pop()
        indices = {self.space.index(name): poly for name, poly in values.items()}
        if len(indices) < self.space.arity:
            if target != self.space:
                raise SpaceMismatch("partial substitution requires values in the same space")
            for i in range(self.space.arity):
                if i not in indices:
                    indices[i] = MultiPoly.variable(self.space, self.space.names[i])
        power_cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, n: int) -> MultiPoly:
            key = (i, n)
            if key not in power_cache:
                power_cache[key] = indices[i] ** n
            return power_cache[key]

        total = MultiPoly.zero(target)
        for e, c in self._terms.items():
            term = MultiPoly.constant(target, c)
            for i, exp in enumerate(e):
                if exp:
                    term = term * power(i, exp)
            total = total + term
        return total

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"


def monomials_of_weight(space: VariableSpace, weight: int) -> list[Exponent]:
    """All exponent vectors of the given weighted degree, in ascending
    lexicographic order.

    This is the search space for an unknown w-homogeneous polynomial of that
    weight; the order is deterministic so downstream linear systems are too.
    """
    if weight < 0:
        raise ValueError("weight must be nonnegative")
    out: list[Exponent] = []
    arity = space.arity

    def recurse(i: int, remaining: int, prefix: list[int]):
        if i == arity - 1:
            w = space.weights[i]
            if remaining % w == 0:
                out.append(tuple(prefix + [remaining // w]))
            return
        w = space.weights[i]
        for e in range(remaining // w + 1):
            recurse(i + 1, remaining - e * w, prefix + [e])

    recurse(0, weight, [])
    return out


def _leading(poly: MultiPoly) -> tuple[Exponent, Fraction]:
    exp = max(poly._terms, key=_grlex_key)
    return exp, poly._terms[exp]


def exact_divide(f: MultiPoly, g: MultiPoly) -> MultiPoly | None:
    """Quotient q with q*g == f exactly, or None when g does not divide f.

    Single-divisor multivariate division under the graded lexicographic
    order: divisibility of the remainder by g is invariant at every step,
    so the first leading term that g's leading term cannot cancel proves f
    indivisible.
    """
    if f.space != g.space:
        raise SpaceMismatch("dividend and divisor must share a space")
    if not g:
        raise ZeroDivisor("division by the zero polynomial")
    if not f:
        return MultiPoly.zero(f.space)
    g_exp, g_coeff = _leading(g)
    quotient: dict[Exponent, Fraction] = {}
    remainder = f
    while remainder:
        r_exp, r_coeff = _leading(remainder)
        step = tuple(a - b for a, b in zip(r_exp, g_exp))
        if any(s < 0 for s in step):
            return None
        c = r_coeff / g_coeff
        quotient[step] = c
        remainder = remainder - MultiPoly.monomial(f.space, step, c) * g
    return MultiPoly._make(f.space, quotient)


@dataclass(frozen=True)
class PolyMatrix:
    """A square matrix of polynomials over one shared variable space."""

    entries: tuple[tuple[MultiPoly, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0:
            raise ValueError("empty matrix")
        spaces = set()
        for row in self.entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            for p in row:
                spaces.add(p.space)
        if len(spaces) != 1:
            raise SpaceMismatch("all entries must share one variable space")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def space(self) -> VariableSpace:
        return self.entries[0][0].space


def poly_det(matrix: PolyMatrix) -> MultiPoly:
    """Exact determinant of a polynomial matrix.

    Cofactor expansion organised as dynamic programming over column subsets
    (no divisions, no pivoting), fine for the small sizes used here.
    """
    n = matrix.size
    space = matrix.space
    entries = matrix.entries
    # minors[mask] = determinant of rows 0..k-1 and the k columns in mask
    minors: dict[int, MultiPoly] = {0: MultiPoly.constant(space, 1)}
    for row in range(n):
        nxt: dict[int, MultiPoly] = {}
        for mask, minor in minors.items():
            if not minor:
                continue
            position = 0
            for col in range(n):
                bit = 1 << col
                if mask & bit:
                    position += 1
                    continue
                entry = entries[row][col]
                if entry:
                    term = minor * entry
                    if (row + position) % 2:
                        term = -term
                    new_mask = mask | bit
                    acc = nxt.get(new_mask)
                    nxt[new_mask] = term if acc is None else acc + term
        minors = nxt
        if not minors:
            return MultiPoly.zero(space)
    full = (1 << n) - 1
    return minors.get(full, MultiPoly.zero(space))


# -- text format -------------------------------------------------------------


def format_poly(poly: MultiPoly) -> str:
    """Canonical text form; round-trips bit-exactly through parse_poly."""
    if not poly:
        return "0"
    pieces: list[str] = []
    for index, (exponent, coeff) in enumerate(poly.sorted_terms()):
        factors = []
        for name, e in zip(poly.space.names, exponent):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        magnitude = abs(coeff)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = str(magnitude) + "*" + "*".join(factors)
        if index == 0:
            pieces.append(body if coeff > 0 else "-" + body)
        else:
            pieces.append((" + " if coeff > 0 else " - ") + body)
    return "".join(pieces)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[tuple[str, str, int, int]] = []
        self._scan()

    def _scan(self):
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == "\n":
                self.pos += 1
                self.line += 1
                self.col = 1
                continue
            if ch in " \t\r":
                self.pos += 1
                self.col += 1
                continue
            if ch.isdigit():
                start = self.pos
                start_col = self.col
                while self.pos < len(text) and text[self.pos].isdigit():
                    self.pos += 1
                    self.col += 1
                self.tokens.append(("int", text[start:self.pos], self.line, start_col))
                continue
            if ch.isalpha() or ch == "_":
                start = self.pos
                start_col = self.col
                while self.pos < len(text) and (text[self.pos].isalnum() or text[self.pos] == "_"):
                    self.pos += 1
                    self.col += 1
                self.tokens.append(("ident", text[start:self.pos], self.line, start_col))
                continue
            if ch in "+-*^()/":
                self.tokens.append((ch, ch, self.line, self.col))
                self.pos += 1
                self.col += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", self.line, self.col)
        self.tokens.append(("end", "", self.line, self.col))


class _Parser:
    """Recursive-descent parser for the polynomial grammar."""

    def __init__(self, text: str, space: VariableSpace):
        self.tokens = _Lexer(text).tokens
        self.index = 0
        self.space = space

    def _peek(self):
        return self.tokens[self.index]

    def _next(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _expect(self, kind: str):
        token = self._next()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r}, found {token[1]!r}", token[2], token[3])
        return token

    def parse(self) -> MultiPoly:
        poly = self._expression()
        token = self._peek()
        if token[0] != "end":
            raise ParseError(f"unexpected trailing input {token[1]!r}", token[2], token[3])
        return poly

    def _expression(self) -> MultiPoly:
        sign = 1
        if self._peek()[0] in "+-":
            sign = -1 if self._next()[0] == "-" else 1
        total = self._term() * sign
        while self._peek()[0] in "+-":
            op = self._next()[0]
            term = self._term()
            total = total + term if op == "+" else total - term
        return total

    def _term(self) -> MultiPoly:
        product = self._factor()
        while self._peek()[0] == "*":
            self._next()
            product = product * self._factor()
        return product

    def _factor(self) -> MultiPoly:
        token = self._next()
        kind, value, line, col = token
        if kind == "int":
            numerator = int(value)
            if self._peek()[0] == "/":
                self._next()
                den_token = self._expect("int")
                denominator = int(den_token[1])
                if denominator == 0:
                    raise ParseError("zero denominator", den_token[2], den_token[3])
                return MultiPoly.constant(self.space, Fraction(numerator, denominator))
            return MultiPoly.constant(self.space, numerator)
        if kind == "ident":
            try:
                base = MultiPoly.variable(self.space, value)
            except UnknownVariable:
                raise ParseError(f"unknown variable {value!r}", line, col) from None
            return self._maybe_power(base)
        if kind == "(":
            inner = self._expression()
            self._expect(")")
            return self._maybe_power(inner)
        raise ParseError(f"expected a number, variable or '(', found {value!r}", line, col)

    def _maybe_power(self, base: MultiPoly) -> MultiPoly:
        if self._peek()[0] == "^":
            self._next()
            exp_token = self._expect("int")
            return base ** int(exp_token[1])
        return base


def parse_poly(text: str, space: VariableSpace) -> MultiPoly:
    """Parse an expression in the polynomial grammar over the given space."""
    return _Parser(text, space).parse()
