"""The algebra of n-by-n upper-triangular matrices over an exact ring.

Elements are stored sparsely: a map from basis indices ``(i, j)`` (1-based,
``i <= j``) to coefficients, with absent keys meaning zero.  Coefficients are
either ``Fraction`` scalars or :class:`~rbu3.poly.MultiPoly` values; the two
mix freely inside one matrix as long as every polynomial shares one variable
table.

Multiplication follows the matrix-unit structure constants
``e_ij * e_kl = delta_jk * e_il``, so products of upper-triangular matrices
stay upper-triangular.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import MultiPoly, ParseError, VarTable, _tokenize

__all__ = [
    "BasisIndex",
    "IncompatibleOperands",
    "UTMatrix",
    "basis_indices",
    "basis_name",
    "name_to_index",
    "parse_matrix",
    "exact_rank",
    "solve_exact",
    "generic_rank",
]

BasisIndex = tuple  # (row, col) with 1 <= row <= col <= n


class IncompatibleOperands(ValueError):
    pass


def basis_indices(n: int) -> list:
    """Canonical ordered basis: (1,1) < (1,2) < ... < (n,n), row-major."""
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def basis_name(index: BasisIndex) -> str:
    i, j = index
    return f"e{i}{j}"


def name_to_index(name: str, n: int) -> BasisIndex:
    if len(name) == 3 and name[0] == "e" and name[1].isdigit() and name[2].isdigit():
        i, j = int(name[1]), int(name[2])
        if 1 <= i <= j <= n:
            return (i, j)
    raise ValueError(f"not a basis element of U_{n}: {name!r}")


def _is_zero(value) -> bool:
    return not value


class UTMatrix:
    """An element of the upper-triangular matrix algebra U_n."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries=None):
        if n < 1:
            raise ValueError("algebra size must be at least 1")
        self.n = n
        clean = {}
        if entries:
            for (i, j), value in entries.items():
                if not (1 <= i <= j <= n):
                    raise ValueError(f"index ({i},{j}) outside the upper triangle")
                if not _is_zero(value):
                    clean[(i, j)] = value
        self.entries = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "UTMatrix":
        return UTMatrix(n)

    @staticmethod
    def unit(n: int) -> "UTMatrix":
        """The identity matrix, the unit of U_n."""
        return UTMatrix(n, {(i, i): Fraction(1) for i in range(1, n + 1)})

    @staticmethod
    def basis(n: int, i: int, j: int) -> "UTMatrix":
        return UTMatrix(n, {(i, j): Fraction(1)})

    # -- structure ----------------------------------------------------------

    def entry(self, i: int, j: int):
        return self.entries.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def is_strictly_upper(self) -> bool:
        return all(i != j for (i, j) in self.entries)

    def trace(self):
        total = Fraction(0)
        for i in range(1, self.n + 1):
            value = self.entries.get((i, i))
            if value is not None:
                total = value + total
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, UTMatrix):
            return NotImplemented
        if self.n != other.n:
            return False
        keys = set(self.entries) | set(other.entries)
        return all(self.entry(i, j) == other.entry(i, j) for (i, j) in keys)

    def __hash__(self):
        raise TypeError("UTMatrix is not hashable")

    # -- vector space operations --------------------------------------------

    def _check(self, other: "UTMatrix"):
        if not isinstance(other, UTMatrix) or self.n != other.n:
            raise IncompatibleOperands("incompatible operands")

    def __add__(self, other: "UTMatrix") -> "UTMatrix":
        self._check(other)
        entries = dict(self.entries)
        for key, value in other.entries.items():
            if key in entries:
                entries[key] = entries[key] + value
            else:
                entries[key] = value
        return UTMatrix(self.n, entries)

    def __sub__(self, other: "UTMatrix") -> "UTMatrix":
        self._check(other)
        return self + (-other)

    def __neg__(self) -> "UTMatrix":
        return UTMatrix(self.n, {k: -v for k, v in self.entries.items()})

    def scale(self, scalar) -> "UTMatrix":
        if _is_zero(scalar):
            return UTMatrix(self.n)
        return UTMatrix(self.n, {k: scalar * v for k, v in self.entries.items()})

    def __rmul__(self, scalar) -> "UTMatrix":
        if isinstance(scalar, (int, Fraction, MultiPoly)):
            return self.scale(scalar)
        return NotImplemented

    # -- algebra multiplication ----------------------------------------------

    def __mul__(self, other: "UTMatrix") -> "UTMatrix":
        """Exact product via e_ij * e_kl = delta_jk * e_il."""
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self.scale(other)
        self._check(other)
        entries = {}
        for (i, j), x in self.entries.items():
            for (k, l), y in other.entries.items():
                if j != k:
                    continue
                key = (i, l)
                acc = entries.get(key)
                entries[key] = x * y if acc is None else acc + x * y
        return UTMatrix(self.n, entries)

    def power(self, k: int) -> "UTMatrix":
        if k < 1:
            raise ValueError("power must be positive")
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    # -- predicates ----------------------------------------------------------

    def nilpotency_degree(self):
        """Least k >= 1 with a^k = 0, or None when a^n != 0.

        For polynomial entries this asks that each power vanish identically.
        """
        if self.is_zero():
            return 1
        current = self
        for k in range(2, self.n + 1):
            current = current * self
            if current.is_zero():
                return k
        return None

    def is_idempotent(self) -> bool:
        return self * self == self

    def rank(self) -> int:
        """Rank by exact Gaussian elimination (rational entries only)."""
        rows = []
        for i in range(1, self.n + 1):
            row = []
            for j in range(1, self.n + 1):
                value = self.entries.get((i, j), Fraction(0)) if i <= j else Fraction(0)
                if isinstance(value, MultiPoly):
                    raise TypeError("rank needs rational entries; "
                                    "use generic_rank for polynomial matrices")
                row.append(Fraction(value))
            rows.append(row)
        return exact_rank(rows)

    # -- coordinates -----------------------------------------------------------

    def to_vector(self) -> list:
        return [self.entries.get(idx, Fraction(0)) for idx in basis_indices(self.n)]

    @staticmethod
    def from_vector(n: int, coords: Sequence) -> "UTMatrix":
        idxs = basis_indices(n)
        if len(coords) != len(idxs):
            raise ValueError("coordinate vector has the wrong length")
        return UTMatrix(n, dict(zip(idxs, coords)))

    # -- printing ----------------------------------------------------------------

    def to_str(self) -> str:
        """Sum-of-terms literal, e.g. ``"e12 + 2*e23 - 1/3*e13"``.

        Polynomial coefficients are flattened one monomial per term so the
        output stays inside the literal grammar and round-trips.
        """
        if not self.entries:
            return "0"
        parts = []
        for idx in basis_indices(self.n):
            value = self.entries.get(idx)
            if value is None:
                continue
            name = basis_name(idx)
            if isinstance(value, MultiPoly):
                pieces = _poly_terms_for_matrix(value)
            else:
                pieces = [(value, "")]
            for coeff, body in pieces:
                mag = abs(coeff)
                text = name if not body else f"{body}*{name}"
                if mag != 1:
                    text = f"{mag}*{text}"
                parts.append(("-" if coeff < 0 else "+", text))
        sign, text = parts[0]
        out = ("-" if sign == "-" else "") + text
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"UTMatrix({self.n}, {self.to_str()!r})"


def _poly_terms_for_matrix(poly: MultiPoly):
    """Split a polynomial coefficient into (rational, monomial-text) pieces."""
    from .poly import grevlex

    order = grevlex()
    pieces = []
    names = poly.table.names
    for mono in sorted(poly.terms, key=order.key, reverse=True):
        coeff = poly.terms[mono]
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        pieces.append((coeff, "*".join(factors)))
    return pieces


def parse_matrix(text: str, n: int = 3, table: VarTable | None = None) -> UTMatrix:
    """Parse a sum-of-terms matrix literal.

    Each term is ``[coef*]eIJ`` with ``coef`` built from integer/fraction
    literals and (when ``table`` is given) parameter names, joined by ``*``.
    Repeated basis elements accumulate.
    """
    text = text.strip()
    if text == "0" or text == "":
        return UTMatrix(n)
    tokens = _tokenize(text)
    pos, count = 0, len(tokens)
    total = UTMatrix(n)
    first = True
    while pos < count:
        sign = 1
        while pos < count and tokens[pos][0] in "+-":
            if tokens[pos][0] == "-":
                sign = -sign
            pos += 1
            first = False
        if pos >= count:
            raise ParseError("dangling sign", tokens[-1][2])
        first = False
        coeff = Fraction(sign)
        if table is not None:
            coeff = MultiPoly.const(table, coeff)
        basis_idx = None
        expect_factor = True
        while pos < count:
            kind, value, at = tokens[pos]
            if kind == "num" and expect_factor:
                coeff = coeff * value
                pos += 1
            elif kind == "name" and expect_factor:
                exp = 1
                if pos + 2 < count and tokens[pos + 1][0] == "^":
                    if tokens[pos + 2][0] != "num":
                        raise ParseError("expected exponent after '^'", at)
                    exp_val = tokens[pos + 2][1]
                    if exp_val.denominator != 1 or exp_val < 0:
                        raise ParseError("exponent must be a non-negative integer",
                                         tokens[pos + 2][2])
                    exp = int(exp_val)
                try:
                    idx = name_to_index(value, n)
                except ValueError:
                    idx = None
                if idx is not None:
                    if basis_idx is not None:
                        raise ParseError("two basis elements in one term", at)
                    basis_idx = idx
                    pos += 1
                else:
                    if table is None or value not in table.index:
                        raise ParseError(f"unknown symbol {value!r}", at)
                    coeff = coeff * table.var(value) ** exp
                    pos += 1 if exp == 1 else 3
            else:
                break
            expect_factor = False
            if pos < count and tokens[pos][0] == "*":
                pos += 1
                expect_factor = True
        if expect_factor:
            raise ParseError("dangling '*'", tokens[pos - 1][2] if pos else 0)
        if basis_idx is None:
            raise ParseError("term without a basis element", tokens[pos - 1][2])
        total = total + UTMatrix(n, {basis_idx: coeff})
    return total


# -- exact linear algebra helpers -------------------------------------------


def exact_rank(rows: list) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    rows = [list(map(Fraction, row)) for row in rows]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pivot_row = rows[rank]
        inv = Fraction(1) / pivot_row[col]
        rows[rank] = [v * inv for v in pivot_row]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def solve_exact(matrix: list, rhs: list):
    """Solve M x = rhs over the rationals; returns a solution list or None."""
    m = len(matrix)
    if m == 0:
        return [] if not any(rhs) else None
    ncols = len(matrix[0])
    aug = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, m):
            if aug[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = Fraction(1) / aug[rank][col]
        aug[rank] = [v * inv for v in aug[rank]]
        for r in range(m):
            if r != rank and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, m):
        if aug[r][ncols]:
            return None
    solution = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        solution[col] = aug[r][ncols]
    return solution


def generic_rank(rows: list) -> int:
    """Rank over the fraction field of the coefficient ring.

    Entries may be ``Fraction`` or ``MultiPoly``; elimination is fraction-free
    (cross-multiplication), so the result is the rank at a generic parameter
    point.
    """
    work = [list(row) for row in rows]
    if not work:
        return 0
    cols = len(work[0])
    rank = 0
    row_count = len(work)
    for col in range(cols):
        pivot = None
        for r in range(rank, row_count):
            if not _is_zero(work[r][col]):
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pivot_val = work[rank][col]
        for r in range(rank + 1, row_count):
            if _is_zero(work[r][col]):
                continue
            factor = work[r][col]
            work[r] = [pivot_val * a - factor * b
                       for a, b in zip(work[r], work[rank])]
        rank += 1
        if rank == row_count:
            break
    return rank
