"""Multivariate polynomials over exact rationals.

Polynomials are the coefficient ring for every symbolic computation in this
package: unknown operator coefficients, automorphism parameters, and the
generators handed to the Groebner engine all live here.

Representation: a shared :class:`VarTable` fixes the variables and their
order; a monomial is a dense tuple of non-negative exponents (one slot per
variable); a polynomial is a dict mapping monomials to nonzero ``Fraction``
coefficients.  Values are immutable by convention: no operation mutates its
operands, and equal polynomials have identical term maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "VarTable",
    "Monomial",
    "MonomialOrder",
    "MultiPoly",
    "ParseError",
    "grevlex",
    "lex",
    "elimination",
    "is_zero_identically",
    "parse_poly",
]

Monomial = tuple  # exponent vector, one entry per variable in the table
Coefficient = Union[int, Fraction, "MultiPoly"]


class ParseError(ValueError):
    """Raised on malformed polynomial or matrix literals; carries a position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class VarTable:
    """An ordered list of distinct variable names.

    Variable identity is the index into the table, and the table order is the
    variable order used by every monomial comparison.
    """

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        for name in names:
            if not name or not (name[0].isalpha() or name[0] == "_"):
                raise ValueError(f"invalid variable name {name!r}")
        self.names = names
        self.index = {name: i for i, name in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarTable({list(self.names)!r})"

    def var(self, name: str) -> "MultiPoly":
        """The variable `name` as a polynomial."""
        i = self.index.get(name)
        if i is None:
            raise KeyError(f"unknown variable {name!r}")
        mono = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return MultiPoly(self, {mono: Fraction(1)})

    def const(self, value) -> "MultiPoly":
        return MultiPoly.const(self, value)

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def parse(self, text: str) -> "MultiPoly":
        return parse_poly(text, self)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: total, a well-order, compatible with multiplication.

    ``kind`` is one of ``lex``, ``grevlex``, or ``elim``; for ``elim`` the
    first ``block`` variables are ordered strictly above the rest (each block
    compared by grevlex), which is the order used for elimination ideals.
    """

    kind: str
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block <= 0:
            raise ValueError("elimination order needs a positive block size")

    def key(self, mono: Monomial):
        """Sort key: larger key = larger monomial."""
        if self.kind == "lex":
            return mono
        if self.kind == "grevlex":
            return (sum(mono), tuple(-e for e in reversed(mono)))
        head, tail = mono[: self.block], mono[self.block:]
        return (
            sum(head),
            tuple(-e for e in reversed(head)),
            sum(tail),
            tuple(-e for e in reversed(tail)),
        )

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def to_json(self):
        if self.kind == "elim":
            return {"elim": self.block}
        return self.kind

    @staticmethod
    def from_json(data) -> "MonomialOrder":
        if isinstance(data, str):
            return MonomialOrder(data)
        if isinstance(data, dict) and "elim" in data:
            return MonomialOrder("elim", int(data["elim"]))
        raise ValueError(f"bad monomial order spec {data!r}")


def is_zero_identically(p: "MultiPoly") -> bool:
    """True iff p is the zero polynomial (empty canonical term map)."""
    return p.is_zero()


def lex() -> MonomialOrder:
    return MonomialOrder("lex")


def grevlex() -> MonomialOrder:
    return MonomialOrder("grevlex")


def elimination(block: int) -> MonomialOrder:
    return MonomialOrder("elim", block)


class MultiPoly:
    """A multivariate polynomial with exact rational coefficients.

    Scalars (``int``/``Fraction``) mix freely with polynomials in ring
    operations; two polynomials must share their :class:`VarTable`.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[Monomial, Fraction]):
        clean = {}
        width = len(table)
        for mono, coeff in terms.items():
            if not coeff:
                continue
            if len(mono) != width:
                raise ValueError("monomial width does not match the table")
            clean[mono] = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
        self.table = table
        self.terms = clean

    # -- construction ----------------------------------------------------

    @staticmethod
    def const(table: VarTable, value) -> "MultiPoly":
        value = _as_fraction(value)
        if not value:
            return MultiPoly(table, {})
        return MultiPoly(table, {(0,) * len(table): value})

    # -- basic structure -------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        """True iff the canonical term map is empty."""
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def variables(self) -> set:
        """Names of variables that actually occur."""
        seen = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    seen.add(self.table.names[i])
        return seen

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.table == other.table and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if not other:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.table.names, frozenset(self.terms.items())))

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.table != self.table:
                raise ValueError("incompatible operands: different variable tables")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.table, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = terms.get(mono)
            if acc is None:
                terms[mono] = coeff
            else:
                acc = acc + coeff
                if acc:
                    terms[mono] = acc
                else:
                    del terms[mono]
        result = MultiPoly.__new__(MultiPoly)
        result.table = self.table
        result.terms = terms
        return result

    __radd__ = __add__

    def __neg__(self):
        result = MultiPoly.__new__(MultiPoly)
        result.table = self.table
        result.terms = {m: -c for m, c in self.terms.items()}
        return result

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if not other:
                return MultiPoly(self.table, {})
            result = MultiPoly.__new__(MultiPoly)
            result.table = self.table
            result.terms = {m: c * other for m, c in self.terms.items()}
            return result
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                acc = terms.get(mono)
                if acc is None:
                    terms[mono] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc:
                        terms[mono] = acc
                    else:
                        del terms[mono]
        result = MultiPoly.__new__(MultiPoly)
        result.table = self.table
        result.terms = terms
        return result

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.const(self.table, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- leading terms ---------------------------------------------------

    def leading(self, order: MonomialOrder):
        """The maximal (monomial, coefficient) pair under `order`.

        Raises ``ValueError("no leading term")`` on the zero polynomial.
        """
        if not self.terms:
            raise ValueError("no leading term")
        mono = max(self.terms, key=order.key)
        return mono, self.terms[mono]

    def monic(self, order: MonomialOrder) -> "MultiPoly":
        _, lc = self.leading(order)
        if lc == 1:
            return self
        inv = Fraction(1) / lc
        result = MultiPoly.__new__(MultiPoly)
        result.table = self.table
        result.terms = {m: c * inv for m, c in self.terms.items()}
        return result

    # -- substitution ----------------------------------------------------

    def substitute(self, bindings: Mapping[str, object],
                   table: VarTable | None = None) -> "MultiPoly":
        """Ring-homomorphic substitution.

        ``bindings`` maps variable names to replacement values (polynomials
        over ``table``, or exact scalars).  Variables without a binding must
        exist in the target table and map to themselves.  Binding a name not
        present in this polynomial's table is an error.
        """
        for name in bindings:
            if name not in self.table.index:
                raise ValueError(f"unknown variable {name!r} in bindings")
        target = table if table is not None else self.table
        repl = {}
        for name, value in bindings.items():
            if isinstance(value, MultiPoly):
                if value.table != target:
                    raise ValueError(
                        f"binding for {name!r} is not over the target table")
                repl[name] = value
            else:
                repl[name] = MultiPoly.const(target, value)
        result = MultiPoly(target, {})
        for mono, coeff in self.terms.items():
            term = MultiPoly.const(target, coeff)
            for i, e in enumerate(mono):
                if not e:
                    continue
                name = self.table.names[i]
                value = repl.get(name)
                if value is None:
                    if name not in target.index:
                        raise ValueError(
                            f"variable {name!r} missing from the target table")
                    value = target.var(name)
                term = term * value**e
            result = result + term
        return result

    def retable(self, table: VarTable) -> "MultiPoly":
        """Re-express over `table` (which must contain every occurring name)."""
        return self.substitute({}, table)

    # -- printing --------------------------------------------------------

    def to_str(self, order: MonomialOrder | None = None) -> str:
        if not self.terms:
            return "0"
        order = order or grevlex()
        names = self.table.names
        parts = []
        for mono in sorted(self.terms, key=order.key, reverse=True):
            coeff = self.terms[mono]
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            body = "*".join(factors)
            mag = abs(coeff)
            if body and mag == 1:
                text = body
            elif body:
                text = f"{mag}*{body}"
            else:
                text = str(mag)
            parts.append(("-" if coeff < 0 else "+", text))
        sign, text = parts[0]
        out = ("-" if sign == "-" else "") + text
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_str()!r})"


# -- parsing ---------------------------------------------------------------

_NUM_CHARS = set("0123456789")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch in _NUM_CHARS:
            j = i
            while j < n and text[j] in _NUM_CHARS:
                j += 1
            if j < n and text[j] == "/":
                k = j + 1
                while k < n and text[k] in _NUM_CHARS:
                    k += 1
                if k == j + 1:
                    raise ParseError("expected digits after '/'", j + 1)
                tokens.append(("num", Fraction(int(text[i:j]), int(text[j + 1:k])), i))
                i = k
            else:
                tokens.append(("num", Fraction(int(text[i:j])), i))
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


def parse_poly(text: str, table: VarTable) -> MultiPoly:
    """Parse the polynomial grammar ``coef*var1^k1*var2^k2 +/- ...``.

    Coefficients are integer or fraction literals; ``+``/``-`` separate
    terms.  Printing and parsing round-trip exactly.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial", 0)
    result = MultiPoly(table, {})
    pos = 0
    n = len(tokens)
    first = True
    while pos < n:
        sign = Fraction(1)
        while pos < n and tokens[pos][0] in "+-":
            if tokens[pos][0] == "-":
                sign = -sign
            pos += 1
            first = False
        if pos >= n:
            raise ParseError("dangling sign", tokens[-1][2])
        if not first and tokens[pos][0] not in ("num", "name"):
            raise ParseError("expected a term", tokens[pos][2])
        first = False
        coeff = sign
        mono = [0] * len(table)
        expect_factor = True
        while pos < n:
            kind, value, at = tokens[pos]
            if kind == "num" and expect_factor:
                coeff *= value
                pos += 1
            elif kind == "name" and expect_factor:
                idx = table.index.get(value)
                if idx is None:
                    raise ParseError(f"unknown variable {value!r}", at)
                exp = 1
                pos += 1
                if pos < n and tokens[pos][0] == "^":
                    if pos + 1 >= n or tokens[pos + 1][0] != "num":
                        raise ParseError("expected exponent after '^'", at)
                    exp_val = tokens[pos + 1][1]
                    if exp_val.denominator != 1 or exp_val < 0:
                        raise ParseError("exponent must be a non-negative integer",
                                         tokens[pos + 1][2])
                    exp = int(exp_val)
                    pos += 2
                mono[idx] += exp
            else:
                break
            expect_factor = False
            if pos < n and tokens[pos][0] == "*":
                pos += 1
                expect_factor = True
        if expect_factor:
            raise ParseError("dangling '*'", tokens[pos - 1][2] if pos else 0)
        result = result + MultiPoly(table, {tuple(mono): coeff})
    return result
