"""Linear operators on U_n and the weight-lambda Rota-Baxter identity.

An operator is stored by its images of the canonical basis (equivalently a
d-by-d coefficient array, d = n(n+1)/2, in the basis order e11 < e12 < ... <
enn).  Entries are exact rationals or polynomials in named parameters, so
whole parametric families are single values and "the identity holds" means
"holds identically in the parameters".

The residual of an operator R of weight lambda is the table, over ordered
basis pairs (u, v), of

    R(u) R(v) - R( R(u) v + u R(v) + lambda u v ).

Bilinearity makes the identity on basis pairs equivalent to the identity on
the whole algebra, so R is Rota-Baxter iff every residual cell vanishes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .matrices import (BasisIndex, UTMatrix, basis_indices, basis_name,
                       generic_rank, name_to_index, parse_matrix, solve_exact)
from .poly import MultiPoly, VarTable, grevlex
from .groebner import PolySystem

__all__ = [
    "Operator",
    "RBResidual",
    "Ansatz",
    "AnsatzSolution",
    "ContradictoryAnsatz",
    "SplitHypothesisError",
    "Lemma3Report",
    "rb_residual",
    "scale_operator",
    "generate_system",
    "bvar_name",
    "split_construction",
    "check_lemma3",
]


class ContradictoryAnsatz(ValueError):
    pass


class SplitHypothesisError(ValueError):
    """A hypothesis of the triangular-split construction failed; names it."""


class Operator:
    """A linear endomorphism of U_n, stored column-by-column.

    ``columns[b]`` is the image of basis element ``b``; missing keys mean the
    zero image.  ``weight`` is the lambda the operator is checked against.
    """

    __slots__ = ("n", "columns", "weight")

    def __init__(self, n: int, columns: Mapping[BasisIndex, UTMatrix] | None = None,
                 weight=Fraction(0)):
        self.n = n
        self.weight = Fraction(weight) if isinstance(weight, (int, str)) else weight
        cols = {}
        if columns:
            for idx, image in columns.items():
                if idx not in set(basis_indices(n)):
                    raise ValueError(f"bad basis index {idx!r}")
                if image.n != n:
                    raise ValueError("image size mismatch")
                if not image.is_zero():
                    cols[idx] = image
        self.columns = cols

    # -- construction -------------------------------------------------------

    @staticmethod
    def zero(n: int = 3, weight=Fraction(0)) -> "Operator":
        return Operator(n, {}, weight)

    @staticmethod
    def identity(n: int = 3, weight=Fraction(0)) -> "Operator":
        return Operator(n, {idx: UTMatrix.basis(n, *idx) for idx in basis_indices(n)},
                        weight)

    @staticmethod
    def from_images(images: Mapping[str, str], n: int = 3,
                    params: Sequence[str] = (), weight=Fraction(0)) -> "Operator":
        """Build from {basis name: matrix literal} with optional parameters."""
        table = VarTable(params) if params else None
        cols = {}
        for name, text in images.items():
            idx = name_to_index(name, n)
            cols[idx] = parse_matrix(text, n, table)
        return Operator(n, cols, weight)

    # -- linear action -------------------------------------------------------

    def image(self, idx: BasisIndex) -> UTMatrix:
        return self.columns.get(idx, UTMatrix.zero(self.n))

    def apply(self, x: UTMatrix) -> UTMatrix:
        """Matrix-vector product in the canonical basis."""
        if x.n != self.n:
            raise ValueError("incompatible operands")
        total = UTMatrix.zero(self.n)
        for idx, coeff in x.entries.items():
            image = self.columns.get(idx)
            if image is not None:
                total = total + image.scale(coeff)
        return total

    def compose(self, other: "Operator") -> "Operator":
        """self after other."""
        if self.n != other.n:
            raise ValueError("incompatible operands")
        return Operator(self.n,
                        {idx: self.apply(other.image(idx))
                         for idx in basis_indices(self.n)},
                        self.weight)

    def is_zero(self) -> bool:
        return not self.columns

    def power_vanish_index(self, cap: int = 10):
        """Least k with R^k = 0 (identically), or None if no k <= cap works."""
        if self.is_zero():
            return 1
        current = self
        for k in range(2, cap + 1):
            current = current.compose(self)
            if current.is_zero():
                return k
        return None

    def unit_image(self) -> UTMatrix:
        """R(1), the image of the identity matrix."""
        return self.apply(UTMatrix.unit(self.n))

    def coefficient_rows(self) -> list:
        """The d-by-d coefficient array; row order = column order = basis order."""
        idxs = basis_indices(self.n)
        cols = [self.image(idx).to_vector() for idx in idxs]
        return [[cols[j][i] for j in range(len(idxs))] for i in range(len(idxs))]

    def image_dimension(self) -> int:
        """Generic rank of the coefficient array (rank over the fraction field)."""
        return generic_rank(self.coefficient_rows())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        if self.n != other.n:
            return False
        return all(self.image(idx) == other.image(idx)
                   for idx in basis_indices(self.n))

    def params(self) -> tuple:
        names = []
        for image in self.columns.values():
            for value in image.entries.values():
                if isinstance(value, MultiPoly):
                    for name in value.table.names:
                        if name not in names:
                            names.append(name)
        return tuple(names)

    def substitute_params(self, values: Mapping[str, Fraction]) -> "Operator":
        """Specialize every polynomial entry at the given parameter values."""
        cols = {}
        for idx, image in self.columns.items():
            entries = {}
            for key, value in image.entries.items():
                if isinstance(value, MultiPoly):
                    bound = {name: Fraction(values[name])
                             for name in value.table.names}
                    value = value.substitute(bound, VarTable(())).constant_value()
                entries[key] = value
            cols[idx] = UTMatrix(self.n, entries)
        return Operator(self.n, cols, self.weight)

    # -- io -------------------------------------------------------------------

    def to_json(self) -> dict:
        images = {}
        for idx in basis_indices(self.n):
            image = self.columns.get(idx)
            if image is not None:
                images[basis_name(idx)] = image.to_str()
        return {
            "schema": 1,
            "n": self.n,
            "weight": str(self.weight),
            "params": list(self.params()),
            "images": images,
        }

    @staticmethod
    def from_json(data: dict) -> "Operator":
        return Operator.from_images(data.get("images", {}),
                                    n=int(data.get("n", 3)),
                                    params=tuple(data.get("params", ())),
                                    weight=Fraction(data.get("weight", "0")))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def load(path) -> "Operator":
        with open(path) as fh:
            return Operator.from_json(json.load(fh))

    def __repr__(self) -> str:
        parts = ", ".join(f"{basis_name(idx)} -> {self.columns[idx]}"
                          for idx in basis_indices(self.n) if idx in self.columns)
        return f"Operator({parts or '0'})"


@dataclass
class RBResidual:
    """All pairwise residual matrices of an operator."""

    n: int
    weight: Fraction
    cells: dict  # (u, v) basis pair -> UTMatrix

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.cells.values())

    def first_nonzero(self):
        """((u, v), position, value) of the first failing cell, or None."""
        for pair in sorted(self.cells):
            cell = self.cells[pair]
            if not cell.is_zero():
                for pos in basis_indices(self.n):
                    if pos in cell.entries:
                        return pair, pos, cell.entries[pos]
        return None


def rb_residual(op: Operator) -> RBResidual:
    """The 36-cell residual table (for n = 3); exact, identically in parameters."""
    n = op.n
    idxs = basis_indices(n)
    basis_mats = {idx: UTMatrix.basis(n, *idx) for idx in idxs}
    weight = op.weight
    cells = {}
    for u in idxs:
        ru = op.image(u)
        bu = basis_mats[u]
        for v in idxs:
            rv = op.image(v)
            bv = basis_mats[v]
            inner = ru * bv + bu * rv
            if weight:
                inner = inner + (bu * bv).scale(weight)
            cells[(u, v)] = ru * rv - op.apply(inner)
    return RBResidual(n, weight, cells)


def scale_operator(op: Operator, k) -> Operator:
    """Lemma-1 scaling: k != 0 gives the operator (1/k) R, again Rota-Baxter."""
    k = Fraction(k) if not isinstance(k, Fraction) else k
    if not k:
        raise ValueError("scaling factor must be nonzero")
    if op.weight:
        raise ValueError("scaling preserves the identity only at weight zero")
    inv = Fraction(1) / k
    return Operator(op.n, {idx: img.scale(inv) for idx, img in op.columns.items()},
                    op.weight)


# -- symbolic system generation ----------------------------------------------


def bvar_name(src: BasisIndex, dst: BasisIndex) -> str:
    """Unknown-coefficient naming: b_<ij>_<kl> is the e_kl coordinate of R(e_ij)."""
    return f"b_{src[0]}{src[1]}_{dst[0]}{dst[1]}"


@dataclass
class Ansatz:
    """Linear shape constraints for a symbolic operator.

    ``constraints`` are linear polynomial strings over the ``b_ij_kl``
    unknowns (constant terms allowed), each required to vanish.  The helper
    constructors below cover the usual shapes: fixing a whole image, fixing
    R(1), or restricting an image to a span of basis elements.
    """

    n: int = 3
    weight: Fraction = Fraction(0)
    constraints: list = field(default_factory=list)

    def all_bvars(self) -> list:
        idxs = basis_indices(self.n)
        return [bvar_name(s, d) for s in idxs for d in idxs]

    def fix_image(self, name: str, matrix_text: str) -> "Ansatz":
        """Constrain R(e_name) to the given rational matrix."""
        idx = name_to_index(name, self.n)
        target = parse_matrix(matrix_text, self.n)
        for dst in basis_indices(self.n):
            value = target.entries.get(dst, Fraction(0))
            self.constraints.append(f"{bvar_name(idx, dst)} - {value}"
                                    if value else bvar_name(idx, dst))
        return self

    def fix_unit_image(self, matrix_text: str) -> "Ansatz":
        """Constrain R(1) = R(e11) + ... + R(enn) to the given matrix."""
        target = parse_matrix(matrix_text, self.n)
        for dst in basis_indices(self.n):
            terms = " + ".join(bvar_name((i, i), dst) for i in range(1, self.n + 1))
            value = target.entries.get(dst, Fraction(0))
            self.constraints.append(f"{terms} - {value}" if value else terms)
        return self

    def restrict_span(self, name: str, allowed: Sequence[str]) -> "Ansatz":
        """Force R(e_name) into the span of the listed basis elements."""
        idx = name_to_index(name, self.n)
        allowed_idx = {name_to_index(a, self.n) for a in allowed}
        for dst in basis_indices(self.n):
            if dst not in allowed_idx:
                self.constraints.append(bvar_name(idx, dst))
        return self

    def tie(self, constraint_text: str) -> "Ansatz":
        """Add a raw linear constraint over the b-variables."""
        self.constraints.append(constraint_text)
        return self


@dataclass
class AnsatzSolution:
    """The solved linear shape: every b-variable as a polynomial in the free ones."""

    n: int
    table: VarTable            # free variables, in canonical b-order
    expressions: dict          # b-name -> MultiPoly over `table`
    operator: Operator         # the symbolic operator with those entries

    def expand(self, text: str, aliases: Mapping[str, str] | None = None) -> MultiPoly:
        """Parse `text` over b-variables (and aliases) into the free-variable ring."""
        aliases = aliases or {}
        ext = VarTable(tuple(self.expressions.keys()) + tuple(aliases.keys()))
        raw = ext.parse(text)
        bindings = {}
        for name in raw.variables():
            if name in aliases:
                bindings[name] = self.expressions[aliases[name]]
            else:
                bindings[name] = self.expressions[name]
        return raw.substitute(bindings, self.table)


def _solve_linear_constraints(ansatz: Ansatz):
    """Row-reduce the constraints; returns (free names, expressions for all)."""
    names = ansatz.all_bvars()
    table = VarTable(names)
    rows = []
    for text in ansatz.constraints:
        poly = text if isinstance(text, MultiPoly) else table.parse(text)
        if poly.total_degree() > 1:
            raise ContradictoryAnsatz("constraints must be linear")
        if poly.is_zero():
            continue
        row = [Fraction(0)] * (len(names) + 1)
        for mono, coeff in poly.terms.items():
            if not any(mono):
                row[-1] = coeff
            else:
                row[mono.index(1)] = coeff
        rows.append(row)
    # exact RREF with pivots chosen in canonical variable order
    pivots = {}
    rank = 0
    for col in range(len(names)):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots[col] = rank
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][-1]:
            raise ContradictoryAnsatz("contradictory ansatz")
    free_names = [names[c] for c in range(len(names)) if c not in pivots]
    free_table = VarTable(free_names)
    expressions = {}
    free_pos = {name: i for i, name in enumerate(free_names)}
    width = len(free_names)

    def unit_poly(name):
        mono = tuple(1 if i == free_pos[name] else 0 for i in range(width))
        return MultiPoly(free_table, {mono: Fraction(1)})

    for col, name in enumerate(names):
        if col not in pivots:
            expressions[name] = unit_poly(name)
            continue
        row = rows[pivots[col]]
        value = MultiPoly.const(free_table, -row[-1])
        for other in range(len(names)):
            if other == col or not row[other]:
                continue
            # pivoted columns to the right of `col` cannot appear after RREF
            value = value - row[other] * unit_poly(names[other])
        expressions[name] = value
    return free_table, expressions


def generate_system(ansatz: Ansatz) -> tuple:
    """Symbolic residual components under the ansatz, as a polynomial system.

    Returns ``(PolySystem, AnsatzSolution)``.  Generators are the distinct
    nonzero matrix components of all residual cells, made monic, in the
    deterministic cell/position order; they are quadratic in the unknowns.
    """
    free_table, expressions = _solve_linear_constraints(ansatz)
    n = ansatz.n
    idxs = basis_indices(n)
    cols = {}
    for src in idxs:
        entries = {}
        for dst in idxs:
            value = expressions[bvar_name(src, dst)]
            if not value.is_zero():
                entries[dst] = value
        cols[src] = UTMatrix(n, entries)
    op = Operator(n, cols, ansatz.weight)
    solution = AnsatzSolution(n, free_table, expressions, op)
    residual = rb_residual(op)
    order = grevlex()
    gens = []
    seen = set()
    for pair in sorted(residual.cells):
        cell = residual.cells[pair]
        for pos in idxs:
            value = cell.entries.get(pos)
            if value is None:
                continue
            if isinstance(value, Fraction):
                value = MultiPoly.const(free_table, value)
            if value.is_zero():
                continue
            # a nonzero constant component means no specialization satisfies
            # the identity: the system degenerates to the unit ideal
            value = value.monic(order)
            key = (tuple(sorted(value.terms.items())))
            if key in seen:
                continue
            seen.add(key)
            gens.append(value)
    return PolySystem(free_table, tuple(gens), order), solution


# -- the triangular split construction ----------------------------------------


def split_construction(b_basis: Sequence[UTMatrix], c_basis: Sequence[UTMatrix],
                       images: Sequence[UTMatrix], n: int = 3,
                       weight=Fraction(0)) -> Operator:
    """Operator with R(B) in span(C), R(C) = 0, for a splitting U_n = B + C.

    Hypotheses checked (and named on failure): B u C is a basis; C has zero
    multiplication; C absorbs B on both sides.  Under them the result is a
    weight-zero Rota-Baxter operator; the residual is verified anyway.
    """
    if Fraction(weight):
        raise ValueError("the split construction is a weight-zero construction")
    vectors = [m.to_vector() for m in list(b_basis) + list(c_basis)]
    d = len(basis_indices(n))
    if len(vectors) != d or generic_rank(vectors) != d:
        raise SplitHypothesisError("hypothesis failed: B and C do not form a basis")
    span_rows = [m.to_vector() for m in c_basis]
    span_rank = generic_rank(span_rows)

    def in_span_c(m: UTMatrix) -> bool:
        if m.is_zero():
            return True
        return generic_rank(span_rows + [m.to_vector()]) == span_rank

    for x in c_basis:
        for y in c_basis:
            if not (x * y).is_zero():
                raise SplitHypothesisError(
                    "hypothesis failed: C * C != 0 (C must have zero product)")
    for x in b_basis:
        for y in c_basis:
            if not in_span_c(x * y):
                raise SplitHypothesisError("hypothesis failed: B * C not inside span(C)")
            if not in_span_c(y * x):
                raise SplitHypothesisError("hypothesis failed: C * B not inside span(C)")
    if len(images) != len(b_basis):
        raise ValueError("one image per B-basis element is required")
    for img in images:
        if not in_span_c(img):
            raise SplitHypothesisError("hypothesis failed: an image lies outside span(C)")

    # express R on the canonical basis by solving the change of coordinates
    columns = {}
    matrix = [[vectors[c][r] for c in range(d)] for r in range(d)]
    image_list = list(images) + [UTMatrix.zero(n)] * len(c_basis)
    for pos, idx in enumerate(basis_indices(n)):
        rhs = [Fraction(1) if r == pos else Fraction(0) for r in range(d)]
        coords = solve_exact(matrix, rhs)
        total = UTMatrix.zero(n)
        for c, coeff in enumerate(coords):
            if coeff:
                total = total + image_list[c].scale(coeff)
        columns[idx] = total
    op = Operator(n, columns, Fraction(0))
    if not rb_residual(op).is_zero():
        raise SplitHypothesisError("internal error: residual nonzero after split")
    return op


# -- unital-algebra checks -----------------------------------------------------


@dataclass
class Lemma3Report:
    unit_not_in_image: bool
    kernel_contains_image: bool | None  # None when R(1) != 0, so no claim
    unit_power_identity: bool
    details: dict = field(default_factory=dict)

    def all_hold(self) -> bool:
        return (self.unit_not_in_image
                and self.kernel_contains_image in (True, None)
                and self.unit_power_identity)


def unit_in_image(op: Operator):
    """Decide whether the identity matrix lies in Im(R).

    Rational entries: exact solvability of R x = 1.  Polynomial entries: a
    rational functional certificate, valid for every parameter value; returns
    False only with such a certificate, True if the unit lies in the rational
    span of the coefficient vectors (conservative).
    """
    n = op.n
    idxs = basis_indices(n)
    unit_vec = UTMatrix.unit(n).to_vector()
    symbolic = any(isinstance(v, MultiPoly)
                   for img in op.columns.values() for v in img.entries.values())
    if not symbolic:
        rows = op.coefficient_rows()
        return solve_exact(rows, unit_vec) is not None
    span_rows = []
    for idx in idxs:
        image = op.image(idx)
        pieces = {}
        for pos, value in image.entries.items():
            if isinstance(value, MultiPoly):
                for mono, coeff in value.terms.items():
                    pieces.setdefault(mono, {})[pos] = coeff
            else:
                pieces.setdefault(("const",), {})[pos] = value
        for chunk in pieces.values():
            span_rows.append([chunk.get(p, Fraction(0)) for p in idxs])
    from .matrices import exact_rank
    if not span_rows:
        return False
    base = exact_rank(span_rows)
    return exact_rank(span_rows + [unit_vec]) == base


def check_lemma3(op: Operator, max_power: int = 3) -> Lemma3Report:
    """The three unital-algebra checks for a weight-zero operator.

    (a) the unit is not in the image; (b) when R(1) = 0, the image sits in
    the kernel and R^2 = 0; (c) R(1)^m = m! R^m(1) for m = 1..max_power.
    """
    details = {}
    a_ok = not unit_in_image(op)
    r1 = op.unit_image()
    if r1.is_zero():
        rr = op.compose(op)
        b_ok = rr.is_zero()
        details["r_squared_zero"] = b_ok
    else:
        b_ok = None
    c_ok = True
    factorial = 1
    power = UTMatrix.unit(op.n)
    iterate = UTMatrix.unit(op.n)
    for m in range(1, max_power + 1):
        factorial *= m
        power = power * r1 if m > 1 else r1
        iterate = op.apply(iterate)
        if power != iterate.scale(Fraction(factorial)):
            c_ok = False
            details["unit_power_failure_at"] = m
            break
    return Lemma3Report(a_ok, b_ok, c_ok, details)
