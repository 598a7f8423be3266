"""The (anti)automorphism action on operators over U_3.

``build_psi`` produces the five-parameter automorphism family of U_3 (alpha
and delta invertible); ``theta13`` the flip antiautomorphism X -> Z X^T Z
along the antidiagonal.  Conjugating an operator by either kind preserves the
Rota-Baxter identity and the weight, which is what makes canonical forms
meaningful.

Canonicalization routines return a self-certifying :class:`Witness`: a
composition of maps (applied left to right) plus a scalar, such that the
witness action reproduces the claimed normal form exactly.  The constructor
re-checks that claim and refuses to hand back a broken witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .matrices import UTMatrix, basis_indices, solve_exact
from .operators import Operator, scale_operator
from .poly import MultiPoly, VarTable, lex
from .groebner import GroebnerBasis, Limits, PolySystem, buchberger

__all__ = [
    "AutoParams",
    "AlgebraMap",
    "PsiStep",
    "ThetaStep",
    "Witness",
    "build_psi",
    "theta13",
    "conjugate_operator",
    "canonicalize_nilpotent",
    "canonicalize_idempotent",
    "find_conjugation",
    "ConjugationSearch",
]


@dataclass(frozen=True)
class AutoParams:
    """Parameters (alpha, beta, gamma, delta, epsilon) with alpha, delta != 0."""

    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)
    delta: Fraction = Fraction(1)
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "epsilon"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not self.alpha or not self.delta:
            raise ValueError("alpha and delta must be invertible")

    def to_json(self):
        return {name: str(getattr(self, name))
                for name in ("alpha", "beta", "gamma", "delta", "epsilon")}

    @staticmethod
    def from_json(data) -> "AutoParams":
        return AutoParams(**{k: Fraction(v) for k, v in data.items()})


class AlgebraMap:
    """An invertible linear map on U_n that is multiplicative or antimultiplicative.

    Both properties are verified on all basis pairs at construction time, so
    holding an instance is holding a certificate.
    """

    __slots__ = ("n", "kind", "columns", "_inverse_columns")

    def __init__(self, n: int, kind: str, columns: Mapping, _skip_checks=False):
        if kind not in ("automorphism", "antiautomorphism"):
            raise ValueError(f"unknown kind {kind!r}")
        self.n = n
        self.kind = kind
        self.columns = {idx: columns[idx] for idx in basis_indices(n)}
        self._inverse_columns = None
        if not _skip_checks:
            self._verify()

    def _verify(self):
        idxs = basis_indices(self.n)
        for u in idxs:
            bu = UTMatrix.basis(self.n, *u)
            mu = self.columns[u]
            for v in idxs:
                bv = UTMatrix.basis(self.n, *v)
                mv = self.columns[v]
                product = self.apply(bu * bv)
                expected = mu * mv if self.kind == "automorphism" else mv * mu
                if product != expected:
                    raise ValueError("map is not (anti)multiplicative")
        self.inverse_columns()  # invertibility check

    def apply(self, x: UTMatrix) -> UTMatrix:
        total = UTMatrix.zero(self.n)
        for idx, coeff in x.entries.items():
            total = total + self.columns[idx].scale(coeff)
        return total

    def inverse_columns(self):
        if self._inverse_columns is None:
            idxs = basis_indices(self.n)
            d = len(idxs)
            cols = [self.columns[idx].to_vector() for idx in idxs]
            matrix = [[cols[c][r] for c in range(d)] for r in range(d)]
            inverse = {}
            for pos, idx in enumerate(idxs):
                rhs = [Fraction(1) if r == pos else Fraction(0) for r in range(d)]
                coords = solve_exact(matrix, rhs)
                if coords is None:
                    raise ValueError("map is not invertible")
                inverse[idx] = UTMatrix.from_vector(self.n, coords)
            self._inverse_columns = inverse
        return self._inverse_columns

    def inverse_apply(self, x: UTMatrix) -> UTMatrix:
        inverse = self.inverse_columns()
        total = UTMatrix.zero(self.n)
        for idx, coeff in x.entries.items():
            total = total + inverse[idx].scale(coeff)
        return total

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """self after other (as linear maps)."""
        if self.n != other.n:
            raise ValueError("incompatible operands")
        kind = ("automorphism" if self.kind == other.kind else "antiautomorphism")
        columns = {idx: self.apply(other.columns[idx])
                   for idx in basis_indices(self.n)}
        return AlgebraMap(self.n, kind, columns, _skip_checks=True)

    def __eq__(self, other):
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return (self.n == other.n and self.kind == other.kind
                and all(self.columns[i] == other.columns[i]
                        for i in basis_indices(self.n)))


def build_psi(params: AutoParams, n: int = 3) -> AlgebraMap:
    """The five-parameter automorphism of U_3.

    Columns (images of the basis), with a = alpha, b = beta, c = gamma,
    d = delta, e = epsilon:

        e11 -> e11 + b e12 + c e13          e12 -> d e12 + e e13
        e13 -> a e13                        e22 -> -b e12 - (b e/d) e13 + e22 + (e/d) e23
        e23 -> -(a b/d) e13 + (a/d) e23     e33 -> (b e/d - c) e13 - (e/d) e23 + e33
    """
    if n != 3:
        raise ValueError("the five-parameter family is specific to U_3")
    a, b, c = params.alpha, params.beta, params.gamma
    d, e = params.delta, params.epsilon
    m = lambda entries: UTMatrix(3, entries)
    columns = {
        (1, 1): m({(1, 1): Fraction(1), (1, 2): b, (1, 3): c}),
        (1, 2): m({(1, 2): d, (1, 3): e}),
        (1, 3): m({(1, 3): a}),
        (2, 2): m({(1, 2): -b, (1, 3): -b * e / d, (2, 2): Fraction(1),
                   (2, 3): e / d}),
        (2, 3): m({(1, 3): -a * b / d, (2, 3): a / d}),
        (3, 3): m({(1, 3): b * e / d - c, (2, 3): -e / d, (3, 3): Fraction(1)}),
    }
    return AlgebraMap(3, "automorphism", columns)


def theta13(n: int = 3) -> AlgebraMap:
    """The antidiagonal flip e_ij -> e_{n+1-j, n+1-i}; an involution."""
    columns = {}
    for (i, j) in basis_indices(n):
        columns[(i, j)] = UTMatrix.basis(n, n + 1 - j, n + 1 - i)
    return AlgebraMap(n, "antiautomorphism", columns)


def conjugate_operator(op: Operator, phi: AlgebraMap) -> Operator:
    """phi^{-1} . R . phi; preserves the identity and the weight."""
    if op.n != phi.n:
        raise ValueError("incompatible operands")
    columns = {}
    for idx in basis_indices(op.n):
        columns[idx] = phi.inverse_apply(op.apply(phi.columns[idx]))
    return Operator(op.n, columns, op.weight)


# -- witnesses ------------------------------------------------------------------


@dataclass(frozen=True)
class PsiStep:
    params: AutoParams

    def map(self) -> AlgebraMap:
        return build_psi(self.params)

    def to_json(self):
        return {"psi": self.params.to_json()}


@dataclass(frozen=True)
class ThetaStep:
    def map(self) -> AlgebraMap:
        return theta13()

    def to_json(self):
        return "theta13"


@dataclass
class Witness:
    """A composition of maps (applied left to right) plus a scalar factor.

    On an operator: conjugate by each map in order, then scale by the stored
    scalar (the Lemma-1 action R -> (1/k) R).  On an element x the action is
    phi^{-1}(x) for the combined map phi, which matches how R(1) transforms
    under operator conjugation.
    """

    steps: tuple = ()
    scalar: Fraction = Fraction(1)

    def combined(self) -> AlgebraMap:
        maps = [step.map() for step in self.steps]
        if not maps:
            return build_psi(AutoParams())
        total = maps[0]
        for m in maps[1:]:
            total = total.compose(m)
        return total

    def transform_operator(self, op: Operator) -> Operator:
        result = op
        for step in self.steps:
            result = conjugate_operator(result, step.map())
        if self.scalar != 1:
            result = scale_operator(result, self.scalar)
        return result

    def act_element(self, x: UTMatrix) -> UTMatrix:
        return self.combined().inverse_apply(x)

    def to_json(self):
        return {"maps": [step.to_json() for step in self.steps],
                "scalar": str(self.scalar)}

    @staticmethod
    def from_json(data) -> "Witness":
        steps = []
        for item in data.get("maps", ()):
            if item == "theta13":
                steps.append(ThetaStep())
            elif isinstance(item, dict) and "psi" in item:
                steps.append(PsiStep(AutoParams.from_json(item["psi"])))
            else:
                raise ValueError(f"bad witness step {item!r}")
        return Witness(tuple(steps), Fraction(data.get("scalar", "1")))


# -- canonical forms --------------------------------------------------------------


@dataclass
class CanonicalForm:
    label: str
    form: UTMatrix
    witness: Witness


_NILPOTENT_LABELS = ("zero", "e12", "e13", "e12+e23")


def canonicalize_nilpotent(nil: UTMatrix) -> CanonicalForm:
    """Send a strictly upper-triangular element of U_3 to its orbit form.

    The form is one of 0, e12, e13, e12 + e23, and the witness certifies it:
    witness.act_element(input) equals the form exactly.
    """
    if nil.n != 3:
        raise ValueError("canonical forms are specific to U_3")
    if not nil.is_strictly_upper():
        raise ValueError("input must be nilpotent (strictly upper-triangular)")
    for value in nil.entries.values():
        if isinstance(value, MultiPoly):
            raise TypeError("rational entries required")
    a = nil.entry(1, 2)
    b = nil.entry(1, 3)
    c = nil.entry(2, 3)
    if not a and not b and not c:
        result = CanonicalForm("zero", UTMatrix.zero(3), Witness())
    elif a and not c:
        steps = (PsiStep(AutoParams(delta=a, epsilon=b)),)
        result = CanonicalForm("e12", UTMatrix.basis(3, 1, 2), Witness(steps))
    elif c and not a:
        steps = (ThetaStep(), PsiStep(AutoParams(delta=c, epsilon=b)))
        result = CanonicalForm("e12", UTMatrix.basis(3, 1, 2), Witness(steps))
    elif not a and not c:
        steps = (PsiStep(AutoParams(alpha=b)),)
        result = CanonicalForm("e13", UTMatrix.basis(3, 1, 3), Witness(steps))
    else:
        steps = (PsiStep(AutoParams(alpha=a * c, delta=a, epsilon=b)),)
        form = UTMatrix(3, {(1, 2): Fraction(1), (2, 3): Fraction(1)})
        result = CanonicalForm("e12+e23", form, Witness(steps))
    if result.witness.act_element(nil) != result.form:
        raise AssertionError("witness failed to certify the canonical form")
    return result


def canonicalize_idempotent(idem: UTMatrix) -> CanonicalForm:
    """Send a rank-1 or rank-2 idempotent of U_3 to its orbit form.

    Rank 1 lands on e11 or e22; rank 2 on e11+e22 or e11+e33.  The witness
    replays the constructive parameter choices and certifies the output.
    """
    if idem.n != 3:
        raise ValueError("canonical forms are specific to U_3")
    for value in idem.entries.values():
        if isinstance(value, MultiPoly):
            raise TypeError("rational entries required")
    if not idem.is_idempotent():
        raise ValueError("input is not idempotent")
    rank = idem.rank()
    if rank not in (1, 2):
        raise ValueError("rank must be 1 or 2")
    diag = [idem.entry(i, i) for i in (1, 2, 3)]
    e = lambda i, j: UTMatrix.basis(3, i, j)
    if rank == 1:
        if diag[0]:
            steps = (PsiStep(AutoParams(beta=idem.entry(1, 2),
                                        gamma=idem.entry(1, 3))),)
            result = CanonicalForm("e11", e(1, 1), Witness(steps))
        elif diag[1]:
            steps = (PsiStep(AutoParams(beta=-idem.entry(1, 2),
                                        epsilon=idem.entry(2, 3))),)
            result = CanonicalForm("e22", e(2, 2), Witness(steps))
        else:
            # flip: the e33 case lands back on the e11 case
            steps = (ThetaStep(),
                     PsiStep(AutoParams(beta=idem.entry(2, 3),
                                        gamma=idem.entry(1, 3))))
            result = CanonicalForm("e11", e(1, 1), Witness(steps))
    else:
        if diag[0] and diag[1]:
            steps = (PsiStep(AutoParams(gamma=idem.entry(1, 3),
                                        epsilon=idem.entry(2, 3))),)
            result = CanonicalForm("e11+e22", e(1, 1) + e(2, 2), Witness(steps))
        elif diag[0] and diag[2]:
            steps = (PsiStep(AutoParams(beta=idem.entry(1, 2),
                                        epsilon=-idem.entry(2, 3))),)
            result = CanonicalForm("e11+e33", e(1, 1) + e(3, 3), Witness(steps))
        else:
            # a22 = a33 = 1: flip to the a11 = a22 case
            steps = (ThetaStep(),
                     PsiStep(AutoParams(gamma=idem.entry(1, 3),
                                        epsilon=idem.entry(1, 2))))
            result = CanonicalForm("e11+e22", e(1, 1) + e(2, 2), Witness(steps))
    if result.witness.act_element(idem) != result.form:
        raise AssertionError("witness failed to certify the canonical form")
    return result


# -- conjugation search -------------------------------------------------------------


@dataclass
class ConjugationSearch:
    """Outcome of a conjugation-orbit search.

    ``status`` is one of ``found`` (with a replay-verified witness),
    ``disjoint`` (the constraint ideal is the unit ideal: no conjugation of
    the searched family exists, a certificate), or ``none`` (no rational
    witness found within the search budget).
    """

    status: str
    witness: Witness | None = None
    certificate: GroebnerBasis | None = None


_SEARCH_VARS = ("u_aux", "k_scale", "epsilon", "gamma", "beta", "delta", "alpha")
_TRIAL_VALUES = (Fraction(1), Fraction(0), Fraction(-1), Fraction(2),
                 Fraction(-2), Fraction(1, 2))


def _psi_columns_symbolic(table: VarTable, with_scale: bool):
    """Columns of psi over the unknowns, with 1/delta written via the auxiliary.

    The relation u * alpha * delta * k = 1 makes u*alpha*k an exact inverse
    of delta, so every entry stays polynomial.
    """
    a = table.var("alpha")
    b = table.var("beta")
    c = table.var("gamma")
    d = table.var("delta")
    e = table.var("epsilon")
    u = table.var("u_aux")
    k = table.var("k_scale") if with_scale else MultiPoly.const(table, 1)
    dinv = u * a * k
    one = MultiPoly.const(table, 1)
    m = lambda entries: UTMatrix(3, entries)
    return {
        (1, 1): m({(1, 1): one, (1, 2): b, (1, 3): c}),
        (1, 2): m({(1, 2): d, (1, 3): e}),
        (1, 3): m({(1, 3): a}),
        (2, 2): m({(1, 2): -b, (1, 3): -(b * e * dinv), (2, 2): one,
                   (2, 3): e * dinv}),
        (2, 3): m({(1, 3): -(a * b * dinv), (2, 3): a * dinv}),
        (3, 3): m({(1, 3): b * e * dinv - c, (2, 3): -(e * dinv), (3, 3): one}),
    }


def _rational_roots(coeffs):
    """Rational roots of a univariate polynomial given as {degree: Fraction}."""
    if not coeffs:
        return []
    max_deg = max(coeffs)
    dens = 1
    for c in coeffs.values():
        dens = dens * c.denominator // _gcd(dens, c.denominator)
    ints = {d: int(c * dens) for d, c in coeffs.items()}
    low = min(d for d, c in ints.items() if c)
    roots = []
    if low > 0:
        roots.append(Fraction(0))
        ints = {d - low: c for d, c in ints.items() if c}
    a0 = abs(ints.get(0, 0))
    an = abs(ints[max(ints)])
    if a0 == 0 or an == 0:
        return roots
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in roots:
                    continue
                if not sum(c * cand**d for d, c in ints.items()):
                    roots.append(cand)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(value, cap=200000):
    value = abs(value)
    if value > cap * cap:
        # entries this large do not occur in the searched systems; fall back
        # to small candidates only
        return [1, 2, 3, 5, value]
    out = []
    d = 1
    while d * d <= value:
        if value % d == 0:
            out.append(d)
            out.append(value // d)
        d += 1
    return sorted(set(out))


def _search_points(polys, table, idx, assignment, budget):
    """Back-substitute over the variables from last to first; yields dicts."""
    if budget[0] <= 0:
        return
    if idx < 0:
        if all(p.is_zero() for p in polys):
            yield dict(assignment)
        return
    name = table.names[idx]
    univariate = []
    rest = []
    for p in polys:
        if p.is_zero():
            continue
        vars_here = p.variables()
        if not vars_here:
            return  # nonzero constant: dead branch
        if vars_here == {name}:
            univariate.append(p)
        else:
            rest.append(p)
    if univariate:
        coeffs = {}
        smallest = min(univariate, key=lambda p: p.total_degree())
        pos = table.index[name]
        for mono, coeff in smallest.terms.items():
            coeffs[mono[pos]] = coeffs.get(mono[pos], Fraction(0)) + coeff
        candidates = [r for r in _rational_roots(coeffs)
                      if all(_eval_univariate(p, pos, r).is_zero()
                             for p in univariate)]
    else:
        candidates = list(_TRIAL_VALUES)
    for value in candidates:
        budget[0] -= 1
        if budget[0] <= 0:
            return
        substituted = [p.substitute({name: value}) for p in rest]
        assignment[name] = value
        yield from _search_points(substituted, table, idx - 1, assignment, budget)
        del assignment[name]


def _eval_univariate(p, pos, value):
    return p.substitute({p.table.names[pos]: value})


def find_conjugation(source: Operator, target: Operator,
                     allow_theta: bool = True, allow_scaling: bool = True,
                     limits: Limits | None = None,
                     budget: int = 4000) -> ConjugationSearch:
    """Search for psi (optionally composed with the flip) and a scalar k with

        conjugate(source, phi) = k * target.

    The constraint system ``R phi = k phi S`` is polynomial in the parameters
    once 1/delta is encoded through the auxiliary relation
    ``u * alpha * delta * k = 1`` (which also forces alpha, delta, k
    nonzero).  A rational witness point is extracted from the lex Groebner
    basis by triangular back-substitution and re-verified by replay; a basis
    equal to {1} certifies that no conjugation of the searched family exists.
    """
    if source.n != 3 or target.n != 3:
        raise ValueError("the search is specific to U_3")

    variants = [()]
    if allow_theta:
        variants.append((ThetaStep(),))
    outcomes = []
    for tail in variants:
        adjusted = target
        for step in tail:
            adjusted = conjugate_operator(adjusted, step.map())
        result = _psi_only_search(source, adjusted, allow_scaling, limits, budget)
        if result.status == "found":
            witness = Witness(result.witness.steps + tail, result.witness.scalar)
            if witness.transform_operator(source) == target:
                return ConjugationSearch("found", witness)
            result = ConjugationSearch("none")
        outcomes.append(result)
    if outcomes and all(r.status == "disjoint" for r in outcomes):
        return ConjugationSearch("disjoint", certificate=outcomes[0].certificate)
    return ConjugationSearch("none")


def _psi_only_search(source, target, allow_scaling, limits, budget):
    names = _SEARCH_VARS if allow_scaling else tuple(
        v for v in _SEARCH_VARS if v != "k_scale")
    param_names = tuple(source.params()) + tuple(
        p for p in target.params() if p not in source.params())
    table = VarTable(names + param_names)
    psi_cols = _psi_columns_symbolic(table, allow_scaling)
    k = table.var("k_scale") if allow_scaling else MultiPoly.const(table, 1)

    def lift(matrix: UTMatrix) -> UTMatrix:
        entries = {}
        for key, value in matrix.entries.items():
            if isinstance(value, MultiPoly):
                entries[key] = value.retable(table)
            else:
                entries[key] = MultiPoly.const(table, value)
        return UTMatrix(3, entries)

    gens = []
    n_unknown = len(names)
    for idx in basis_indices(3):
        lhs = _apply_lifted(source, psi_cols[idx], table)
        s_col = lift(target.image(idx))
        rhs = UTMatrix.zero(3)
        for pos, coeff in s_col.entries.items():
            rhs = rhs + psi_cols[pos].scale(coeff)
        rhs = rhs.scale(k)
        diff = lhs - rhs
        for value in diff.entries.values():
            if isinstance(value, Fraction):
                value = MultiPoly.const(table, value)
            # split by parameter monomials so the identity holds for every
            # parameter value, not just some
            buckets = {}
            for mono, coeff in value.terms.items():
                param_part = mono[n_unknown:]
                unknown_part = mono[:n_unknown] + (0,) * len(param_names)
                buckets.setdefault(param_part, {})[unknown_part] = coeff
            for terms in buckets.values():
                poly = MultiPoly(table, terms)
                if not poly.is_zero():
                    gens.append(poly)
    relation = table.var("u_aux") * table.var("alpha") * table.var("delta") * k - 1
    gens.append(relation)
    if param_names:
        # restrict to the unknown block: parameters were already split out
        unknown_table = VarTable(names)
        gens = [g.retable(unknown_table) for g in gens]
        table = unknown_table
    system = PolySystem(table, tuple(dict.fromkeys(gens)), lex())
    gb = buchberger(system, limits)
    if len(gb.basis) == 1 and gb.basis[0].is_constant():
        return ConjugationSearch("disjoint", certificate=gb)
    budget_box = [budget]
    for point in _search_points(list(gb.basis), table, len(table) - 1, {},
                                budget_box):
        try:
            params = AutoParams(alpha=point["alpha"], beta=point.get("beta", 0),
                                gamma=point.get("gamma", 0), delta=point["delta"],
                                epsilon=point.get("epsilon", 0))
        except (ValueError, KeyError):
            continue
        scalar = point.get("k_scale", Fraction(1))
        if not scalar:
            continue
        witness = Witness((PsiStep(params),), scalar)
        if witness.transform_operator(source) == target:
            return ConjugationSearch("found", witness)
    return ConjugationSearch("none")


def _apply_lifted(op: Operator, x: UTMatrix, table: VarTable) -> UTMatrix:
    """Apply an operator (possibly with parameter entries) to a matrix over `table`."""
    total = UTMatrix.zero(op.n)
    for idx, coeff in x.entries.items():
        image = op.columns.get(idx)
        if image is None:
            continue
        entries = {}
        for key, value in image.entries.items():
            value = value.retable(table) if isinstance(value, MultiPoly) \
                else MultiPoly.const(table, value)
            entries[key] = value * coeff
        total = total + UTMatrix(op.n, entries)
    return total
