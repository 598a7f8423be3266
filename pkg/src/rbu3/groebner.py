"""Buchberger's algorithm, reduced Groebner bases, and ideal membership.

The engine is deliberately plain: normal pair selection (minimal lcm degree,
then smallest pair index), the product and chain criteria, full normal-form
reduction, and monic auto-reduced output.  Two implementation notes:

* Auto-reduction to a fixpoint under a degree-compatible order is exactly
  Gaussian elimination on the monomial matrix, so every linear polynomial in
  the linear span of the current basis gets exposed and immediately
  substitutes itself into the rest.  The quadratic systems produced by the
  operator-coefficient ansatzes collapse dramatically under this cascade.
* Whenever an S-polynomial reduces to something with a linear leading term,
  the run restarts on the auto-reduced basis (same ideal, far fewer
  variables in play).  Restarts are bounded by the variable count.

Resource limits are explicit inputs; exceeding one raises
:class:`ResourceLimitExceeded` carrying the partial basis, never a wrong
answer.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import (MonomialOrder, MultiPoly, VarTable, grevlex,
                   elimination, mono_degree, mono_div, mono_divides,
                   mono_lcm, mono_mul, parse_poly)

__all__ = [
    "PolySystem",
    "GroebnerBasis",
    "Limits",
    "ResourceLimitExceeded",
    "s_polynomial",
    "normal_form",
    "autoreduce",
    "buchberger",
    "ideal_member",
    "eliminate",
]


class ResourceLimitExceeded(RuntimeError):
    """A limit was hit; carries the partial basis (still inside the ideal)."""

    def __init__(self, message: str, partial: list, stats: "GBStats"):
        super().__init__(message)
        self.partial = partial
        self.stats = stats


@dataclass
class Limits:
    max_pairs: int | None = None
    max_basis_size: int | None = None
    deadline: float | None = None  # wall-clock seconds for this invocation


@dataclass
class GBStats:
    pairs_considered: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    restarts: int = 0
    basis_size: int = 0

    def to_json(self):
        return {
            "pairs_considered": self.pairs_considered,
            "pairs_reduced": self.pairs_reduced,
            "zero_reductions": self.zero_reductions,
            "restarts": self.restarts,
            "basis_size": self.basis_size,
        }


@dataclass(frozen=True)
class PolySystem:
    """A finite generator list for an ideal, with its monomial order."""

    table: VarTable
    gens: tuple
    order: MonomialOrder = field(default_factory=grevlex)

    def __post_init__(self):
        for g in self.gens:
            if not isinstance(g, MultiPoly) or g.table != self.table:
                raise ValueError("generators must be polynomials over the shared table")
            if g.is_zero():
                raise ValueError("generators must be nonzero")

    @staticmethod
    def from_strings(var_names: Sequence[str], gen_texts: Sequence[str],
                     order: MonomialOrder | None = None) -> "PolySystem":
        table = VarTable(var_names)
        gens = tuple(parse_poly(t, table) for t in gen_texts)
        return PolySystem(table, gens, order or grevlex())

    def localize(self, q: MultiPoly, name: str = "u_inv") -> "PolySystem":
        """Adjoin ``name`` with relation ``name * q - 1`` (forces q invertible)."""
        if name in self.table.index:
            raise ValueError(f"variable {name!r} already present")
        table = VarTable(self.table.names + (name,))
        lifted = [g.retable(table) for g in self.gens]
        relation = table.var(name) * q.retable(table) - 1
        return PolySystem(table, tuple(lifted) + (relation,), self.order)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "vars": list(self.table.names),
            "order": self.order.to_json(),
            "gens": [g.to_str(self.order) for g in self.gens],
        }

    @staticmethod
    def from_json(data: dict) -> "PolySystem":
        table = VarTable(data["vars"])
        order = MonomialOrder.from_json(data.get("order", "grevlex"))
        gens = tuple(parse_poly(t, table) for t in data["gens"])
        return PolySystem(table, gens, order)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def load(path) -> "PolySystem":
        with open(path) as fh:
            return PolySystem.from_json(json.load(fh))


@dataclass
class GroebnerBasis:
    system: PolySystem
    basis: tuple
    reduced: bool
    stats: GBStats

    def contains(self, p: MultiPoly) -> bool:
        return normal_form(p, self.basis, self.system.order).is_zero()

    def verify(self) -> bool:
        """Recheck the defining properties (generators and S-pairs reduce to 0)."""
        order = self.system.order
        for g in self.system.gens:
            if not normal_form(g, self.basis, order).is_zero():
                return False
        m = len(self.basis)
        for i in range(m):
            for j in range(i + 1, m):
                s = s_polynomial(self.basis[i], self.basis[j], order)
                if not s.is_zero() and not normal_form(s, self.basis, order).is_zero():
                    return False
        if self.reduced:
            for i, g in enumerate(self.basis):
                _, lc = g.leading(order)
                if lc != 1:
                    return False
                for j, h in enumerate(self.basis):
                    if i == j:
                        continue
                    lm_h, _ = h.leading(order)
                    if any(mono_divides(lm_h, m) for m in g.terms):
                        return False
        return True

    def to_json(self) -> dict:
        data = self.system.to_json()
        data["basis"] = [g.to_str(self.system.order) for g in self.basis]
        data["reduced"] = self.reduced
        data["stats"] = self.stats.to_json()
        return data


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    """S(f,g) = (lcm/lt(f)) f - (lcm/lt(g)) g, built monically."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    lm_f, lc_f = f.leading(order)
    lm_g, lc_g = g.leading(order)
    l = mono_lcm(lm_f, lm_g)
    left = MultiPoly(f.table, {mono_div(l, lm_f): Fraction(1) / lc_f}) * f
    right = MultiPoly(g.table, {mono_div(l, lm_g): Fraction(1) / lc_g}) * g
    return left - right


def _sorted_view(basis: Sequence[MultiPoly], order: MonomialOrder):
    """Basis with cached leading data, sorted by leading monomial descending."""
    view = []
    for g in basis:
        lm, lc = g.leading(order)
        view.append((lm, lc, g))
    view.sort(key=lambda t: order.key(t[0]), reverse=True)
    return view


def _normal_form_view(p: MultiPoly, view, order: MonomialOrder) -> MultiPoly:
    if not view:
        return p
    work = dict(p.terms)
    remainder = {}
    key = order.key
    while work:
        mono = max(work, key=key)
        coeff = work.pop(mono)
        divisor = None
        for lm, lc, g in view:
            if mono_divides(lm, mono):
                divisor = (lm, lc, g)
                break
        if divisor is None:
            remainder[mono] = coeff
            continue
        lm, lc, g = divisor
        shift = mono_div(mono, lm)
        factor = coeff / lc
        for m2, c2 in g.terms.items():
            if m2 == lm:
                continue
            target = mono_mul(shift, m2)
            acc = work.get(target)
            if acc is None:
                acc = -factor * c2
            else:
                acc = acc - factor * c2
            if acc:
                work[target] = acc
            else:
                work.pop(target, None)
    return MultiPoly(p.table, remainder)


def normal_form(p: MultiPoly, basis: Sequence[MultiPoly],
                order: MonomialOrder | None = None) -> MultiPoly:
    """Remainder of multivariate division of p by the basis.

    Fully reduced: no term of the result is divisible by any leading
    monomial of the basis, and ``p - result`` lies in the ideal the basis
    generates.  Divisor choice is the first element in descending
    leading-monomial order, which makes the result deterministic.
    """
    order = order or grevlex()
    view = _sorted_view([g for g in basis if not g.is_zero()], order)
    return _normal_form_view(p, view, order)


def autoreduce(polys: Iterable[MultiPoly],
               order: MonomialOrder | None = None) -> list:
    """Reduce a set against itself to a fixpoint; output is monic.

    Under a degree-compatible order the fixpoint is the reduced row-echelon
    form of the coefficient matrix, so all linear consequences in the span
    become explicit basis elements.
    """
    order = order or grevlex()
    current = [p for p in polys if not p.is_zero()]
    changed = True
    while changed:
        changed = False
        nxt = []
        for i, p in enumerate(current):
            others = nxt + current[i + 1:]
            r = normal_form(p, others, order)
            if r.is_zero():
                changed = True
                continue
            r = r.monic(order)
            if r != p:
                changed = True
            nxt.append(r)
        current = nxt
    current.sort(key=lambda g: order.key(g.leading(order)[0]), reverse=True)
    return current


def buchberger(system: PolySystem, limits: Limits | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the input ideal under the system's order.

    Deterministic for identical input: normal selection strategy (minimal
    lcm degree, then lexicographically smallest pair index), tie-broken by
    insertion order.
    """
    import heapq

    limits = limits or Limits()
    order = system.order
    stats = GBStats()
    start = time.monotonic()

    basis = autoreduce(system.gens, order)
    max_restarts = len(system.table) + 4

    def check_limits():
        if limits.max_pairs is not None and stats.pairs_considered > limits.max_pairs:
            raise ResourceLimitExceeded(
                f"resource limit: more than {limits.max_pairs} pairs",
                list(basis), stats)
        if limits.max_basis_size is not None and len(basis) > limits.max_basis_size:
            raise ResourceLimitExceeded(
                f"resource limit: basis larger than {limits.max_basis_size}",
                list(basis), stats)
        if limits.deadline is not None and time.monotonic() - start > limits.deadline:
            raise ResourceLimitExceeded("resource limit: deadline exceeded",
                                        list(basis), stats)

    while True:  # each iteration is one (re)start on an autoreduced basis
        leads = [g.leading(order)[0] for g in basis]
        view = _sorted_view(basis, order)
        heap = []
        for j in range(len(basis)):
            for i in range(j):
                l = mono_lcm(leads[i], leads[j])
                heapq.heappush(heap, (mono_degree(l), i, j))
        completed = set()
        restart = False

        while heap:
            stats.pairs_considered += 1
            check_limits()
            _, i, j = heapq.heappop(heap)
            l = mono_lcm(leads[i], leads[j])
            # product criterion: coprime leading monomials
            if l == mono_mul(leads[i], leads[j]):
                completed.add((i, j))
                continue
            # chain criterion (conservative: both companion pairs fully treated)
            skipped = False
            for k in range(len(basis)):
                if k in (i, j):
                    continue
                if not mono_divides(leads[k], l):
                    continue
                p1 = (min(i, k), max(i, k))
                p2 = (min(j, k), max(j, k))
                if p1 in completed and p2 in completed:
                    skipped = True
                    break
            if skipped:
                completed.add((i, j))
                continue
            s = s_polynomial(basis[i], basis[j], order)
            h = _normal_form_view(s, view, order)
            stats.pairs_reduced += 1
            completed.add((i, j))
            if h.is_zero():
                stats.zero_reductions += 1
                continue
            h = h.monic(order)
            basis.append(h)
            lm_h = h.leading(order)[0]
            leads.append(lm_h)
            view = _sorted_view(basis, order)
            new_index = len(basis) - 1
            for k in range(new_index):
                l = mono_lcm(leads[k], lm_h)
                heapq.heappush(heap, (mono_degree(l), k, new_index))
            if h.total_degree() <= 1 and stats.restarts < max_restarts:
                stats.restarts += 1
                basis = autoreduce(basis, order)
                restart = True
                break
        if not restart:
            break

    # minimalize then tail-reduce: the unique reduced basis for this order
    basis.sort(key=lambda g: order.key(g.leading(order)[0]))
    minimal = []
    leads_done = []
    for g in basis:
        lm = g.leading(order)[0]
        if any(mono_divides(other, lm) for other in leads_done):
            continue
        minimal.append(g)
        leads_done.append(lm)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = normal_form(g, others, order)
        if not r.is_zero():
            reduced.append(r.monic(order))
    reduced.sort(key=lambda g: order.key(g.leading(order)[0]), reverse=True)
    stats.basis_size = len(reduced)
    return GroebnerBasis(system, tuple(reduced), True, stats)


def ideal_member(p: MultiPoly, gb: GroebnerBasis) -> bool:
    """True iff p lies in the ideal (zero normal form against the basis)."""
    return gb.contains(p)


def eliminate(system: PolySystem, keep: Iterable[str],
              limits: Limits | None = None) -> PolySystem:
    """Generators of the elimination ideal keeping only ``keep`` variables.

    Computed with a block elimination order (dropped variables above kept
    ones) and filtering of the resulting basis.
    """
    keep = list(keep)
    for name in keep:
        if name not in system.table.index:
            raise ValueError(f"unknown variable {name!r}")
    keep_set = set(keep)
    dropped = [v for v in system.table.names if v not in keep_set]
    kept = [v for v in system.table.names if v in keep_set]
    if not dropped:
        return system
    perm_table = VarTable(dropped + kept)
    reordered = PolySystem(
        perm_table,
        tuple(g.retable(perm_table) for g in system.gens),
        elimination(len(dropped)),
    )
    gb = buchberger(reordered, limits)
    kept_table = VarTable(kept)
    kept_gens = []
    block = len(dropped)
    for g in gb.basis:
        if all(not any(m[:block]) for m in g.terms):
            kept_gens.append(g.retable(kept_table))
    return PolySystem(kept_table, tuple(kept_gens), grevlex())
