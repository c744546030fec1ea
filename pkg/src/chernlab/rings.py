"""Presented rings R = k[x_1..x_e]/a and their ideals.

Lengths and multiplicities are taken at the maximal ideal m generated by
all variables. Every ideal fed to a length computation is first checked
to be m-primary, which makes the global vector-space count equal to the
local length.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Sequence

from . import monomial
from .core import MonomialOrder, Polynomial, PolyRing
from .errors import ContextError, DomainError, GenericityError, PreconditionError
from .groebner import (
    GroebnerBasis,
    ModuleOrder,
    buchberger_elems,
    elem_mul_poly,
    elem_to_poly,
    groebner_from_elems,
    poly_to_elem,
    reduce_elem,
)


class PresentedRing:
    """k[variables]/(relations), graded by the ambient weights."""

    def __init__(self, ambient: PolyRing, relations: Iterable[Polynomial] = (), name: str = ""):
        self.ambient = ambient
        self.relations = tuple(r for r in relations if not r.is_zero())
        for r in self.relations:
            if r.ring != ambient:
                raise ContextError("relation from a different polynomial ring")
        self.name = name
        self.order = ModuleOrder(ambient, 1)
        elems = buchberger_elems([poly_to_elem(r) for r in self.relations], self.order)
        self.gb = GroebnerBasis(ambient, self.order, tuple(elems))
        if self.gb.is_unit():
            raise DomainError("the defining ideal is the unit ideal")

    @classmethod
    def polynomial_ring(cls, variables, field=None, weights=None, name=""):
        return cls(PolyRing(variables, field, weights=weights), (), name)

    @classmethod
    def from_strings(cls, variables, relations: Sequence[str] = (), field=None,
                     weights=None, name=""):
        ring = PolyRing(variables, field, weights=weights)
        return cls(ring, [ring.parse(r) for r in relations], name)

    def __repr__(self):
        rel = ", ".join(str(r) for r in self.relations) or "0"
        return f"PresentedRing({', '.join(self.ambient.variables)} / ({rel}))"

    def __eq__(self, other):
        return (isinstance(other, PresentedRing) and self.ambient == other.ambient
                and self.gb == other.gb)

    def __hash__(self):
        return hash((self.ambient, self.gb))

    # ---- basic data
    @property
    def field(self):
        return self.ambient.field

    @property
    def variables(self):
        return self.ambient.variables

    @property
    def nvars(self):
        return self.ambient.nvars

    @property
    def is_polynomial_ring(self) -> bool:
        return not self.gb.elems

    def var(self, name) -> Polynomial:
        return self.ambient.var(name)

    def parse(self, text: str) -> Polynomial:
        return self.ambient.parse(text)

    def is_homogeneous(self) -> bool:
        return all(r.is_homogeneous() for r in self.gb.elements())

    def has_monomial_relations(self) -> bool:
        return all(len(r) == 1 for r in self.gb.elements())

    @cached_property
    def dim(self) -> int:
        return monomial.independent_set_dim(self.gb.initial_ideals()[0], self.nvars)

    def krull_dim(self) -> int:
        return self.dim

    def reduce(self, f: Polynomial) -> Polynomial:
        return elem_to_poly(self.gb.reduce(poly_to_elem(f)), self.ambient)

    def ideal(self, gens: Iterable[Polynomial | str]) -> "RingIdeal":
        gens = [self.parse(g) if isinstance(g, str) else g for g in gens]
        return RingIdeal(self, gens)

    def maximal_ideal(self) -> "RingIdeal":
        return RingIdeal(self, self.ambient.gens())

    def unit_ideal(self) -> "RingIdeal":
        return RingIdeal(self, [self.ambient.one()])

    def quotient(self, extra: Iterable[Polynomial], name: str = "") -> "PresentedRing":
        return PresentedRing(self.ambient, list(self.relations) + list(extra), name)

    def defining_ideal(self) -> "RingIdeal":
        return RingIdeal(self, [])


class RingIdeal:
    """An ideal of a PresentedRing given by representatives in the ambient ring."""

    def __init__(self, ring: PresentedRing, gens: Iterable[Polynomial]):
        self.ring = ring
        self.gens = tuple(gens)
        for g in self.gens:
            if g.ring != ring.ambient:
                raise ContextError("generator from a different ring")

    def __repr__(self):
        return f"RingIdeal({', '.join(str(g) for g in self.gens)})"

    @cached_property
    def gb(self) -> GroebnerBasis:
        """Reduced Groebner basis of gens + a in the ambient ring."""
        base = self.ring.gb
        if not self.gens:
            return base
        return base.extend([poly_to_elem(g) for g in self.gens])

    @property
    def ambient(self) -> PolyRing:
        return self.ring.ambient

    def _same(self, other: "RingIdeal"):
        if other.ring != self.ring:
            raise ContextError("ideals of different rings")

    def contains(self, f: Polynomial) -> bool:
        return not self.gb.reduce(poly_to_elem(f))

    def reduce(self, f: Polynomial) -> Polynomial:
        return elem_to_poly(self.gb.reduce(poly_to_elem(f)), self.ambient)

    def issubset(self, other: "RingIdeal") -> bool:
        self._same(other)
        return all(other.contains(g) for g in self.gb.elements())

    def __eq__(self, other):
        return isinstance(other, RingIdeal) and other.ring == self.ring and self.gb == other.gb

    def __hash__(self):
        return hash(self.gb)

    def is_unit(self) -> bool:
        return self.gb.is_unit()

    def is_zero(self) -> bool:
        return self.gb == self.ring.gb

    def is_monomial(self) -> bool:
        return all(len(g) == 1 for g in self.gb.elements())

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def initial_exponents(self) -> list[tuple]:
        return self.gb.initial_ideals()[0]

    def minimal_generators(self) -> list[Polynomial]:
        """Generators with the redundant ones (modulo a) removed greedily."""
        kept: list[Polynomial] = []
        for g in self.gens:
            if not self.ring.ideal(kept).contains(g):
                kept.append(g)
        return kept

    # ---- arithmetic
    def __add__(self, other: "RingIdeal") -> "RingIdeal":
        self._same(other)
        return RingIdeal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "RingIdeal") -> "RingIdeal":
        self._same(other)
        norm = self.ring.order.norm
        prods = []
        for f in self.gens:
            for g in other.gens:
                r = self.ring.gb.reduce(elem_mul_poly(poly_to_elem(f), poly_to_elem(g), norm))
                if r:
                    prods.append(elem_to_poly(r, self.ambient))
        return RingIdeal(self.ring, prods)

    def times_gb(self, other: "RingIdeal") -> "RingIdeal":
        """self * other using other's Groebner basis as its generating set."""
        norm = self.ring.order.norm
        base = self.ring.gb
        prods = []
        for g in other.gb.elems:
            if not base.reduce(g):
                continue
            for f in self.gens:
                r = base.reduce(elem_mul_poly(poly_to_elem(f), g, norm))
                if r:
                    prods.append(elem_to_poly(r, self.ambient))
        return RingIdeal(self.ring, prods)

    def power(self, n: int) -> "RingIdeal":
        if n < 0:
            raise DomainError("negative ideal power")
        if n == 0:
            return self.ring.unit_ideal()
        result = self
        for _ in range(n - 1):
            result = self.times_gb(result)
        return result

    def colon_element(self, g: Polynomial) -> "RingIdeal":
        """(self + a) : g."""
        ring = self.ambient
        order = ModuleOrder(ring, 2, (0, 0), "pot")
        zero = (0,) * ring.nvars
        gens = [{**{(0,) + e: c for e, c in g.items()}, (1,) + zero: 1}]
        gens += [{(0,) + m[1:]: c for m, c in el.items()} for el in self.gb.elems]
        gb = buchberger_elems(gens, order)
        out = [elem_to_poly(el, ring) for el in gb if all(m[0] == 1 for m in el)]
        return RingIdeal(self.ring, out)

    def colon(self, other: "RingIdeal") -> "RingIdeal":
        self._same(other)
        result = None
        for g in other.gens:
            if self.contains(g):
                continue
            q = self.colon_element(g)
            result = q if result is None else result.intersect(q)
        return result if result is not None else self.ring.unit_ideal()

    def intersect(self, other: "RingIdeal") -> "RingIdeal":
        self._same(other)
        ring = self.ambient
        order = ModuleOrder(ring, 2, (0, 0), "pot")
        gens = []
        for el in self.gb.elems:
            gens.append({**{(0,) + m[1:]: c for m, c in el.items()},
                         **{(1,) + m[1:]: c for m, c in el.items()}})
        for el in other.gb.elems:
            gens.append({(0,) + m[1:]: c for m, c in el.items()})
        gb = buchberger_elems(gens, order)
        out = [elem_to_poly(el, ring) for el in gb if all(m[0] == 1 for m in el)]
        return RingIdeal(self.ring, out)

    def saturation(self, other: "RingIdeal | None" = None) -> "RingIdeal":
        """self : other^infinity (default other = m)."""
        other = other or self.ring.maximal_ideal()
        current = self
        while True:
            nxt = current.colon(other)
            if nxt == current:
                return current
            current = nxt

    # ---- finiteness, length, dimension
    def colength(self) -> int | None:
        """dim_k of ambient/(gens + a); None when infinite."""
        return monomial.colength(self.initial_exponents(), self.ring.nvars)

    def dim(self) -> int:
        """Krull dimension of R/I (-1 for the unit ideal)."""
        gens = self.initial_exponents()
        return monomial.independent_set_dim(gens, self.ring.nvars)

    def is_m_primary(self, power_bound: int | None = None) -> bool:
        """sqrt(I + a) contains every variable and V(I + a) is the origin."""
        if self.is_unit():
            return False
        total = self.colength()
        if total is None:
            return False
        if power_bound is None:
            maxdeg = max([g.degree() for g in self.gens] + [1])
            power_bound = 2 * maxdeg * self.ring.nvars
        ring = self.ambient
        norm = self.ring.order.norm
        for i in range(ring.nvars):
            v = poly_to_elem(ring.var(i))
            cur = self.gb.reduce(v)
            for _ in range(power_bound):
                if not cur:
                    break
                cur = self.gb.reduce(elem_mul_poly(cur, v, norm))
            if cur and not radical_member(ring.var(i), self):
                return False
        return True

    def length(self) -> int:
        """lambda(R/I); requires I to be m-primary."""
        if not self.is_m_primary():
            raise PreconditionError("length requested for an ideal that is not m-primary")
        return self.colength()


def radical_member(f: Polynomial, ideal: RingIdeal) -> bool:
    """f in sqrt(ideal + a), by the Rabinowitsch trick: 1 in (ideal + a, 1 - t f)."""
    ring = ideal.ambient
    names = list(ring.variables)
    t = "t_rab"
    while t in names:
        t += "_"
    big = PolyRing(names + [t], ring.field, weights=ring.weights + (1,))
    pos = list(range(ring.nvars))
    gens = [g.map_to(big, pos) for g in list(ideal.gens) + list(ideal.ring.relations)]
    gens.append(big.one() - big.var(t) * f.map_to(big, pos))
    order = ModuleOrder(big, 1)
    gb = GroebnerBasis(big, order, tuple(buchberger_elems([poly_to_elem(g) for g in gens], order)))
    return gb.is_unit()


def ideal_ops(I: RingIdeal, J: RingIdeal | None, op: str, n: int | None = None) -> RingIdeal:
    if op == "sum":
        return I + J
    if op == "product":
        return I * J
    if op == "power":
        return I.power(n)
    if op == "colon":
        return I.colon(J)
    if op == "intersect":
        return I.intersect(J)
    raise DomainError(f"unknown ideal operation {op!r}")


def is_m_primary(I: RingIdeal) -> bool:
    return I.is_m_primary()


def length(R: PresentedRing, I: RingIdeal) -> int:
    if I.ring != R:
        raise ContextError("ideal of a different ring")
    return I.length()


def krull_dim(R: PresentedRing) -> int:
    return R.dim


# ---------------------------------------------------------------------------
# Jacobian ideal


def determinant(mat: list[list[Polynomial]]) -> Polynomial:
    n = len(mat)
    if n == 0:
        raise DomainError("empty matrix")
    cache: dict = {}

    def det(rows: tuple, cols: tuple):
        if len(rows) == 1:
            return mat[rows[0]][cols[0]]
        key = (rows, cols)
        if key in cache:
            return cache[key]
        r0 = rows[0]
        total = None
        for k, c in enumerate(cols):
            a = mat[r0][c]
            if a.is_zero():
                continue
            sub = det(rows[1:], cols[:k] + cols[k + 1:])
            term = a * sub
            if k % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = mat[r0][cols[0]].ring.zero()
        cache[key] = total
        return total

    return det(tuple(range(n)), tuple(range(n)))


def minors(mat: list[list[Polynomial]], size: int) -> list[Polynomial]:
    rows, cols = len(mat), len(mat[0]) if mat else 0
    out = []
    for rs in combinations(range(rows), size):
        for cs in combinations(range(cols), size):
            d = determinant([[mat[r][c] for c in cs] for r in rs])
            if not d.is_zero():
                out.append(d)
    return out


def jacobian_ideal(R: PresentedRing) -> RingIdeal:
    """Ideal of (e - d)-minors of the Jacobian matrix of the relations, in R."""
    e, d = R.nvars, R.dim
    c = e - d
    if c == 0:
        return R.unit_ideal()
    rels = list(R.relations)
    if len(rels) < c:
        return R.ideal([])
    mat = [[h.diff(j) for j in range(e)] for h in rels]
    return R.ideal(minors(mat, c))


# ---------------------------------------------------------------------------
# random reductions


def random_combination(gens: Sequence[Polynomial], rng: random.Random) -> Polynomial:
    ring = gens[0].ring
    total = ring.zero()
    for g in gens:
        total = total + g.scale(ring.field.random(rng, nonzero=True))
    return total


@dataclass
class ReductionOutcome:
    ring: PresentedRing
    elements: list[Polynomial]
    checked: dict = field(default_factory=dict)
    retries: int = 0
    verified: bool = True
    source_dim: int = 0

    def as_dict(self) -> dict:
        return {
            "elements": [str(f) for f in self.elements],
            "checked": {k: [str(a), str(b)] for k, (a, b) in self.checked.items()},
            "retries": str(self.retries),
            "verified": self.verified,
            "dim_before": str(self.source_dim),
            "dim_after": str(self.ring.dim),
        }


def _default_coefficients(R: PresentedRing, I: RingIdeal):
    from .hilbert import hilbert_coefficients
    return hilbert_coefficients(R, I).e


def random_superficial_reduction(R: PresentedRing, I: RingIdeal, count: int, seed=None,
                                 budget: int = 10,
                                 coefficients: Callable | None = None) -> ReductionOutcome:
    """Quotient of R by ``count`` random combinations of the generators of I.

    Accepted when the dimension drops by exactly ``count`` and e_0..e_{d-count-1}
    of I agree before and after (the coefficients a superficial sequence preserves).
    """
    if count == 0:
        return ReductionOutcome(R, [], {}, 0, True, R.dim)
    d = R.dim
    if count > d:
        raise DomainError("more reducing elements than the dimension")
    if not I.is_m_primary():
        raise PreconditionError("superficial reduction needs an m-primary ideal")
    coefficients = coefficients or _default_coefficients
    rng = random.Random(seed)
    before = coefficients(R, I) if count < d else None
    keep = d - count   # number of coefficients guaranteed to be preserved
    for attempt in range(budget):
        elems = [random_combination(I.gens, rng) for _ in range(count)]
        Rp = R.quotient(elems, name=f"{R.name}/x" if R.name else "")
        if Rp.dim != d - count:
            continue
        checked = {}
        if before is not None:
            Ip = RingIdeal(Rp, I.gens)
            after = coefficients(Rp, Ip)
            ok = True
            for i in range(keep):
                checked[f"e{i}"] = (before[i], after[i])
                ok &= before[i] == after[i]
            if not ok:
                continue
        return ReductionOutcome(Rp, elems, checked, attempt, True, d)
    raise GenericityError(f"no acceptable reduction after {budget} attempts")


def minimal_reduction_candidate(R: PresentedRing, I: RingIdeal, seed=None, budget: int = 10,
                                coefficients: Callable | None = None,
                                randomize: bool = False) -> RingIdeal:
    """d random combinations of the generators of I with e_0 equal to e_0(I).

    When I already has d generators it is returned unchanged unless
    ``randomize`` is set.
    """
    d = R.dim
    if not I.is_m_primary():
        raise PreconditionError("minimal reduction needs an m-primary ideal")
    if len(I.gens) == d and not randomize:
        I.retries = 0
        return I
    coefficients = coefficients or _default_coefficients
    target = coefficients(R, I)[0]
    rng = random.Random(seed)
    for attempt in range(budget):
        J = R.ideal([random_combination(I.gens, rng) for _ in range(d)])
        if J.is_m_primary() and coefficients(R, J)[0] == target:
            J.retries = attempt
            return J
    raise GenericityError(f"no minimal reduction found after {budget} attempts")
