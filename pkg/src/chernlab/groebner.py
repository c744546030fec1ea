"""Buchberger's algorithm for ideals and submodules of free modules.

Internally every element is a dict mapping a flattened monomial
``(component, e_1, ..., e_n)`` to a nonzero coefficient, so ideals are
simply rank-one submodules. Ring monomials used as multipliers carry a
zero component slot, which lets ``map(add, ...)`` implement the module
action directly.

The public surface is :class:`GroebnerBasis`, :func:`buchberger`,
:func:`normal_form`, :func:`syzygies`, :func:`kernel` and
:func:`ring_map_kernel`.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field as dc_field
from operator import add, le, sub
from typing import Sequence

from .core import MonomialOrder, Polynomial, PolyRing, VectorPolynomial
from .errors import ContextError, DomainError, ResourceError

DEFAULT_MAX_DEGREE = 60


def max_degree() -> int:
    """Working degree guard; CHERNLAB_MAXDEG overrides the default."""
    val = os.environ.get("CHERNLAB_MAXDEG")
    return int(val) if val else DEFAULT_MAX_DEGREE


class _Cache(dict):
    def __init__(self, fn):
        super().__init__()
        self.fn = fn

    def __missing__(self, mon):
        v = self[mon] = self.fn(mon)
        return v


class ModuleOrder:
    """A term order on S^rank built from the ring's monomial order.

    ``position='top'`` compares (shifted) degree and ring monomial first,
    then the component (lower index wins); ``'pot'`` compares components
    first, so components 0.. dominate and elimination of leading blocks
    of components is automatic.
    """

    def __init__(self, ring: PolyRing, rank: int = 1, shifts: Sequence[int] | None = None,
                 position: str = "top"):
        if position not in ("top", "pot"):
            raise DomainError(f"unknown module order {position!r}")
        self.ring = ring
        self.rank = rank
        self.shifts = tuple(shifts) if shifts is not None else (0,) * rank
        if len(self.shifts) != rank:
            raise ContextError("one degree shift per component required")
        self.position = position
        rkey = ring.key
        w = ring.weights
        shifts_ = self.shifts
        degree_first = ring.order.degree_first

        if position == "pot":
            def key(mon):
                return (-mon[0],) + tuple(rkey(mon[1:]))
        elif degree_first:
            def key(mon):
                k = rkey(mon[1:])
                return (k[0] + shifts_[mon[0]],) + k[1:] + (-mon[0],)
        else:
            def key(mon):
                return tuple(rkey(mon[1:])) + (-mon[0],)

        self.key = _Cache(key)
        self.negkey = _Cache(lambda mon: tuple(-x for x in self.key[mon]))
        self.deg = _Cache(lambda mon: sum(a * b for a, b in zip(w, mon[1:])) + shifts_[mon[0]])
        f = ring.field
        if f.is_prime_field:
            p = f.p
            self.norm = lambda x: x % p
        else:
            self.norm = f.norm
        self.inv = f.inv

    def __eq__(self, other):
        return (isinstance(other, ModuleOrder) and self.ring == other.ring
                and self.rank == other.rank and self.shifts == other.shifts
                and self.position == other.position)

    def __hash__(self):
        return hash((self.ring, self.rank, self.shifts, self.position))

    def leading(self, f: dict):
        return max(f, key=self.key.__getitem__)


# ---------------------------------------------------------------------------
# conversions


def poly_to_elem(f: Polynomial, comp: int = 0) -> dict:
    return {(comp,) + e: c for e, c in f.items()}


def vec_to_elem(v: VectorPolynomial) -> dict:
    return {(comp,) + e: c for (comp, e), c in v.items()}


def elem_to_poly(elem: dict, ring: PolyRing) -> Polynomial:
    return Polynomial(ring, {m[1:]: c for m, c in elem.items()})


def elem_to_vec(elem: dict, ring: PolyRing, rank: int, shifts=None) -> VectorPolynomial:
    return VectorPolynomial(ring, rank, {(m[0], m[1:]): c for m, c in elem.items()}, shifts)


def elem_mul_poly(elem: dict, f: dict, norm) -> dict:
    """Multiply a module element by a ring element (both as flattened dicts)."""
    out: dict = {}
    for m1, c1 in elem.items():
        for m2, c2 in f.items():
            m = tuple(map(add, m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: v for m, v in ((m, norm(c)) for m, c in out.items()) if v}


def elem_add(a: dict, b: dict, norm, scale=1) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = norm(out.get(m, 0) + scale * c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


# ---------------------------------------------------------------------------
# reduction


def _find_reducer(m, basis):
    c0 = m[0]
    for lm, g in basis:
        if lm[0] == c0 and all(map(le, lm, m)):
            return lm, g
    return None


def reduce_elem(f: dict, basis: list, order: ModuleOrder) -> dict:
    """Full reduction of f by ``basis`` (list of (leading monomial, monic element))."""
    if not f or not basis:
        return dict(f)
    norm = order.norm
    negkey = order.negkey
    f = dict(f)
    heap = [(negkey[m], m) for m in f]
    heapq.heapify(heap)
    rem = {}
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        m = pop(heap)[1]
        c = f.pop(m, None)
        if c is None:
            continue
        red = _find_reducer(m, basis)
        if red is None:
            rem[m] = c
            continue
        lm, g = red
        q = tuple(map(sub, m, lm))
        for gm, gc in g.items():
            if gm == lm:
                continue
            nm = tuple(map(add, gm, q))
            old = f.get(nm)
            if old is None:
                f[nm] = norm(-c * gc)
                push(heap, (negkey[nm], nm))
            else:
                v = norm(old - c * gc)
                if v:
                    f[nm] = v
                else:
                    del f[nm]
    return rem


def _monic(f: dict, order: ModuleOrder):
    lm = order.leading(f)
    c = f[lm]
    if c == 1:
        return lm, f
    ci = order.inv(c)
    norm = order.norm
    return lm, {m: norm(v * ci) for m, v in f.items()}


def _spoly(f, lmf, g, lmg, lcm):
    # both monic
    qf = tuple(map(sub, lcm, lmf))
    qg = tuple(map(sub, lcm, lmg))
    out = {}
    for m, c in f.items():
        if m != lmf:
            out[tuple(map(add, m, qf))] = c
    for m, c in g.items():
        if m != lmg:
            nm = tuple(map(add, m, qg))
            out[nm] = out.get(nm, 0) - c
    return out


def _lcm(a, b):
    return tuple(map(max, a, b))


def _divides(a, b):
    return a[0] == b[0] and all(map(le, a, b))


def _coprime(a, b):
    return not any(x and y for x, y in zip(a[1:], b[1:]))


# ---------------------------------------------------------------------------
# Buchberger


def buchberger_elems(gens: list[dict], order: ModuleOrder, known: list[dict] | None = None,
                     maxdeg: int | None = None) -> list[dict]:
    """Reduced Groebner basis of the submodule generated by ``gens`` (+ ``known``).

    ``known`` must already be a reduced Groebner basis; pairs among its
    elements are skipped. Output is sorted by increasing leading monomial.
    """
    maxdeg = max_degree() if maxdeg is None else maxdeg
    norm = order.norm
    key = order.key
    deg = order.deg
    is_ideal = order.rank == 1
    elems: list[tuple] = []   # (lm, elem)
    active: list[int] = []
    pairs: dict = {}
    heap: list = []

    def basis():
        return [elems[i] for i in active]

    def update(h_idx):
        lmh = elems[h_idx][0]
        cand = [i for i in active if elems[i][0][0] == lmh[0]]
        lcms = {i: _lcm(lmh, elems[i][0]) for i in cand}
        C = list(cand)
        D = []
        while C:
            i = C.pop()
            li = lcms[i]
            if (is_ideal and _coprime(lmh, elems[i][0])) or not any(
                    all(map(le, lcms[j], li)) for j in C + D):
                D.append(i)
        E = [i for i in D if not (is_ideal and _coprime(lmh, elems[i][0]))]
        for (i, j), l in list(pairs.items()):
            if all(map(le, lmh, l)) and l[0] == lmh[0]:
                if _lcm(elems[i][0], lmh) != l and _lcm(elems[j][0], lmh) != l:
                    del pairs[(i, j)]
        for i in E:
            l = lcms[i]
            pairs[(i, h_idx)] = l
            heapq.heappush(heap, (deg[l], key[l], i, h_idx))
        active[:] = [i for i in active if not all(map(le, lmh, elems[i][0]))
                     or elems[i][0][0] != lmh[0]]
        active.append(h_idx)

    for g in known or []:
        if g:
            elems.append(_monic(g, order))
            active.append(len(elems) - 1)

    prepared = [dict(g) for g in gens if g]
    prepared.sort(key=lambda g: key[order.leading(g)])
    for g in prepared:
        r = reduce_elem(g, basis(), order)
        if r:
            elems.append(_monic(r, order))
            update(len(elems) - 1)

    while heap:
        d, _, i, j = heapq.heappop(heap)
        l = pairs.pop((i, j), None)
        if l is None:
            continue
        if d > maxdeg:
            raise ResourceError(f"Groebner computation exceeded working degree {maxdeg}")
        (lmi, gi), (lmj, gj) = elems[i], elems[j]
        s = _spoly(gi, lmi, gj, lmj, l)
        s = {m: v for m, v in ((m, norm(c)) for m, c in s.items()) if v}
        r = reduce_elem(s, basis(), order)
        if r:
            elems.append(_monic(r, order))
            update(len(elems) - 1)

    final = [elems[i] for i in active]
    reduced = []
    for k, (lm, g) in enumerate(final):
        others = final[:k] + final[k + 1:]
        tail = {m: c for m, c in g.items() if m != lm}
        tail = reduce_elem(tail, others, order)
        tail[lm] = 1
        reduced.append((lm, tail))
    reduced.sort(key=lambda t: key[t[0]])
    return [g for _, g in reduced]


def _basis_pairs(gb: list[dict], order: ModuleOrder) -> list:
    return [(order.leading(g), g) for g in gb]


# ---------------------------------------------------------------------------
# public objects


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis of an ideal (rank 1) or a submodule of S^rank."""

    ring: PolyRing
    order: ModuleOrder
    elems: tuple
    reduced: bool = True
    _pairs: list = dc_field(default=None, compare=False, repr=False)

    @property
    def rank(self):
        return self.order.rank

    @property
    def is_ideal(self) -> bool:
        return self.order.rank == 1

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elements())

    def pairs(self):
        if self._pairs is None:
            object.__setattr__(self, "_pairs", _basis_pairs(list(self.elems), self.order))
        return self._pairs

    def elements(self) -> list:
        if self.is_ideal:
            return [elem_to_poly(g, self.ring) for g in self.elems]
        return [elem_to_vec(g, self.ring, self.rank, self.order.shifts) for g in self.elems]

    def leading_monomials(self) -> list[tuple]:
        """Flattened (component, exponents...) leading monomials."""
        return [lm for lm, _ in self.pairs()]

    def initial_ideals(self) -> list[list[tuple]]:
        """Per component, the exponent vectors generating the initial submodule."""
        out = [[] for _ in range(self.rank)]
        for lm in self.leading_monomials():
            out[lm[0]].append(lm[1:])
        return out

    def is_unit(self) -> bool:
        """Whole free module (for ideals: the unit ideal)."""
        return all(any(not any(e) for e in comp) for comp in self.initial_ideals())

    def reduce(self, elem: dict) -> dict:
        return reduce_elem(elem, self.pairs(), self.order)

    def contains_elem(self, elem: dict) -> bool:
        return not self.reduce(elem)

    def contains(self, f) -> bool:
        return normal_form(f, self).is_zero()

    def extend(self, gens: list[dict]) -> "GroebnerBasis":
        return GroebnerBasis(self.ring, self.order,
                             tuple(buchberger_elems(gens, self.order, known=list(self.elems))))

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.order == other.order
                and [sorted(g.items()) for g in self.elems]
                == [sorted(g.items()) for g in other.elems])

    def __hash__(self):
        return hash((self.order, tuple(frozenset(g.items()) for g in self.elems)))


def groebner_from_elems(gens: list[dict], order: ModuleOrder) -> GroebnerBasis:
    return GroebnerBasis(order.ring, order, tuple(buchberger_elems(gens, order)))


def buchberger(gens, order: MonomialOrder | ModuleOrder | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of Polynomials or VectorPolynomials.

    ``order`` may be a MonomialOrder (re-targets the ring's order) or a
    ModuleOrder; by default the ring's own order is used.
    """
    gens = list(gens)
    if not gens:
        raise DomainError("at least one generator is required")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ContextError("generators from different rings")
    if isinstance(order, MonomialOrder):
        ring = ring.with_order(order)
        gens = [_retarget(g, ring) for g in gens]
        order = None
    if isinstance(gens[0], Polynomial):
        mo = order or ModuleOrder(ring, 1)
        elems = [poly_to_elem(g) for g in gens]
    else:
        rank = gens[0].rank
        if any(g.rank != rank for g in gens):
            raise ContextError("vectors of different ranks")
        mo = order or ModuleOrder(ring, rank, gens[0].shifts)
        elems = [vec_to_elem(g) for g in gens]
    return groebner_from_elems(elems, mo)


def _retarget(g, ring):
    if isinstance(g, Polynomial):
        return Polynomial(ring, g.terms)
    return VectorPolynomial(ring, g.rank, g.terms, g.shifts)


def normal_form(f, gb: GroebnerBasis):
    if isinstance(f, Polynomial):
        if not gb.is_ideal:
            raise ContextError("polynomial reduced by a module basis")
        if f.ring.variables != gb.ring.variables:
            raise ContextError("polynomial from a different ring")
        return elem_to_poly(gb.reduce(poly_to_elem(f)), gb.ring)
    if f.rank != gb.rank:
        raise ContextError("vector of the wrong rank")
    return elem_to_vec(gb.reduce(vec_to_elem(f)), gb.ring, gb.rank, gb.order.shifts)


# ---------------------------------------------------------------------------
# syzygies


def _reduce_tracking(f: dict, basis: list, order: ModuleOrder):
    """Reduce f; return (remainder, {basis index: quotient as ring-element dict})."""
    norm = order.norm
    negkey = order.negkey
    f = dict(f)
    heap = [(negkey[m], m) for m in f]
    heapq.heapify(heap)
    rem, quot = {}, {}
    while heap:
        m = heapq.heappop(heap)[1]
        c = f.pop(m, None)
        if c is None:
            continue
        for idx, (lm, g) in enumerate(basis):
            if lm[0] == m[0] and all(map(le, lm, m)):
                break
        else:
            rem[m] = c
            continue
        q = tuple(map(sub, m, lm))
        qd = quot.setdefault(idx, {})
        qm = (0,) + q[1:]
        qd[qm] = norm(qd.get(qm, 0) + c)
        for gm, gc in g.items():
            if gm == lm:
                continue
            nm = tuple(map(add, gm, q))
            old = f.get(nm)
            if old is None:
                f[nm] = norm(-c * gc)
                heapq.heappush(heap, (negkey[nm], nm))
            else:
                v = norm(old - c * gc)
                if v:
                    f[nm] = v
                else:
                    del f[nm]
    return rem, quot


@dataclass(frozen=True)
class SyzygyBasis:
    """Relations among the elements of a Groebner basis, as vectors in S^len(gb)."""

    gb: GroebnerBasis
    elems: tuple
    order: ModuleOrder

    def __len__(self):
        return len(self.elems)

    def vectors(self) -> list[VectorPolynomial]:
        return [elem_to_vec(s, self.gb.ring, len(self.gb), self.order.shifts) for s in self.elems]


def syzygies(gb: GroebnerBasis) -> SyzygyBasis:
    """Schreyer syzygies: one relation per S-pair of leading terms in a common component."""
    order = gb.order
    basis = gb.pairs()
    n = len(basis)
    shifts = tuple(order.deg[lm] for lm, _ in basis)
    sorder = ModuleOrder(gb.ring, max(n, 1), shifts if n else (0,), "top")
    norm = order.norm
    out = []
    for j in range(n):
        for i in range(j):
            lmi, gi = basis[i]
            lmj, gj = basis[j]
            if lmi[0] != lmj[0]:
                continue
            l = _lcm(lmi, lmj)
            s = _spoly(gi, lmi, gj, lmj, l)
            s = {m: v for m, v in ((m, norm(c)) for m, c in s.items()) if v}
            rem, quot = _reduce_tracking(s, basis, order)
            if rem:
                raise AssertionError("input is not a Groebner basis")
            qi = (i,) + tuple(map(sub, l, lmi))[1:]
            qj = (j,) + tuple(map(sub, l, lmj))[1:]
            syz = {qi: 1}
            syz[qj] = norm(syz.get(qj, 0) - 1)
            for k, qd in quot.items():
                for qm, c in qd.items():
                    m = (k,) + qm[1:]
                    v = norm(syz.get(m, 0) - c)
                    if v:
                        syz[m] = v
                    else:
                        syz.pop(m, None)
            syz = {m: c for m, c in syz.items() if c}
            if syz:
                out.append(syz)
    out.sort(key=lambda s: sorder.key[sorder.leading(s)])
    return SyzygyBasis(gb, tuple(out), sorder)


def apply_syzygy(syz: dict, elems: list[dict], norm) -> dict:
    """Evaluate sum_k syz_k * elems[k] (syz flattened with component = index)."""
    total: dict = {}
    for m, c in syz.items():
        k = m[0]
        q = (0,) + m[1:]
        for gm, gc in elems[k].items():
            nm = tuple(map(add, gm, q))
            total[nm] = total.get(nm, 0) + c * gc
    return {m: v for m, v in ((m, norm(c)) for m, c in total.items()) if v}


def kernel(columns: list[dict], source_shifts: Sequence[int], target_rank: int,
           target_shifts: Sequence[int], ring: PolyRing) -> GroebnerBasis:
    """Kernel of S^m -> S^target_rank, e_j -> columns[j], as a GB in S^m.

    Computed by elimination: a position-over-term Groebner basis of the
    graph {(phi(e_j), e_j)} in S^target (+) S^m; elements vanishing in the
    first block form a Groebner basis of the kernel.
    """
    m = len(columns)
    shifts = tuple(target_shifts) + tuple(source_shifts)
    order = ModuleOrder(ring, target_rank + m, shifts, "pot")
    zero = (0,) * ring.nvars
    gens = []
    for j, col in enumerate(columns):
        g = dict(col)
        g[(target_rank + j,) + zero] = 1
        gens.append(g)
    gb = buchberger_elems(gens, order)
    korder = ModuleOrder(ring, m, tuple(source_shifts), "top")
    kelems = []
    for g in gb:
        if all(mon[0] >= target_rank for mon in g):
            kelems.append({(mon[0] - target_rank,) + mon[1:]: c for mon, c in g.items()})
    if not kelems:
        return GroebnerBasis(ring, korder, ())
    return groebner_from_elems(kelems, korder)


def ring_map_kernel(source_vars: Sequence[str], target, images: Sequence[Polynomial],
                    field=None) -> list[Polynomial]:
    """Kernel of k[source_vars] -> target, source_vars[i] -> images[i].

    ``target`` is a PresentedRing or a PolyRing. The graph ideal
    (y_i - images_i) plus the target's relations is formed in
    k[target vars, source vars] and the target variables are eliminated.
    Returned polynomials live in PolyRing(source_vars) with the target's
    field and the default grevlex order.
    """
    from .rings import PresentedRing  # cycle: rings builds on this module

    if isinstance(target, PresentedRing):
        tring = target.ambient
        relations = list(target.relations)
    else:
        tring = target
        relations = []
    if len(images) != len(source_vars):
        raise DomainError("one image per source variable required")
    clash = set(source_vars) & set(tring.variables)
    if clash:
        raise ContextError(f"source and target share variables {sorted(clash)}")
    field = tring.field if field is None else field
    nt, ns = tring.nvars, len(source_vars)
    big = PolyRing(tring.variables + tuple(source_vars), field,
                   MonomialOrder("elim", blocks=(nt, ns)))
    tpos = list(range(nt))
    gens = [f.map_to(big, tpos) for f in relations]
    for i, img in enumerate(images):
        if img.ring.variables != tring.variables:
            raise ContextError("image outside the target ring")
        gens.append(big.var(nt + i) - img.map_to(big, tpos))
    gb = buchberger(gens)
    sring = PolyRing(source_vars, field)
    out = []
    for g in gb.elements():
        if all(not any(e[:nt]) for e in g.terms):
            out.append(Polynomial(sring, {e[nt:]: c for e, c in g.items()}))
    if out:
        out = buchberger(out).elements()
    return out
