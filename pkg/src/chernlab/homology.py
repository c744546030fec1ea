"""Graded modules over a polynomial ring S, minimal free resolutions, Ext,
local cohomology lengths by graded duality, depth, and Koszul homology.

Modules are cokernels F/U of a free module F = (+) S(-a_c) by a submodule
U given by relation vectors (flattened dicts keyed (component, exps)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

from . import monomial
from .core import PolyRing, Polynomial
from .errors import DomainError, PreconditionError
from .groebner import (GroebnerBasis, ModuleOrder, buchberger_elems, elem_add,
                       elem_mul_poly, elem_to_vec, poly_to_elem)
from .rings import PresentedRing, RingIdeal


# ---------------------------------------------------------------------------
# helpers on relation vectors


def _clean(elems):
    return [dict(e) for e in elems if e]


def _homogeneous_degree(elem: dict, order: ModuleOrder):
    degs = {order.deg[m] for m in elem}
    return degs.pop() if len(degs) == 1 else None


def preimage(columns: list[dict], source_shifts, target_rank: int, target_shifts,
             ring: PolyRing, sub: list[dict] = ()) -> list[dict]:
    """Generators of {v in S^m : sum v_j columns[j] in <sub>} as a GB in S^m.

    Position-over-term elimination on the graph of the map together with
    the submodule ``sub`` of the target.
    """
    m = len(columns)
    if m == 0:
        return []
    shifts = tuple(target_shifts) + tuple(source_shifts)
    order = ModuleOrder(ring, target_rank + m, shifts, "pot")
    zero = (0,) * ring.nvars
    gens = []
    for j, col in enumerate(columns):
        g = dict(col)
        g[(target_rank + j,) + zero] = 1
        gens.append(g)
    gens += _clean(sub)
    gb = buchberger_elems(gens, order)
    out = []
    for g in gb:
        if all(mon[0] >= target_rank for mon in g):
            out.append({(mon[0] - target_rank,) + mon[1:]: c for mon, c in g.items()})
    return out


def minimal_generators(elems: list[dict], order: ModuleOrder) -> list[dict]:
    """Greedy minimal generating set of a graded submodule, by increasing degree."""
    elems = sorted(_clean(elems), key=lambda g: (order.deg[order.leading(g)],
                                                 order.key[order.leading(g)]))
    kept: list[dict] = []
    gb: list[dict] = []
    for g in elems:
        if gb:
            probe = GroebnerBasis(order.ring, order, tuple(gb))
            if not probe.reduce(g):
                continue
        kept.append(g)
        gb = buchberger_elems([g], order, known=gb)
    return kept


def prune(ring: PolyRing, rank: int, shifts, relations: list[dict]):
    """Drop generators killed by relations with a constant entry.

    Returns (rank, shifts, relations) of an isomorphic presentation with
    no unit entries.
    """
    f = ring.field
    norm = (lambda x: x % f.p) if f.is_prime_field else f.norm
    rels = _clean(relations)
    removed: set = set()
    while True:
        found = None
        for idx, r in enumerate(rels):
            for mon, c in r.items():
                if not any(mon[1:]) and sum(1 for m in r if m[0] == mon[0]) == 1:
                    found = (idx, mon[0], c)
                    break
            if found:
                break
        if found is None:
            break
        idx, comp, c = found
        u = rels.pop(idx)
        inv = f.inv(c)
        new = []
        for v in rels:
            vc = {(0,) + m[1:]: coef for m, coef in v.items() if m[0] == comp}
            if vc:
                v = elem_add(v, elem_mul_poly(u, vc, norm), norm, scale=-inv)
            if v:
                new.append(v)
        rels = new
        removed.add(comp)
    keep = [c for c in range(rank) if c not in removed]
    index = {c: i for i, c in enumerate(keep)}
    rels = [{(index[m[0]],) + m[1:]: c for m, c in r.items()} for r in rels]
    return len(keep), tuple(shifts[c] for c in keep), rels


# ---------------------------------------------------------------------------
# modules


class GradedModulePresentation:
    """M = F/U over the polynomial ring ``ring``; F has generators of degrees ``shifts``."""

    def __init__(self, ring: PolyRing, rank: int, shifts=None, relations=(), minimal=False,
                 name: str = ""):
        self.ring = ring
        self.rank = rank
        self.shifts = tuple(shifts) if shifts is not None else (0,) * rank
        if len(self.shifts) != rank:
            raise DomainError("one shift per generator required")
        self.relations = tuple(_clean(relations))
        self.minimal = minimal
        self.name = name
        for r in self.relations:
            if any(m[0] >= rank or m[0] < 0 for m in r):
                raise DomainError("relation outside the free module")
        self.order = ModuleOrder(ring, rank, self.shifts, "top")

    # ---- constructors
    @classmethod
    def from_ring(cls, R: PresentedRing) -> "GradedModulePresentation":
        return cls(R.ambient, 1, (0,), list(R.gb.elems), name=R.name or "R")

    @classmethod
    def quotient_ring(cls, R: PresentedRing, I: RingIdeal) -> "GradedModulePresentation":
        return cls(R.ambient, 1, (0,), list(I.gb.elems), name=f"{R.name or 'R'}/I")

    @classmethod
    def zero(cls, ring: PolyRing) -> "GradedModulePresentation":
        return cls(ring, 0, (), (), minimal=True, name="0")

    def __repr__(self):
        return f"GradedModulePresentation(rank={self.rank}, shifts={self.shifts}, " \
               f"relations={len(self.relations)})"

    # ---- basic invariants
    @cached_property
    def gb(self) -> GroebnerBasis:
        return GroebnerBasis(self.ring, self.order,
                             tuple(buchberger_elems(list(self.relations), self.order)))

    def __eq__(self, other):
        return (isinstance(other, GradedModulePresentation) and self.ring == other.ring
                and self.rank == other.rank and self.shifts == other.shifts
                and self.gb == other.gb)

    def __hash__(self):
        return hash((self.ring, self.rank, self.shifts, self.gb))

    def initial_components(self) -> list[list[tuple]]:
        comps = [[] for _ in range(self.rank)]
        for lm in self.gb.leading_monomials():
            comps[lm[0]].append(lm[1:])
        return comps

    def is_homogeneous(self) -> bool:
        return all(_homogeneous_degree(r, self.order) is not None for r in self.relations)

    def is_zero(self) -> bool:
        return all(any(not any(e) for e in comp) for comp in self.initial_components())

    def dim(self) -> int:
        """Krull dimension of M (-1 for the zero module)."""
        n = self.ring.nvars
        return max([monomial.independent_set_dim(c, n) for c in self.initial_components()],
                   default=-1)

    def length(self) -> int | None:
        total = 0
        for comp in self.initial_components():
            v = monomial.colength(comp, self.ring.nvars)
            if v is None:
                return None
            total += v
        return total

    def degree(self) -> int:
        """Multiplicity deg(M) with respect to the maximal homogeneous ideal."""
        if self.is_zero():
            return 0
        if all(w == 1 for w in self.ring.weights) and self.is_homogeneous():
            return monomial.module_hilbert(self.initial_components(), self.ring.nvars)[1]
        from .hilbert import module_multiplicity
        S = PresentedRing(self.ring)
        return module_multiplicity(self, S.maximal_ideal(), self.dim())

    def minimize(self) -> "GradedModulePresentation":
        if self.minimal:
            return self
        if not self.is_homogeneous():
            raise PreconditionError("minimal presentations need a graded module")
        rank, shifts, rels = prune(self.ring, self.rank, self.shifts, list(self.relations))
        order = ModuleOrder(self.ring, rank, shifts, "top")
        rels = minimal_generators(rels, order)
        return GradedModulePresentation(self.ring, rank, shifts, rels, True, self.name)

    # ---- submodule operations
    def _colon_var(self, U: list[dict], i: int) -> list[dict]:
        """{v in F : x_i v in U}."""
        zero = [0] * self.ring.nvars
        zero[i] = 1
        cols = [{(c,) + tuple(zero): 1} for c in range(self.rank)]
        return preimage(cols, self.shifts, self.rank, self.shifts, self.ring, U)

    def _intersect(self, A: list[dict], B: list[dict]) -> list[dict]:
        if not A or not B:
            return []
        cols = list(A)
        shifts = [self.order.deg[self.order.leading(a)] for a in A]
        pre = preimage(cols, shifts, self.rank, self.shifts, self.ring, B)
        from .groebner import apply_syzygy
        out = [apply_syzygy(p, cols, self.order.norm) for p in pre]
        return buchberger_elems(_clean(out), self.order)

    def saturated_relations(self) -> list[dict]:
        """GB of U : m^infinity, the preimage of H^0_m(M) in F."""
        current = list(self.gb.elems)
        while True:
            parts = [self._colon_var(current, i) for i in range(self.ring.nvars)]
            nxt = parts[0]
            for p in parts[1:]:
                nxt = self._intersect(nxt, p)
            nxt = buchberger_elems(_clean(nxt) + current, self.order)
            if GroebnerBasis(self.ring, self.order, tuple(nxt)) == \
                    GroebnerBasis(self.ring, self.order, tuple(current)):
                return current
            current = nxt

    def h0_length(self) -> int:
        """lambda(H^0_m(M)) computed as the saturation gap."""
        sat = self.saturated_relations()
        gb_sat = GroebnerBasis(self.ring, self.order, tuple(sat))
        total = 0
        small = self.initial_components()
        big = [[] for _ in range(self.rank)]
        for lm in gb_sat.leading_monomials():
            big[lm[0]].append(lm[1:])
        for b, s in zip(big, small):
            v = monomial.difference_count(b, s, self.ring.nvars)
            if v is None:
                raise AssertionError("H^0 of infinite length")
            total += v
        return total

    def mod_h0(self) -> "GradedModulePresentation":
        """M / H^0_m(M)."""
        return GradedModulePresentation(self.ring, self.rank, self.shifts,
                                        self.saturated_relations(), name=f"{self.name}/H0")

    def quotient_by_elements(self, elems: list[Polynomial]) -> "GradedModulePresentation":
        """M / (f_1, ..., f_k) M."""
        norm = self.order.norm
        zero = (0,) * self.ring.nvars
        extra = []
        for f in elems:
            fe = poly_to_elem(f)
            for c in range(self.rank):
                extra.append(elem_mul_poly({(c,) + zero: 1}, fe, norm))
        return GradedModulePresentation(self.ring, self.rank, self.shifts,
                                        list(self.relations) + extra, name=f"{self.name}/(x)")

    def vectors(self):
        return [elem_to_vec(r, self.ring, self.rank, self.shifts) for r in self.relations]


# ---------------------------------------------------------------------------
# resolutions and Ext


@dataclass
class FreeResolution:
    """0 <- F_0 <- F_1 <- ... <- F_p with maps[i-1] : F_i -> F_{i-1} (list of columns)."""

    ring: PolyRing
    shifts: list          # shifts[i] = generator degrees of F_i
    maps: list            # maps[i-1] = columns of d_i
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.maps)

    def rank(self, i: int) -> int:
        return len(self.shifts[i]) if 0 <= i < len(self.shifts) else 0

    def betti(self) -> list[int]:
        return [len(s) for s in self.shifts]

    def check_complex(self) -> bool:
        """d_i o d_{i+1} = 0 for every i."""
        norm = ModuleOrder(self.ring, 1).norm
        from .groebner import apply_syzygy
        for i in range(1, len(self.maps)):
            for col in self.maps[i]:
                if apply_syzygy(col, self.maps[i - 1], norm):
                    return False
        return True


def free_resolution(M: GradedModulePresentation) -> FreeResolution:
    """Minimal graded free resolution (kernel-by-elimination and greedy minimization)."""
    if not M.is_homogeneous():
        raise PreconditionError("free resolutions are only computed for graded modules")
    P = M.minimize()
    ring = P.ring
    shifts = [P.shifts]
    maps = []
    cols = list(P.relations)
    rank, prev_shifts = P.rank, P.shifts
    while cols:
        order = ModuleOrder(ring, rank, prev_shifts, "top")
        src = tuple(order.deg[order.leading(c)] for c in cols)
        maps.append(cols)
        shifts.append(src)
        if len(maps) > ring.nvars + 1:
            raise AssertionError("resolution longer than the number of variables")
        kgb = preimage(cols, src, rank, prev_shifts, ring)
        korder = ModuleOrder(ring, len(cols), src, "top")
        cols = minimal_generators(kgb, korder)
        rank, prev_shifts = len(src), src
    return FreeResolution(ring, shifts, maps)


def _transpose(cols: list[dict], nrows: int) -> list[dict]:
    out = [dict() for _ in range(nrows)]
    for j, col in enumerate(cols):
        for m, c in col.items():
            out[m[0]][(j,) + m[1:]] = c
    return out


@dataclass
class ExtModule:
    index: int
    module: GradedModulePresentation

    @cached_property
    def dim(self) -> int:
        return self.module.dim()

    @cached_property
    def length(self) -> int | None:
        return self.module.length()

    @property
    def finite_length(self) -> bool:
        return self.length is not None

    @cached_property
    def degree(self) -> int:
        return self.module.degree()

    def is_zero(self) -> bool:
        return self.module.is_zero()


_RES_CACHE: dict = {}


def resolution_of(M: GradedModulePresentation) -> FreeResolution:
    key = M
    res = _RES_CACHE.get(key)
    if res is None:
        if len(_RES_CACHE) > 256:
            _RES_CACHE.clear()
        res = _RES_CACHE[key] = free_resolution(M)
    return res


def ext_module(M: GradedModulePresentation, i: int, res: FreeResolution | None = None
               ) -> ExtModule:
    """Ext^i_S(M, S) from the dual of a minimal resolution."""
    res = res or resolution_of(M)
    ring = res.ring
    p = res.length
    if i < 0 or i > p:
        return ExtModule(i, GradedModulePresentation.zero(ring))
    r_i = res.rank(i)
    dual = tuple(-s for s in res.shifts[i])
    order = ModuleOrder(ring, r_i, dual, "top")
    zero = (0,) * ring.nvars
    if i + 1 <= p:
        cols = _transpose(res.maps[i], r_i)   # d_{i+1}^T : F_i^* -> F_{i+1}^*
        tshifts = tuple(-s for s in res.shifts[i + 1])
        K = preimage(cols, dual, res.rank(i + 1), tshifts, ring)
        K = minimal_generators(K, order)
    else:
        K = [{(c,) + zero: 1} for c in range(r_i)]
    B = _clean(_transpose(res.maps[i - 1], res.rank(i - 1))) if i >= 1 else []
    if not K:
        return ExtModule(i, GradedModulePresentation.zero(ring))
    kdeg = tuple(order.deg[order.leading(k)] for k in K)
    bdeg = tuple(order.deg[order.leading(b)] for b in B)
    s = len(K)
    rels = preimage(K + B, kdeg + bdeg, r_i, dual, ring)
    rels = [{m: c for m, c in r.items() if m[0] < s} for r in rels]
    E = GradedModulePresentation(ring, s, kdeg, _clean(rels), name=f"Ext^{i}")
    return ExtModule(i, E.minimize())


def projective_dimension(M: GradedModulePresentation) -> int:
    return resolution_of(M).length


def depth(M) -> int:
    """Auslander-Buchsbaum: depth M = dim S - pd M."""
    M = as_module(M)
    if M.is_zero():
        raise DomainError("depth of the zero module")
    return M.ring.nvars - projective_dimension(M)


def as_module(M) -> GradedModulePresentation:
    if isinstance(M, PresentedRing):
        return GradedModulePresentation.from_ring(M)
    return M


def local_cohomology_length(M, i: int) -> int | None:
    """lambda(H^i_m(M)) by graded duality; None when the module is not of finite length."""
    M = as_module(M)
    r = M.ring.nvars
    if i < 0:
        raise DomainError("negative cohomological index")
    if not M.is_homogeneous():
        if i == 0:
            return M.h0_length()
        raise PreconditionError("higher local cohomology is only computed for graded modules")
    E = ext_module(M, r - i)
    return E.length


def is_cm(M) -> bool:
    M = as_module(M)
    return depth(M) == M.dim()


def is_generalized_cm(M) -> bool:
    M = as_module(M)
    return all(local_cohomology_length(M, i) is not None for i in range(M.dim()))


# ---------------------------------------------------------------------------
# Koszul homology


class KoszulComplex:
    """Koszul complex of f_1..f_d over R = S/a; K_i has basis the i-subsets of {0..d-1}."""

    def __init__(self, R: PresentedRing, gens: list[Polynomial]):
        self.ring = R
        self.gens = list(gens)
        self.d = len(self.gens)
        self.subsets = [list(combinations(range(self.d), i)) for i in range(self.d + 1)]
        self._index = [{T: k for k, T in enumerate(s)} for s in self.subsets]
        self.norm = R.order.norm

    def rank(self, i: int) -> int:
        return comb(self.d, i) if 0 <= i <= self.d else 0

    def differential(self, i: int) -> list[dict]:
        """Columns of d_i : K_i -> K_{i-1} over S."""
        if i < 1 or i > self.d:
            return []
        cols = []
        idx = self._index[i - 1]
        for T in self.subsets[i]:
            col: dict = {}
            for k, t in enumerate(T):
                rest = T[:k] + T[k + 1:]
                sign = -1 if k % 2 else 1
                c = idx[rest]
                for e, v in self.gens[t].items():
                    m = (c,) + e
                    col[m] = self.norm(col.get(m, 0) + sign * v)
            cols.append({m: v for m, v in col.items() if v})
        return cols

    def relation_block(self, i: int) -> list[dict]:
        """a * K_i as generators of a submodule of S^rank(i)."""
        zero = (0,) * self.ring.nvars
        out = []
        for a in self.ring.gb.elems:
            for c in range(self.rank(i)):
                out.append(elem_mul_poly({(c,) + zero: 1}, a, self.norm))
        return out

    def check_square_zero(self) -> bool:
        from .groebner import apply_syzygy
        for i in range(2, self.d + 1):
            prev = self.differential(i - 1)
            if any(apply_syzygy(col, prev, self.norm) for col in self.differential(i)):
                return False
        return True

    def homology_length(self, i: int) -> int:
        n = self.ring.nvars
        rank = self.rank(i)
        if rank == 0:
            return 0
        order = ModuleOrder(self.ring.ambient, rank, (0,) * rank, "top")
        zero = (0,) * n
        rel = self.relation_block(i)
        if i == 0:
            ker = [{(0,) + zero: 1}]
        else:
            ker = preimage(self.differential(i), (0,) * rank, self.rank(i - 1),
                           (0,) * self.rank(i - 1), self.ring.ambient, self.relation_block(i - 1))
        big = GroebnerBasis(self.ring.ambient, order,
                            tuple(buchberger_elems(_clean(ker) + rel, order)))
        small = GroebnerBasis(self.ring.ambient, order,
                              tuple(buchberger_elems(self.differential(i + 1) + rel, order)))
        total = 0
        bc = [[] for _ in range(rank)]
        sc = [[] for _ in range(rank)]
        for lm in big.leading_monomials():
            bc[lm[0]].append(lm[1:])
        for lm in small.leading_monomials():
            sc[lm[0]].append(lm[1:])
        for b, s in zip(bc, sc):
            v = monomial.difference_count(b, s, n)
            if v is None:
                raise AssertionError(f"Koszul homology H_{i} is not of finite length")
            total += v
        return total


def koszul_homology_lengths(R: PresentedRing, J: RingIdeal) -> list[int]:
    """[h_0, ..., h_d] for a parameter ideal J given by d = dim R generators."""
    d = R.dim
    if len(J.gens) != d:
        raise DomainError(f"expected {d} generators, got {len(J.gens)}")
    if not J.is_m_primary():
        raise PreconditionError("Koszul homology lengths need a parameter ideal")
    K = KoszulComplex(R, list(J.gens))
    return [K.homology_length(i) for i in range(d + 1)]


@dataclass
class KoszulReport:
    h: list
    e0: int
    colength: int
    correction: int = field(init=False)

    def __post_init__(self):
        self.correction = sum((-1) ** (i - 1) * hi for i, hi in enumerate(self.h) if i >= 1)

    @property
    def serre_holds(self) -> bool:
        return self.e0 == self.colength - self.correction
