"""Hilbert-Samuel functions of filtrations and extraction of e_0, ..., e_d.

A table records n -> lambda(R/A_{n+1}) for n = 0..N, each value an exact
length. Coefficients are fitted in the binomial basis

    P(n) = sum_i (-1)^i e_i binom(n + d - i, d - i)

through the last d + 1 entries and accepted only after the fit
reproduces ``guard`` earlier entries; otherwise the table is extended.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from . import monomial
from .errors import DomainError, PreconditionError, StabilizationError
from .groebner import elem_mul_poly, poly_to_elem
from .monomial import MonomialIdeal, NewtonPolyhedron
from .rings import PresentedRing, RingIdeal

DEFAULT_GUARD = 3
DEFAULT_NMAX = 40


# ---------------------------------------------------------------------------
# tables and coefficients


@dataclass
class HilbertSamuelTable:
    """Exact values n -> lambda(M / A_{n+1} M) for n = 0..len(values)-1."""

    description: str
    values: list[int]
    producer: Callable[[int], list[int]] | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def extend(self, N: int) -> "HilbertSamuelTable":
        if N <= self.N:
            return self
        if self.producer is None:
            raise StabilizationError("table cannot be extended (no producer)")
        self.values = list(self.producer(N))
        return self

    def differences(self) -> list[int]:
        return [b - a for a, b in zip([0] + self.values, self.values)]

    def to_tsv(self) -> str:
        rows = ["n\tlength\tfirst_difference"]
        for n, (v, dv) in enumerate(zip(self.values, self.differences())):
            rows.append(f"{n}\t{v}\t{dv}")
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class HilbertCoefficients:
    d: int
    e: tuple
    n0: int
    table_size: int

    def __getitem__(self, i):
        return self.e[i]

    @property
    def e0(self):
        return self.e[0]

    @property
    def e1(self):
        return self.e[1] if self.d >= 1 else 0

    def polynomial(self, n: int) -> int:
        return hilbert_polynomial_value(self.e, self.d, n)

    def as_dict(self) -> dict:
        return {"d": str(self.d), **{f"e{i}": str(v) for i, v in enumerate(self.e)},
                "n0": str(self.n0)}


def hilbert_polynomial_value(e, d: int, n: int):
    return sum((-1) ** i * e[i] * comb(n + d - i, d - i) for i in range(d + 1))


def _solve(A: list[list], b: list) -> list[Fraction]:
    n = len(A)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[-1] for row in m]


def fit_binomial(values: list[int], start: int, d: int) -> list[Fraction]:
    """Coefficients e_0..e_d of the degree-d polynomial through values[start..start+d]."""
    A = [[(-1) ** i * comb(n + d - i, d - i) for i in range(d + 1)]
         for n in range(start, start + d + 1)]
    return _solve(A, values[start:start + d + 1])


def extract_coefficients(table: HilbertSamuelTable, d: int, guard: int = DEFAULT_GUARD,
                         n_max: int = DEFAULT_NMAX) -> HilbertCoefficients:
    """Fit the Hilbert-Samuel polynomial of degree d, extending the table as needed."""
    if d < 0:
        raise DomainError("dimension must be nonnegative")
    need = d + 1 + guard
    if table.N + 1 < need:
        table.extend(need - 1)
    while True:
        vals = table.values
        N = len(vals) - 1
        start = N - d
        e = fit_binomial(vals, start, d)
        ok = all(x.denominator == 1 for x in e)
        if ok:
            e = tuple(int(x) for x in e)
            ok = all(hilbert_polynomial_value(e, d, n) == vals[n]
                     for n in range(start - guard, start))
        if ok:
            n0 = start - guard
            while n0 > 0 and hilbert_polynomial_value(e, d, n0 - 1) == vals[n0 - 1]:
                n0 -= 1
            return HilbertCoefficients(d, e, n0, N + 1)
        if N >= n_max:
            raise StabilizationError(
                f"Hilbert-Samuel function did not stabilize by n = {n_max} ({table.description})")
        table.extend(min(n_max, N + max(2, d)))


# ---------------------------------------------------------------------------
# filtrations


class GoodFiltration:
    """A decreasing multiplicative filtration A_1 > A_2 > ... integral over I."""

    kind = "abstract"

    def __init__(self, ring: PresentedRing, base: RingIdeal):
        if base.ring != ring:
            raise DomainError("base ideal of a different ring")
        self.ring = ring
        self.base = base

    def component(self, n: int) -> RingIdeal:
        raise NotImplementedError

    def monomial_component(self, n: int) -> MonomialIdeal | None:
        return None

    def lengths(self, N: int) -> list[int]:
        """lambda(R/A_{n+1}) for n = 0..N."""
        out = []
        for n in range(N + 1):
            mono = self.monomial_component(n + 1)
            if mono is not None:
                v = _monomial_quotient_length(self.ring, mono)
            else:
                v = self.component(n + 1).colength()
            if v is None:
                raise PreconditionError("filtration component is not m-primary")
            out.append(v)
        return out

    def describe(self) -> str:
        return f"{self.kind} filtration of {self.base}"


def _monomial_quotient_length(ring: PresentedRing, mono: MonomialIdeal) -> int | None:
    rel = ring.gb.initial_ideals()[0]
    return monomial.colength(mono.gens + tuple(rel), ring.nvars)


class IAdicFiltration(GoodFiltration):
    """A_n = I^n, powers computed by repeated products with a fresh Groebner basis."""

    kind = "I-adic"

    def __init__(self, ring: PresentedRing, base: RingIdeal):
        super().__init__(ring, base)
        self._powers = [ring.unit_ideal(), base]
        self._monomial = None
        if ring.has_monomial_relations() and all(len(g) == 1 for g in base.gens):
            self._monomial = MonomialIdeal([next(iter(g.terms)) for g in base.gens], ring.nvars)
            self._mono_powers = [MonomialIdeal([(0,) * ring.nvars], ring.nvars), self._monomial]

    def monomial_component(self, n):
        if self._monomial is None:
            return None
        while len(self._mono_powers) <= n:
            self._mono_powers.append(self._mono_powers[-1] * self._monomial)
        return self._mono_powers[n]

    def component(self, n: int) -> RingIdeal:
        if n < 0:
            raise DomainError("negative filtration index")
        while len(self._powers) <= n:
            self._powers.append(self.base.times_gb(self._powers[-1]))
        return self._powers[n]


class ExplicitFiltration(GoodFiltration):
    """Given A_1 >= ... >= A_s, continued by A_{n+1} = I A_n for n >= s."""

    kind = "explicit"

    def __init__(self, ring: PresentedRing, base: RingIdeal, prefix: list[RingIdeal]):
        super().__init__(ring, base)
        if not prefix:
            raise DomainError("explicit filtration needs at least A_1")
        self._comps = [ring.unit_ideal()] + list(prefix)
        self.check()

    def component(self, n: int) -> RingIdeal:
        while len(self._comps) <= n:
            self._comps.append(self.base.times_gb(self._comps[-1]))
        return self._comps[n]

    def check(self, upto: int | None = None):
        upto = upto or len(self._comps)
        for n in range(1, upto):
            A = self.component(n)
            if n > 1 and not A.issubset(self.component(n - 1)):
                raise PreconditionError(f"filtration is not decreasing at n = {n}")
            if not self.base.times_gb(self.component(n - 1)).issubset(A):
                raise PreconditionError(f"I * A_{n - 1} is not inside A_{n}")


class ClosureFiltration(GoodFiltration):
    """A_n = integral closure of I^n for a monomial ideal I of a polynomial ring."""

    kind = "integral-closure"

    def __init__(self, ring: PresentedRing, base: RingIdeal):
        super().__init__(ring, base)
        self.mono = as_monomial_ideal(base)
        if not ring.is_polynomial_ring:
            raise DomainError("integral closure filtrations need a polynomial ring")
        if not self.mono.is_m_primary():
            raise PreconditionError("closure filtration needs an m-primary monomial ideal")
        self.polyhedron = NewtonPolyhedron(self.mono.gens, ring.nvars)
        self._cache: dict = {}

    def monomial_component(self, n):
        if n not in self._cache:
            if n == 0:
                self._cache[n] = MonomialIdeal([(0,) * self.ring.nvars], self.ring.nvars)
            else:
                self._cache[n] = MonomialIdeal(self.polyhedron.minimal_lattice_points(n),
                                               self.ring.nvars)
        return self._cache[n]

    def component(self, n):
        amb = self.ring.ambient
        return self.ring.ideal([amb.monomial(e) for e in self.monomial_component(n).gens])

    def lengths(self, N):
        return [self.polyhedron.count_outside(n + 1) for n in range(N + 1)]

    def check_multiplicative(self, upto: int = 3) -> bool:
        for m in range(1, upto + 1):
            for n in range(1, upto + 1 - m + 1):
                prod = self.monomial_component(m) * self.monomial_component(n)
                if not prod.issubset(self.monomial_component(m + n)):
                    return False
        return True


def as_monomial_ideal(I) -> MonomialIdeal:
    if isinstance(I, MonomialIdeal):
        return I
    if not all(len(g) == 1 for g in I.gens):
        raise DomainError("ideal is not generated by monomials")
    return MonomialIdeal([next(iter(g.terms)) for g in I.gens], I.ring.nvars)


# ---------------------------------------------------------------------------
# operations


def _as_filtration(R: PresentedRing, filt) -> GoodFiltration:
    if isinstance(filt, GoodFiltration):
        return filt
    if isinstance(filt, RingIdeal):
        return IAdicFiltration(R, filt)
    raise DomainError("expected a filtration or an ideal")


def hs_table(R: PresentedRing, filt, N: int = 6) -> HilbertSamuelTable:
    f = _as_filtration(R, filt)
    if not f.base.is_m_primary():
        raise PreconditionError("Hilbert-Samuel function of an ideal that is not m-primary")
    return HilbertSamuelTable(f.describe(), f.lengths(N), f.lengths)


def hs_table_module(M, I: RingIdeal, N: int = 6) -> HilbertSamuelTable:
    """lambda(M / I^{n+1} M) for a graded module presentation M."""
    if not I.is_m_primary():
        raise PreconditionError("Samuel function relative to a non m-primary ideal")
    producer = module_samuel_producer(M, I)
    return HilbertSamuelTable(f"I-adic filtration of module ({I})", producer(N), producer)


def module_samuel_producer(M, I: RingIdeal):
    """Callable N -> [lambda(M/I^{n+1}M) for n <= N] with cached intermediate bases."""
    from .groebner import GroebnerBasis, buchberger_elems

    order = M.order
    base = M.gb
    if I.ring.ambient != M.ring:
        raise DomainError("ideal and module over different rings")
    gens_I = [poly_to_elem(g) for g in I.gens + I.ring.relations]
    norm = order.norm
    zero = (0,) * M.ring.nvars
    levels: list = []

    def next_level(prev):
        prods = []
        src = prev.elems if prev is not None else [{(c,) + zero: 1} for c in range(M.rank)]
        for g in src:
            if prev is not None and not base.reduce(g):
                continue
            for f in gens_I:
                r = base.reduce(elem_mul_poly(g, f, norm))
                if r:
                    prods.append(r)
        return GroebnerBasis(M.ring, order,
                             tuple(buchberger_elems(prods, order, known=list(base.elems))))

    def produce(N):
        if M.rank == 0:
            return [0] * (N + 1)
        while len(levels) <= N:
            levels.append(next_level(levels[-1] if levels else None))
        out = []
        for gb in levels[:N + 1]:
            v = sum_colength(gb, M.ring.nvars)
            if v is None:
                raise PreconditionError("module quotient is not of finite length")
            out.append(v)
        return out

    return produce


def sum_colength(gb, nvars) -> int | None:
    total = 0
    for comp in gb.initial_ideals():
        v = monomial.colength(comp, nvars)
        if v is None:
            return None
        total += v
    return total


def hilbert_coefficients(R: PresentedRing, filt, guard: int = DEFAULT_GUARD,
                         n_max: int = DEFAULT_NMAX, N: int | None = None) -> HilbertCoefficients:
    """Convenience: table + extraction with d = dim R."""
    d = R.dim
    table = hs_table(R, filt, N if N is not None else d + guard + 1)
    return extract_coefficients(table, d, guard, n_max)


def module_multiplicity(M, I: RingIdeal, d: int | None = None) -> int:
    """Samuel multiplicity e(I; M) (the e_0 slot)."""
    d = M.dim() if d is None else d
    if d < 0:
        return 0
    table = hs_table_module(M, I, d + DEFAULT_GUARD + 1)
    return extract_coefficients(table, d).e0


def monomial_integral_closure(I) -> MonomialIdeal:
    """Integral closure of a monomial ideal (a MonomialIdeal or a monomial RingIdeal)."""
    if isinstance(I, RingIdeal) and not I.ring.is_polynomial_ring:
        raise DomainError("monomial closure is only available in polynomial rings")
    mono = as_monomial_ideal(I)
    return monomial.integral_closure(mono)


def closure_filtration(R: PresentedRing, I: RingIdeal) -> ClosureFiltration:
    filt = ClosureFiltration(R, I)
    if not filt.check_multiplicative():
        raise AssertionError("closure filtration failed A_m A_n <= A_(m+n)")
    return filt


def filtration_contained(A: GoodFiltration, B: GoodFiltration, upto: int = 4) -> bool:
    for n in range(1, upto + 1):
        ma, mb = A.monomial_component(n), B.monomial_component(n)
        if ma is not None and mb is not None:
            if not ma.issubset(mb):
                return False
        elif not A.component(n).issubset(B.component(n)):
            return False
    return True


def tracking_compare(R: PresentedRing, filtA, filtB, upto: int = 4) -> dict:
    """Compare e_0, e_1 of nested filtrations A_n <= B_n."""
    A, B = _as_filtration(R, filtA), _as_filtration(R, filtB)
    if not filtration_contained(A, B, upto):
        raise PreconditionError("filtration A is not contained in filtration B")
    ca = hilbert_coefficients(R, A)
    cb = hilbert_coefficients(R, B)
    return {
        "A": A.describe(),
        "B": B.describe(),
        "coefficients_A": ca,
        "coefficients_B": cb,
        "e0_equal": ca.e0 == cb.e0,
        "e1_monotone": ca.e1 <= cb.e1,
        "chain_length_bound": cb.e1 - ca.e1,
    }
