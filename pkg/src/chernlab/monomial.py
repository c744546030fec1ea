"""Monomial ideals: Hilbert series numerators, colengths, dimensions and
Newton polyhedra (integral closure of monomial ideals).

All Hilbert series here use the standard grading (every variable of
degree one); counts of standard monomials do not depend on the grading.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import DomainError

Exps = tuple


def minimalize(gens: Iterable[Sequence[int]]) -> tuple[Exps, ...]:
    """Unique minimal generating set of a monomial ideal, sorted."""
    gs = sorted({tuple(g) for g in gens}, key=lambda e: (sum(e), e))
    out: list = []
    for g in gs:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


def divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


# ---- univariate integer polynomials as {exponent: coeff}

def _padd(p: dict, q: dict, sign=1) -> dict:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + sign * v
        if not out[k]:
            del out[k]
    return out


def _pshift(p: dict, s: int) -> dict:
    return {k + s: v for k, v in p.items()}


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _divide_one_minus_t(p: dict):
    """Return p / (1 - t) if exact, else None."""
    if not p:
        return {}
    lo, hi = min(p), max(p)
    if sum(p.values()) != 0:
        return None
    # p = (1 - t) q  =>  q_k = sum_{j<=k} p_j
    out, acc = {}, 0
    for k in range(lo, hi):
        acc += p.get(k, 0)
        if acc:
            out[k] = acc
    return out


@lru_cache(maxsize=200_000)
def _numerator(gens: tuple) -> tuple:
    """Numerator N(t) of HS(S/I) = N(t)/(1-t)^n for a minimal generating set."""
    if not gens:
        return ((0, 1),)
    if any(not any(g) for g in gens):
        return ()
    # base case: pairwise coprime generators
    supports = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    coprime = all(not (supports[i] & supports[j])
                  for i in range(len(gens)) for j in range(i))
    if coprime:
        p = {0: 1}
        for g in gens:
            p = _pmul(p, {0: 1, sum(g): -1})
        return tuple(sorted(p.items()))
    # pivot on the variable that appears in most non-pure-power generators
    n = len(gens[0])
    counts = [0] * n
    for g, s in zip(gens, supports):
        if len(s) > 1:
            for i in s:
                counts[i] += 1
    i = max(range(n), key=lambda k: counts[k])
    exps = sorted(g[i] for g, s in zip(gens, supports) if len(s) > 1 and g[i])
    e = exps[len(exps) // 2]
    pivot = tuple(e if k == i else 0 for k in range(n))
    plus = minimalize(gens + (pivot,))
    colon = minimalize(tuple(max(0, a - b) for a, b in zip(g, pivot)) for g in gens)
    left = dict(_numerator(plus))
    right = _pshift(dict(_numerator(colon)), e)
    return tuple(sorted(_padd(left, right).items()))


def hilbert_numerator(gens: Iterable[Sequence[int]], nvars: int | None = None) -> dict:
    gens = minimalize(gens)
    if not gens and nvars is None:
        raise DomainError("number of variables needed for the zero ideal")
    return dict(_numerator(gens))


def hilbert_data(gens: Iterable[Sequence[int]], nvars: int) -> tuple[int, dict]:
    """(dimension, reduced numerator) of S/I; dimension -1 for the unit ideal."""
    num = hilbert_numerator(gens, nvars)
    if not num:
        return -1, {}
    k = 0
    while True:
        q = _divide_one_minus_t(num)
        if q is None:
            break
        num, k = q, k + 1
    return nvars - k, num


def colength(gens: Iterable[Sequence[int]], nvars: int) -> int | None:
    """Number of standard monomials of S/I, or None when infinite."""
    num = hilbert_numerator(gens, nvars)
    if not num:
        return 0
    for _ in range(nvars):
        num = _divide_one_minus_t(num)
        if num is None:
            return None
    return sum(num.values())


def module_hilbert(components: Sequence[Sequence[Sequence[int]]], nvars: int,
                   shifts: Sequence[int] | None = None) -> tuple[int, int]:
    """(dimension, degree) of F/N for a monomial submodule N = (+)_c I_c e_c."""
    best_dim, deg = -1, 0
    for gens in components:
        d, num = hilbert_data(gens, nvars)
        if d > best_dim:
            best_dim, deg = d, sum(num.values())
        elif d == best_dim and d >= 0:
            deg += sum(num.values())
    return best_dim, deg


def difference_count(big: Sequence[Sequence[int]], small: Sequence[Sequence[int]],
                     nvars: int) -> int | None:
    """#(monomials in ideal(big) but not in ideal(small)), small subset of big.

    None if infinite.
    """
    a = hilbert_numerator(small, nvars) if small else {0: 1}
    b = hilbert_numerator(big, nvars) if big else {0: 1}
    diff = _padd(a, b, -1)
    for _ in range(nvars):
        diff = _divide_one_minus_t(diff)
        if diff is None:
            return None
    return sum(diff.values())


def independent_set_dim(gens: Iterable[Sequence[int]], nvars: int) -> int:
    """Krull dimension of S/I: size of a largest set of variables
    containing the support of no generator."""
    gens = minimalize(gens)
    if any(not any(g) for g in gens):
        return -1
    supports = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def standard_monomials(gens: Iterable[Sequence[int]], nvars: int, limit: int = 10**6) -> list:
    """Explicit list of standard monomials (finite case only)."""
    gens = minimalize(gens)
    seen = set()
    frontier = [(0,) * nvars]
    while frontier:
        e = frontier.pop()
        if e in seen or any(divides(g, e) for g in gens):
            continue
        seen.add(e)
        if len(seen) > limit:
            raise DomainError("quotient is not of finite length")
        for i in range(nvars):
            f = list(e)
            f[i] += 1
            frontier.append(tuple(f))
    return sorted(seen, key=lambda e: (sum(e), e))


class MonomialIdeal:
    """A monomial ideal of k[x_1..x_n] by its minimal generators."""

    def __init__(self, gens: Iterable[Sequence[int]], nvars: int):
        self.nvars = nvars
        self.gens = minimalize(gens)
        if any(len(g) != nvars for g in self.gens):
            raise DomainError("exponent vector length differs from variable count")

    def __repr__(self):
        return f"MonomialIdeal({list(self.gens)})"

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal((tuple(a + b for a, b in zip(g, h))
                              for g in self.gens for h in other.gens), self.nvars)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(self.gens + other.gens, self.nvars)

    def power(self, n: int) -> "MonomialIdeal":
        if n < 0:
            raise DomainError("negative power")
        result = MonomialIdeal([(0,) * self.nvars], self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def contains(self, e) -> bool:
        return any(divides(g, e) for g in self.gens)

    def issubset(self, other: "MonomialIdeal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def colength(self) -> int | None:
        return colength(self.gens, self.nvars)

    def dim(self) -> int:
        return hilbert_data(self.gens, self.nvars)[0]

    def is_m_primary(self) -> bool:
        pure = set()
        for g in self.gens:
            sup = [i for i, a in enumerate(g) if a]
            if len(sup) == 1:
                pure.add(sup[0])
        return len(pure) == self.nvars

    def max_exponents(self) -> tuple:
        return tuple(max(g[i] for g in self.gens) for i in range(self.nvars))


# ---------------------------------------------------------------------------
# Newton polyhedra


def _nullspace_vector(rows: list[list[Fraction]], n: int):
    """A spanning vector of the nullspace if it is one-dimensional, else None."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    v = [Fraction(0)] * n
    v[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        v[pc] = -m[i][fc]
    return v


class NewtonPolyhedron:
    """conv(exponents) + R^n_{>=0}, stored as inequalities w.x >= b with w >= 0."""

    def __init__(self, gens: Iterable[Sequence[int]], nvars: int):
        self.nvars = nvars
        self.vertices = minimalize(gens)
        if not self.vertices:
            raise DomainError("Newton polyhedron of the zero ideal")
        self.inequalities = self._facets()

    def _facets(self):
        n = self.nvars
        pts = [tuple(Fraction(a) for a in v) for v in self.vertices]
        units = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
        found = set()
        for k in range(1, n + 1):
            for chosen in combinations(range(len(pts)), k):
                base = pts[chosen[0]]
                diffs = [[a - b for a, b in zip(pts[j], base)] for j in chosen[1:]]
                for dirs in combinations(range(n), n - k):
                    rows = diffs + [list(units[d]) for d in dirs]
                    w = _nullspace_vector(rows, n) if rows else None
                    if n == 1 and not rows:
                        w = [Fraction(1)]
                    if w is None:
                        continue
                    if any(a < 0 for a in w):
                        if all(a <= 0 for a in w):
                            w = [-a for a in w]
                        else:
                            continue
                    b = sum(a * c for a, c in zip(w, base))
                    if all(sum(a * c for a, c in zip(w, p)) >= b for p in pts):
                        lcm = 1
                        for a in list(w) + [b]:
                            lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
                        wi = [int(a * lcm) for a in w]
                        bi = int(b * lcm)
                        g = 0
                        for a in wi + [bi]:
                            g = math.gcd(g, a)
                        g = g or 1
                        found.add((tuple(a // g for a in wi), bi // g))
        # drop the coordinate half-spaces w = e_i, b = 0 (implied by a >= 0)
        return tuple(sorted(f for f in found if f[1] > 0))

    def contains(self, a: Sequence[int], scale: int = 1) -> bool:
        """Is a in scale * P?"""
        return all(sum(w * x for w, x in zip(wv, a)) >= scale * b for wv, b in self.inequalities)

    def count_outside(self, scale: int = 1) -> int:
        """Number of lattice points of N^n outside scale * P (finite iff m-primary)."""
        n = self.nvars
        ineqs = self.inequalities
        pure = [None] * n
        for v in self.vertices:
            sup = [i for i, a in enumerate(v) if a]
            if len(sup) == 1:
                i = sup[0]
                pure[i] = v[i] if pure[i] is None else min(pure[i], v[i])
        if any(p is None for p in pure):
            raise DomainError("ideal is not m-primary; infinitely many points")
        box = [range(scale * p) for p in pure[:-1]]
        total = 0
        for pref in product(*box):
            t = 0
            for wv, b in ineqs:
                rest = scale * b - sum(w * x for w, x in zip(wv, pref))
                if rest <= 0:
                    continue
                if wv[-1] == 0:
                    raise DomainError("ideal is not m-primary; infinitely many points")
                t = max(t, -(-rest // wv[-1]))
            total += t
        return total

    def minimal_lattice_points(self, scale: int = 1) -> tuple:
        """Minimal generators of the integral closure of I^scale."""
        n = self.nvars
        top = [scale * m for m in (max(v[i] for v in self.vertices) for i in range(n))]
        pts = []
        for a in product(*(range(t + 1) for t in top)):
            if not self.contains(a, scale):
                continue
            minimal = True
            for i in range(n):
                if a[i]:
                    b = list(a)
                    b[i] -= 1
                    if self.contains(b, scale):
                        minimal = False
                        break
            if minimal:
                pts.append(a)
        return minimalize(pts)


def integral_closure(ideal: MonomialIdeal, power: int = 1) -> MonomialIdeal:
    """Integral closure of ideal^power via lattice points of power * NP(ideal)."""
    if power == 0:
        return MonomialIdeal([(0,) * ideal.nvars], ideal.nvars)
    poly = NewtonPolyhedron(ideal.gens, ideal.nvars)
    return MonomialIdeal(poly.minimal_lattice_points(power), ideal.nvars)
