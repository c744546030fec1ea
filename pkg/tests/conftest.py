"""Shared fixtures, random generators and independent oracles."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement

import pytest

from chernlab.core import PrimeField, PolyRing
from chernlab.groebner import poly_to_elem
from chernlab.homology import GradedModulePresentation, preimage
from chernlab.lab import buchsbaum_ring
from chernlab.rings import PresentedRing

P = 32003
FP = PrimeField(P)


# ---------------------------------------------------------------------------
# rings used across the suite


def plane(field=FP):
    return PresentedRing.from_strings(["x", "y"], [], field, name="plane")


def space(field=FP):
    return PresentedRing.from_strings(["x", "y", "z"], [], field, name="space")


def cone(field=FP):
    return PresentedRing.from_strings(["x", "y", "z"], ["x*y - z^2"], field, name="cone")


def z_ring(field=FP):
    return PresentedRing.from_strings(["x", "y", "z"], ["x*z", "y*z", "z^2"], field, name="zring")


def two_planes(field=FP):
    return PresentedRing.from_strings(["x", "y", "z", "w"], ["x*z", "x*w", "y*z", "y*w"],
                                      field, name="twoplanes")


def idealization(field=FP):
    return PresentedRing.from_strings(["x", "y", "z", "u", "v"],
                                      ["u^2", "u*v", "v^2", "y*u - x*v"], field, name="ideal")


def buchsbaum_fp():
    return buchsbaum_ring(FP)


CM_RINGS = {"plane": plane, "space": space, "cone": cone}
NON_CM_RINGS = {"zring": z_ring, "twoplanes": two_planes, "buchsbaum": buchsbaum_fp,
                "idealization": idealization}


# ---------------------------------------------------------------------------
# random data


def random_form(ring: PolyRing, degree: int, rng: random.Random):
    """Dense random homogeneous form of the given degree."""
    f = ring.zero()
    for combo in combinations_with_replacement(range(ring.nvars), degree):
        e = [0] * ring.nvars
        for i in combo:
            e[i] += 1
        f = f + ring.monomial(tuple(e), ring.field.random(rng))
    return f


def random_parameter_ideal(R: PresentedRing, rng: random.Random, degrees=(1, 1, 2), tries=20):
    """d random forms generating an m-primary ideal of R."""
    for _ in range(tries):
        gens = [random_form(R.ambient, rng.choice(degrees), rng) for _ in range(R.dim)]
        if any(g.is_zero() for g in gens):
            continue
        J = R.ideal(gens)
        if J.is_m_primary():
            return J
    raise RuntimeError("no parameter ideal found")


def random_monomial_gens(rng: random.Random, nvars: int, m_primary=True, maxexp=4, extra=3):
    """Exponent vectors of a random monomial ideal (m-primary by default)."""
    gens = []
    if m_primary:
        for i in range(nvars):
            e = [0] * nvars
            e[i] = rng.randint(1, maxexp)
            gens.append(tuple(e))
    for _ in range(rng.randint(0 if m_primary else 1, extra)):
        gens.append(tuple(rng.randint(0, maxexp - 1) for _ in range(nvars)))
    gens = [g for g in gens if any(g)] or [(1,) + (0,) * (nvars - 1)]
    return gens


# ---------------------------------------------------------------------------
# oracles


def _rank_mod_p(rows: list[list[int]], p: int = P) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                t = rows[i][c]
                rows[i] = [(a - t * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def macaulay_member(f, gens) -> bool:
    """Membership of a homogeneous f in a homogeneous ideal via the degree-D Macaulay matrix."""
    if f.is_zero():
        return True
    ring = f.ring
    D = f.degree()
    rows = []
    for g in gens:
        k = D - g.degree()
        if k < 0 or g.is_zero():
            continue
        for combo in combinations_with_replacement(range(ring.nvars), k):
            e = [0] * ring.nvars
            for i in combo:
                e[i] += 1
            rows.append(g.mul_monomial(tuple(e)))
    cols = sorted({m for h in rows + [f] for m in h.terms})
    idx = {m: j for j, m in enumerate(cols)}

    def vec(h):
        v = [0] * len(cols)
        for m, c in h.terms.items():
            v[idx[m]] = int(c) % P
        return v
    M = [vec(h) for h in rows]
    if not M:
        return False
    return _rank_mod_p(M) == _rank_mod_p(M + [vec(f)])


def newton_contains_lp(gens, point) -> bool:
    """Is ``point`` in conv(gens) + R_{>=0}^n?  Solved as a linear feasibility problem."""
    import numpy as np
    from scipy.optimize import linprog

    G = np.array(gens, dtype=float).T          # n x k
    k = G.shape[1]
    res = linprog(np.zeros(k), A_ub=G, b_ub=np.array(point, dtype=float) + 1e-9,
                  A_eq=np.ones((1, k)), b_eq=[1.0], bounds=[(0, None)] * k, method="highs")
    return res.status == 0


def is_nonzerodivisor(M: GradedModulePresentation, f) -> bool:
    """(U : f) == U for the relation module U of M, computed by a preimage."""
    ring = M.ring
    fe = poly_to_elem(f)
    cols = [{(c,) + mon[1:]: v for mon, v in fe.items()} for c in range(M.rank)]
    colon = preimage(cols, [s + f.degree() for s in M.shifts], M.rank, list(M.shifts), ring,
                     sub=list(M.relations))
    gb = M.gb
    for v in colon:
        if not gb.contains_elem(v):
            return False
    return True


def depth_by_regular_sequence(M: GradedModulePresentation, rng: random.Random) -> int:
    """Length of a maximal M-regular sequence of generic linear forms."""
    count = 0
    while not M.is_zero() and count < M.ring.nvars:
        f = random_form(M.ring, 1, rng)
        if not is_nonzerodivisor(M, f):
            break
        M = M.quotient_by_elements([f])
        count += 1
    return count


@pytest.fixture
def rng():
    return random.Random(20261019)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
