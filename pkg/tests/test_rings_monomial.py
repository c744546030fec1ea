import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from chernlab.errors import PreconditionError
from chernlab.monomial import (MonomialIdeal, NewtonPolyhedron, colength, hilbert_data,
                               integral_closure, standard_monomials)
from chernlab.rings import PresentedRing, jacobian_ideal, random_superficial_reduction

from conftest import (buchsbaum_fp, cone, newton_contains_lp, plane, random_monomial_gens,
                      space, z_ring)


# ---------------------------------------------------------------------------
# presented rings and ideals


def test_colength_and_dimension():
    R = plane()
    assert R.ideal(["x^2", "x*y", "y^3"]).colength() == 4
    assert R.dim == 2
    assert cone().dim == 2
    assert z_ring().dim == 2
    assert R.ideal(["x"]).dim() == 1


def test_intersection_colon_saturation():
    R = plane()
    x, y = R.ambient.gens()
    assert R.ideal(["x"]).intersect(R.ideal(["y"])) == R.ideal(["x*y"])
    assert R.ideal(["x^2", "x*y"]).colon_element(x) == R.ideal(["x", "y"])
    assert R.ideal(["x^2", "x*y"]).saturation() == R.ideal(["x"])


def test_m_primary_detection():
    R = cone()
    assert R.ideal(["x", "y"]).is_m_primary()
    assert not R.ideal(["x"]).is_m_primary()
    assert z_ring().ideal(["x", "y"]).is_m_primary()


def test_power_and_product():
    R = plane()
    m = R.maximal_ideal()
    assert m.power(0).is_unit()
    assert m.power(3) == m * m * m
    assert m.power(3).colength() == 6


def test_quotient_by_relations():
    R = z_ring()
    assert R.reduce(R.parse("x*z + y")) == R.parse("y")


def test_jacobian_ideal_of_cone_is_m():
    R = cone()
    L = jacobian_ideal(R)
    assert L.is_m_primary() and L.colength() == 1


def test_jacobian_ideal_of_buchsbaum_instance():
    # generated by quadrics, so the colength is at least that of m^2
    L = jacobian_ideal(buchsbaum_fp())
    assert L.colength() == 5


def test_superficial_reduction_drops_dimension():
    R = space()
    out = random_superficial_reduction(R, R.maximal_ideal(), 1, seed=3)
    assert out.ring.dim == 2
    assert out.checked["e0"] == (1, 1) and out.checked["e1"] == (0, 0)


def test_superficial_reduction_needs_m_primary():
    R = plane()
    with pytest.raises(PreconditionError):
        random_superficial_reduction(R, R.ideal(["x"]), 1, seed=0)


# ---------------------------------------------------------------------------
# monomial ideals


def _brute_colength(gens, nvars, box=12):
    I = MonomialIdeal(gens, nvars)
    return sum(1 for a in product(range(box), repeat=nvars) if not I.contains(a))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_colength_matches_enumeration(seed, n):
    gens = random_monomial_gens(random.Random(seed), n)
    assert colength(gens, n) == _brute_colength(gens, n)
    assert len(standard_monomials(gens, n)) == colength(gens, n)


def test_hilbert_data_of_non_artinian_quotient():
    dim, _ = hilbert_data([(1, 1)], 2)
    assert dim == 1
    assert colength([(1, 1)], 2) is None


def test_cubic_closure():
    I = MonomialIdeal([(3, 0), (0, 3)], 2)
    assert integral_closure(I).gens == MonomialIdeal([(3, 0), (2, 1), (1, 2), (0, 3)], 2).gens
    assert NewtonPolyhedron(I.gens, 2).count_outside() == 6


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_closure_agrees_with_linear_programming(seed, n):
    rng = random.Random(seed)
    gens = random_monomial_gens(rng, n, maxexp=4)
    cl = integral_closure(MonomialIdeal(gens, n))
    top = MonomialIdeal(gens, n).max_exponents()
    for a in product(*(range(t + 1) for t in top)):
        assert cl.contains(a) == newton_contains_lp(gens, a)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_closure_operator_axioms(seed, n):
    rng = random.Random(seed)
    I = MonomialIdeal(random_monomial_gens(rng, n, maxexp=3), n)
    J = I + MonomialIdeal(random_monomial_gens(rng, n, m_primary=False, maxexp=3), n)
    cI, cJ = integral_closure(I), integral_closure(J)
    assert I.issubset(cI)                        # extensive
    assert integral_closure(cI) == cI            # idempotent
    assert cI.issubset(cJ)                       # monotone
    assert (cI * cJ).issubset(integral_closure(I * J))
    assert (cI * cI).issubset(integral_closure(I, 2))
    assert integral_closure(I, 2) == integral_closure(I * I)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
def test_count_outside_matches_closure_colength(seed, n, k):
    I = MonomialIdeal(random_monomial_gens(random.Random(seed), n, maxexp=3), n)
    assert NewtonPolyhedron(I.gens, n).count_outside(k) == integral_closure(I, k).colength()
