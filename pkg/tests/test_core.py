from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chernlab.core import QQ, PolyRing, PrimeField, make_field, parse_polynomial, VectorPolynomial
from chernlab.errors import ContextError, DomainError, ParseError

F = PrimeField(32003)
S = PolyRing(["x", "y", "z"], F)

coeffs = st.integers(min_value=-50, max_value=50)
exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, coeffs, max_size=6).map(lambda d: S.const(0) + _from(d))


def _from(d):
    f = S.zero()
    for e, c in d.items():
        f = f + S.monomial(e, c)
    return f


def test_field_inverse_and_norm():
    assert F.norm(-1) == 32002
    assert F.norm(F.inv(7) * 7) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)


@pytest.mark.parametrize("spec,name", [("QQ", "QQ"), ("qq", "QQ"), ("fp32003", "Fp 32003"),
                                       ("Fp 101", "Fp 101"), (7, "Fp 7"), (None, "Fp 32003")])
def test_make_field(spec, name):
    assert make_field(spec).name == name


def test_make_field_rejects_composite():
    with pytest.raises(DomainError):
        make_field(10)


def test_parse_and_print():
    f = S.parse("3*x^2*y - y*z + 7")
    assert f == parse_polynomial(str(f), S)
    assert f.degree() == 3
    assert not f.is_homogeneous()
    assert S.parse("(x+y)^2") == S.parse("x^2 + 2*x*y + y^2")


def test_parse_error_reports_column():
    with pytest.raises(ParseError) as info:
        S.parse("x + * y")
    assert info.value.column is not None


def test_unknown_variable():
    with pytest.raises(ParseError):
        S.parse("x + w")


def test_mixing_rings_is_rejected():
    T = PolyRing(["x", "y"], F)
    with pytest.raises(ContextError):
        S.var("x") + T.var("x")


def test_derivative_and_substitution():
    x, y, z = S.gens()
    f = x**3 * y + z
    assert f.diff("x") == 3 * x**2 * y
    assert f.substitute([y, x, S.one()]) == y**3 * x + 1


def test_grevlex_leading_monomial():
    x, y, z = S.gens()
    assert (x * z**2 + y**3).leading_monomial == (0, 3, 0)
    assert (x**2 + x * y * z).leading_monomial == (1, 1, 1)


def test_vector_polynomial():
    x, y, _ = S.gens()
    v = VectorPolynomial.from_polys([x, y])
    w = v.scale_by(x) - VectorPolynomial.from_polys([x * x, x * y])
    assert w.is_zero()


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == S.zero()


@settings(max_examples=60, deadline=None)
@given(polys)
def test_print_parse_round_trip(f):
    assert S.parse(str(f)) == f


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_degree_of_product(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert (f * g).degree() == f.degree() + g.degree()
