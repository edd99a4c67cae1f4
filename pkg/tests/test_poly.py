from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from genlocoh.poly import (
    GREVLEX, LEX, Cmp, FieldSpec, ParseError, PolyRing, Polynomial, RingMismatch, compare,
    format_polynomial, parse_polynomial,
)

Q3 = PolyRing(("x", "y", "z"), FieldSpec(0))
F3 = PolyRing(("x", "y", "z"), FieldSpec(7))


def polys(R, max_terms=5, max_deg=3):
    exps = st.tuples(*[st.integers(0, max_deg)] * R.nvars)
    if R.field.characteristic:
        coeffs = st.integers(0, R.field.characteristic - 1)
    else:
        coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: Polynomial(R, d))


any_poly = st.sampled_from([Q3, F3]).flatmap(lambda R: st.tuples(polys(R), polys(R), polys(R)))


def test_field_validation():
    assert FieldSpec(0).kind == "rationals"
    assert FieldSpec(101).kind == "prime-field"
    with pytest.raises(ValueError):
        FieldSpec(6)
    with pytest.raises(ValueError):
        FieldSpec(-3)
    with pytest.raises(ValueError):
        FieldSpec(2**63 + 29)


def test_add_examples():
    R = PolyRing(("x", "y"), FieldSpec(0))
    x, y = R.gens()
    assert (x + y) + (x - y) == 2 * x
    f = x**2 - 3 * y
    assert f + R.zero() == f
    F2 = PolyRing(("x", "y"), FieldSpec(2))
    assert F2.var(0) + F2.var(0) == F2.zero()


def test_mul_examples():
    R = PolyRing(("x", "y"), FieldSpec(0))
    x, y = R.gens()
    assert x * y == R.monomial((1, 1))
    assert (x + y) * (x - y) == x**2 - y**2
    assert (x + y) * R.one() == x + y


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        Q3.var(0) + F3.var(0)
    with pytest.raises(RingMismatch):
        Q3.var(0) * PolyRing(("x", "y"), FieldSpec(0)).var(0)


def test_compare():
    assert compare((2, 0), (1, 1), GREVLEX) is Cmp.GREATER
    assert compare((0, 3), (2, 0), GREVLEX) is Cmp.GREATER
    assert compare((1, 2), (1, 2), LEX) is Cmp.EQUAL
    assert compare((0, 3), (1, 0), LEX) is Cmp.LESS
    # grevlex breaks ties by the smallest power of the last variable
    assert compare((1, 0, 1), (0, 2, 0), GREVLEX) is Cmp.LESS
    with pytest.raises(ValueError):
        compare((1,), (1, 0))


def test_leading_term():
    R = PolyRing(("x", "y"), FieldSpec(0))
    assert R.parse("x^2 + x*y + y^2").leading_term() == ((2, 0), 1)
    assert R.parse("3*x").leading_term() == ((1, 0), 3)
    assert R.parse("x + y^3").leading_term(LEX) == ((1, 0), 1)
    assert R.parse("x + y^3").leading_term(GREVLEX) == ((0, 3), 1)
    with pytest.raises(ValueError):
        R.zero().leading_term()


def test_no_zero_coefficients_stored():
    f = Polynomial(F3, {(1, 0, 0): 7, (0, 1, 0): 3})
    assert f.terms == (((0, 1, 0), 3),)


def test_coefficients_are_exact():
    R = PolyRing(("x",), FieldSpec(0))
    f = R.parse("1/3*x") * 3
    assert f == R.var(0)
    assert isinstance(R.parse("1/3*x").coefficient((1,)), Fraction)


def test_parse_examples():
    R = PolyRing(("x", "y"), FieldSpec(0))
    f = parse_polynomial("3*x^2*y - y^3", R)
    assert f.as_dict() == {(2, 1): 3, (0, 3): -1}
    assert parse_polynomial(" - x  +  2 ", R) == 2 - R.var(0)
    assert parse_polynomial("x^0", R) == R.one()
    assert parse_polynomial("x*x", R) == R.parse("x^2")


@pytest.mark.parametrize("text,col", [("x +* y", 4), ("x + w", 5), ("x^", 3), ("2 3", 3), ("", 1)])
def test_parse_errors_carry_a_column(text, col):
    R = PolyRing(("x", "y"), FieldSpec(0))
    with pytest.raises(ParseError) as err:
        parse_polynomial(text, R)
    assert err.value.column == col


def test_mod_p_printing_uses_symmetric_residues():
    R = PolyRing(("x", "y"), FieldSpec(101))
    assert format_polynomial(R.parse("100*x + 2*y")) == "-x + 2*y"


@given(any_poly)
def test_ring_axioms(t):
    f, g, h = t
    R = f.ring
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + (-f) == R.zero()
    assert f * R.one() == f


@given(any_poly)
def test_leading_term_is_multiplicative(t):
    f, g, _ = t
    if not f or not g:
        return
    for order in (GREVLEX, LEX):
        (ef, cf), (eg, cg) = f.leading_term(order), g.leading_term(order)
        e, c = (f * g).leading_term(order)
        assert e == tuple(a + b for a, b in zip(ef, eg))
        assert c == f.ring.field(cf * cg)


@given(any_poly)
def test_print_parse_round_trip(t):
    for f in t:
        assert parse_polynomial(format_polynomial(f), f.ring) == f


@given(st.tuples(*[st.integers(0, 4)] * 3), st.tuples(*[st.integers(0, 4)] * 3),
       st.tuples(*[st.integers(0, 4)] * 3))
def test_orders_are_multiplicative_total_orders(a, b, c):
    for order in (GREVLEX, LEX):
        ab = compare(a, b, order)
        assert compare(b, a, order) == -ab
        ac = compare(tuple(x + z for x, z in zip(a, c)), tuple(y + z for y, z in zip(b, c)), order)
        assert ac == ab
        if any(c):
            assert compare(tuple(x + z for x, z in zip(a, c)), a, order) is Cmp.GREATER
