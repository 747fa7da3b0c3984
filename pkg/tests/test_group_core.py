import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from acyclic_matching.errors import CarrierMismatch, InvalidArgument, InvalidCarrier, NotEnumerable
from acyclic_matching.group_core import (
    DYADICS,
    INTEGERS,
    RATIONALS,
    carrier_from_descriptor,
    cyclic,
    decode_element,
    elem_arith,
    element_order,
    encode_element,
    enumerate_elements,
    legendre,
    make_carrier,
    parse_group_spec,
    quadratic_residues,
)

Z7 = cyclic(7)
V4 = make_carrier("finite", [2, 2])


def test_make_carrier_basic():
    assert make_carrier("finite", [7]).size == 7
    assert V4.size == 4 and V4.exponent == 2
    with pytest.raises(InvalidCarrier):
        make_carrier("finite", [1])
    with pytest.raises(InvalidCarrier):
        make_carrier("bogus")


def test_small_arithmetic():
    assert elem_arith(Z7, "add", 3, 5) == 1
    assert elem_arith(DYADICS, "add", Fraction(1, 2), Fraction(1, 2)) == 1
    assert elem_arith(V4, "neg", (1, 0)) == (1, 0)
    with pytest.raises(CarrierMismatch):
        elem_arith(DYADICS, "add", Fraction(1, 3), Fraction(0))
    with pytest.raises(InvalidArgument):
        elem_arith(Z7, "mul", 1, 2)


def test_orders():
    assert element_order(Z7, 3) == 7
    assert element_order(INTEGERS, 2) == math.inf
    for c in (Z7, V4, INTEGERS, DYADICS, RATIONALS):
        assert element_order(c, c.zero()) == 1


def test_enumeration():
    assert enumerate_elements(cyclic(4)) == [0, 1, 2, 3]
    assert enumerate_elements(V4) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(NotEnumerable):
        enumerate_elements(INTEGERS)


def test_legendre_examples():
    assert legendre(1, 7) == 1
    assert legendre(3, 7) == -1
    assert legendre(0, 11) == 0
    with pytest.raises(InvalidArgument):
        legendre(3, 9)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 101])
def test_residues_match_squares(p):
    # oracle: square every unit
    squares = sorted({n * n % p for n in range(1, p)})
    assert quadratic_residues(p) == squares
    for a in range(p):
        expected = 0 if a == 0 else (1 if a in squares else -1)
        assert legendre(a, p) == expected


def test_spec_parsing_round_trip():
    for s in ("z:7", "z:2x2", "z:4x6", "int", "dyadic", "rat"):
        c = parse_group_spec(s)
        assert parse_group_spec(c.spec) == c
        assert carrier_from_descriptor(c.descriptor()) == c
    with pytest.raises(InvalidCarrier):
        parse_group_spec("z:0")


def test_cross_carrier_rejected():
    with pytest.raises(CarrierMismatch):
        elem_arith(Z7, "add", 1, (0, 1))
    with pytest.raises(CarrierMismatch):
        Z7.element(Fraction(1, 2))


factor_lists = st.lists(st.integers(2, 9), min_size=1, max_size=3)


@given(factor_lists, st.data())
def test_finite_group_axioms(factors, data):
    c = make_carrier("finite", factors)
    elems = c.elements()
    assert len(elems) == math.prod(factors)
    x, y, z = (data.draw(st.sampled_from(elems)) for _ in range(3))
    assert c.add(x, y) == c.add(y, x)
    assert c.add(c.add(x, y), z) == c.add(x, c.add(y, z))
    assert c.add(x, c.neg(x)) == c.zero()
    assert c.add(x, c.zero()) == x
    # order divides the exponent and is minimal
    n = c.order(x)
    assert c.exponent % n == 0
    assert c.scale(n, x) == c.zero()
    assert all(c.scale(k, x) != c.zero() for k in range(1, n))


fractions = st.fractions(max_denominator=50)


@given(fractions, fractions)
def test_rational_group_axioms(x, y):
    assert RATIONALS.add(x, y) == x + y
    assert RATIONALS.sub(x, y) == x - y
    assert RATIONALS.order(x) == (1 if x == 0 else math.inf)


@given(st.integers(-10**6, 10**6), st.integers(0, 12))
def test_dyadic_encoding_round_trip(k, e):
    x = Fraction(k, 2**e)
    assert decode_element(DYADICS, encode_element(DYADICS, x)) == x


@given(factor_lists, st.data())
def test_finite_encoding_round_trip(factors, data):
    c = make_carrier("finite", factors)
    x = data.draw(st.sampled_from(c.elements()))
    assert decode_element(c, encode_element(c, x)) == x
