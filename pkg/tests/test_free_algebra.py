import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsuper.cartan import RootWeight, catalog_lookup
from qsuper.errors import ParseError
from qsuper.free_algebra import (AlgebraElement, DecoratedTensor, coproduct, coproduct_on_leg,
                                 counit_on_leg, format_word, multiply, parse_word, tensor_of,
                                 word_weight, words_of_weight)
from qsuper.scalars import FieldScalar, ONE

from .strategies import data_names, homogeneous

SL3 = catalog_lookup("sl3")
SL21 = catalog_lookup("sl(2|1)")


def E(datum, text):
    return AlgebraElement.parse(datum, text)


def test_products():
    assert multiply(E(SL3, "1 : E1"), E(SL3, "1 : E2")) == E(SL3, "1 : E1*E2")
    assert (E(SL3, "1 : E1 ; 1 : E2") * E(SL3, "1 : E1")) == E(SL3, "1 : E1*E1 ; 1 : E2*E1")
    assert word_weight((0, 1, 0), 2) == RootWeight((2, 1))
    assert words_of_weight(RootWeight((2, 1))) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_word_parsing():
    assert parse_word("E1*E2*E1") == (0, 1, 0)
    assert parse_word("1") == ()
    assert format_word((0, 1)) == "E1*E2"
    with pytest.raises(ParseError):
        parse_word("E1*X2")


def leg(word, k):
    return (tuple(word), tuple(k))


def test_coproduct_of_generator():
    got = coproduct(E(SL3, "1 : E1"))
    assert got.terms == {(leg([0], [0, 0]), leg([], [1, 0])): ONE,
                         (leg([], [0, 0]), leg([0], [0, 0])): ONE}
    assert coproduct(AlgebraElement.one(SL3)).terms == {(leg([], [0, 0]), leg([], [0, 0])): ONE}


def test_coproduct_of_product_by_hand():
    # (E1 (x) K1 + 1 (x) E1)(E2 (x) K2 + 1 (x) E2), then K1 E2 = q^(a1,a2) E2 K1
    got = coproduct(E(SL3, "1 : E1*E2"))
    want = {(leg([0, 1], [0, 0]), leg([], [1, 1])): ONE,
            (leg([0], [0, 0]), leg([1], [1, 0])): FieldScalar.q(-1),
            (leg([1], [0, 0]), leg([0], [0, 1])): ONE,
            (leg([], [0, 0]), leg([0, 1], [0, 0])): ONE}
    assert got.terms == want


def test_odd_square_coproduct_cancels():
    # cross terms E2 (x) K2 E2 and -(E2 (x) E2 K2) cancel since (a2, a2) = 0
    got = coproduct(E(SL21, "1 : E2*E2"))
    assert got.terms == {(leg([1, 1], [0, 0]), leg([], [0, 2])): ONE,
                         (leg([], [0, 0]), leg([1, 1], [0, 0])): ONE}


@given(data_names.flatmap(lambda d: st.tuples(homogeneous(d, 3), homogeneous(d, 3))))
def test_coproduct_is_multiplicative(xy):
    x, y = xy
    assert coproduct(x * y) == coproduct(x) * coproduct(y)


@given(data_names.flatmap(lambda d: homogeneous(d, 4)))
def test_coassociative(x):
    D = coproduct(x)
    assert coproduct_on_leg(D, 0) == coproduct_on_leg(D, 1)


@given(data_names.flatmap(lambda d: homogeneous(d, 4)))
def test_counit(x):
    D = coproduct(x)
    base = tensor_of(x.datum, x)
    assert counit_on_leg(D, 0) == base
    # (id (x) eps) leaves K^wt on nothing: the right leg must be the empty word with K^0
    right = counit_on_leg(D, 1)
    assert right == base


@given(data_names.flatmap(lambda d: st.tuples(homogeneous(d, 2), homogeneous(d, 2),
                                              homogeneous(d, 2))))
def test_tensor_product_associative(xyz):
    a, b, c = (coproduct(t) for t in xyz)
    assert (a * b) * c == a * (b * c)


def test_parse_linear_combination():
    x = E(SL3, "q + 1 : E1*E2 ; -2 : E2*E1")
    y = E(SL3, "q : E1*E2") + E(SL3, "1 : E1*E2") - E(SL3, "2 : E2*E1")
    assert x == y
    assert x.format() == "(q + 1)*E1*E2 + (-2)*E2*E1"
    assert isinstance(coproduct(x), DecoratedTensor)
