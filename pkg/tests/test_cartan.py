import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsuper.cartan import (CATALOG, RootWeight, WeightFunctional, catalog_lookup, co_jacobi,
                           cobracket_generator, load_cartan, root_pairing, symmetrize, wedge)
from qsuper.errors import DegeneratePairing, NotSymmetrizable, ParseError, UnknownName


def test_load_examples():
    assert load_cartan({"A": [[2, -1], [-1, 2]], "tau": []}).d == (1, 1)
    sl21 = load_cartan({"A": [[2, -1], [-1, 0]], "tau": [2]})
    assert sl21.d == (1, 1) and sl21.is_odd(1) and not sl21.is_odd(0)
    with pytest.raises(NotSymmetrizable):
        load_cartan({"A": [[2, -1], [0, 2]]})


def test_symmetrize_examples():
    assert symmetrize([[2]]) == (1,)
    assert symmetrize([[2, -1], [-1, 0]]) == (1, 1)
    assert symmetrize([[2, -2], [-1, 2]]) == (1, 2)


def test_load_rejects_bad_documents():
    for doc in ['{"A": [[2.0]]}', '{"A": [[2, -1]]}', '{"A": [[2]], "tau": [3]}', "not json",
                '{"A": [[true]]}']:
        with pytest.raises(ParseError):
            load_cartan(doc)


def test_root_pairing_examples():
    sl3 = catalog_lookup("sl3")
    a1, a2 = RootWeight.simple(2, 0), RootWeight.simple(2, 1)
    assert root_pairing(sl3, a1, a1) == 2
    assert root_pairing(sl3, a1, RootWeight.zero(2)) == 0
    sl21 = catalog_lookup("sl(2|1)")
    assert root_pairing(sl21, a2, a2) == 0


def test_functional_pairing_uses_inverse_form():
    sl2 = catalog_lookup("sl2")
    lam = WeightFunctional.of([1])
    # the fundamental weight is alpha/2, so (lam, lam) = 1/2
    assert root_pairing(sl2, lam, lam) == Fraction(1, 2)
    assert root_pairing(sl2, lam, RootWeight((1,))) == 1


def test_singular_form_needs_extension():
    sl22 = catalog_lookup("sl(2|2)")
    lam = WeightFunctional.of([1, 0, 0])
    with pytest.raises(DegeneratePairing):
        root_pairing(sl22, lam, lam)
    ext = WeightFunctional.of([1, 0, 0], extension=[1, 1, 1])
    assert root_pairing(sl22, ext, RootWeight((1, 0, 0))) == 1


def test_cobracket_examples():
    sl3 = catalog_lookup("sl3")
    assert cobracket_generator(sl3, ("e", 0)) == wedge(sl3, ("e", 0), ("h", 0), Fraction(1, 2))
    assert cobracket_generator(sl3, ("h", 0)) == {}
    sp4 = catalog_lookup("sp4")
    assert sp4.d[1] == 2
    assert cobracket_generator(sp4, ("f", 1)) == wedge(sp4, ("f", 1), ("h", 1), Fraction(-1))


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_data(name):
    datum = catalog_lookup(name)
    assert load_cartan(json.dumps(datum.canonical())) == datum
    for i in range(datum.s):
        for kind in "efh":
            assert all(v == 0 for v in co_jacobi(datum, (kind, i)).values())


def test_catalog_unknown():
    with pytest.raises(UnknownName):
        catalog_lookup("bogus")
    assert catalog_lookup("sl(2|1)").canonical()["A"] == [[2, -1], [-1, 0]]


@st.composite
def symmetrizable(draw):
    s = draw(st.integers(1, 4))
    d = [Fraction(1)] + [Fraction(draw(st.integers(1, 3)), draw(st.integers(1, 2))) for _ in range(s - 1)]
    B = [[0] * s for _ in range(s)]
    for i in range(s):
        B[i][i] = draw(st.sampled_from([0, 2])) * d[i]
        for j in range(i + 1, s):
            B[i][j] = B[j][i] = -draw(st.integers(0, 2))
    A = [[Fraction(B[i][j]) / d[i] for j in range(s)] for i in range(s)]
    return A


@given(symmetrizable())
def test_symmetrize_solves_constraints(A):
    d = symmetrize(A)
    s = len(A)
    assert d[0] == 1
    for i in range(s):
        for j in range(s):
            assert d[i] * A[i][j] == d[j] * A[j][i]


@given(st.sampled_from(sorted(CATALOG)), st.data())
def test_root_pairing_bilinear_symmetric(name, data):
    datum = catalog_lookup(name)
    coords = st.lists(st.integers(0, 3), min_size=datum.s, max_size=datum.s)
    x, y, z = (RootWeight(tuple(data.draw(coords))) for _ in range(3))
    assert root_pairing(datum, x, y) == root_pairing(datum, y, x)
    assert root_pairing(datum, x + y, z) == root_pairing(datum, x, z) + root_pairing(datum, y, z)
