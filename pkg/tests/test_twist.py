import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsuper.errors import CounitViolation, ParseError
from qsuper.scalars import HSeries
from qsuper.twist import (apply_gauge, axiom_residuals, compose_gauges, dump_structure,
                          load_structure, plain_hexagons, random_gauge, residual,
                          shipped_structures, t_add, t_inverse, t_mul)


def zero_residuals(S) -> bool:
    return all(v == 0 for v in axiom_residuals(S).values())


def same_structure(A, B) -> bool:
    if residual(A.R, B.R) != 0 or residual(A.Phi, B.Phi) != 0:
        return False
    return all(residual(A.coproduct[i], B.coproduct[i]) == 0 for i in A.coproduct)


def test_shipped():
    assert {"exterior1", "exterior2", "sweedler"} <= set(shipped_structures())


@pytest.mark.parametrize("name", ["exterior1", "exterior2", "sweedler"])
def test_untwisted_structures_satisfy_axioms(name):
    assert zero_residuals(load_structure(name))


@pytest.mark.parametrize("name", ["exterior1", "exterior2", "sweedler"])
def test_identity_gauge(name):
    S = load_structure(name)
    T = apply_gauge(S, S.one(2))
    assert same_structure(S, T)


def test_counit_violation():
    S = load_structure("exterior1")
    J = dict(S.one(2))
    J[(0, 0)] = HSeries([1, 1, 0, 0])
    with pytest.raises(CounitViolation):
        apply_gauge(S, J)


def test_corrupted_phi_breaks_pentagon():
    S = load_structure("exterior2")
    # h * (xy (x) 1 (x) xy): even, but not a 3-cocycle
    xy = [i for i, p in enumerate(S.parity) if p == 0 and i != S.unit][0]
    S.Phi = t_add(S, S.Phi, {(xy, S.unit, xy): HSeries([0, 1, 0, 0])})
    res = axiom_residuals(S)
    assert res["pentagon"] != 0


@pytest.mark.parametrize("name,seed", [("exterior1", 1), ("exterior2", 2), ("sweedler", 3)])
def test_twisted_structures_satisfy_axioms(name, seed):
    S = load_structure(name)
    T = apply_gauge(S, random_gauge(S, random.Random(seed)))
    assert zero_residuals(T)
    assert not same_structure(S, T)


def test_plain_hexagons_flagged_after_twist():
    S = load_structure("sweedler")
    T = apply_gauge(S, random_gauge(S, random.Random(5)))
    assert all(v == 0 for v in plain_hexagons(S).values())
    assert any(v != 0 for v in plain_hexagons(T).values())
    assert axiom_residuals(T)["hexagon_left"] == 0


def test_gauge_inverse_undoes_gauge():
    S = load_structure("exterior2")
    J = random_gauge(S, random.Random(7))
    back = apply_gauge(apply_gauge(S, J), t_inverse(S, J))
    assert same_structure(S, back)
    assert residual(t_mul(S, J, t_inverse(S, J)), S.one(2)) == 0


@settings(max_examples=6)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.sampled_from(["exterior1", "exterior2"]))
def test_twist_composition(seed_a, seed_b, name):
    S = load_structure(name)
    J = random_gauge(S, random.Random(seed_a))
    Jp = random_gauge(S, random.Random(seed_b))
    stepwise = apply_gauge(apply_gauge(S, J), Jp)
    once = apply_gauge(S, compose_gauges(S, J, Jp))
    assert same_structure(stepwise, once)
    assert zero_residuals(stepwise)


def test_document_roundtrip_and_validation():
    S = load_structure("sweedler")
    again = load_structure(json.dumps(dump_structure(S)))
    assert same_structure(S, again) and again.product == S.product
    doc = dump_structure(S)
    doc["counit"][0] = 1.0
    with pytest.raises(ParseError):
        load_structure(json.dumps(doc))
    doc = dump_structure(S)
    doc["parity"] = doc["parity"][:-1]
    with pytest.raises(ParseError):
        load_structure(json.dumps(doc))


def test_random_gauge_is_counital_and_even():
    S = load_structure("sweedler")
    J = random_gauge(S, random.Random(0))
    assert all((S.parity[a] + S.parity[b]) % 2 == 0 for a, b in J)
    assert J[(S.unit, S.unit)][0] == Fraction(1)
