import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsuper.braiding import braid_representation
from qsuper.cartan import catalog_lookup
from qsuper.errors import PathCollision, TruncationWarning
from qsuper.kz import (KZSystem, Path, _dense_flip, adjacent_flip, casimir_action, dk_compare,
                       exact_trace_series, generator_path, rkz_consistency, slot_casimirs,
                       transport)
from qsuper.verma import build_verma, irreducible_quotient

from .oracles import diagonal_invariants, sl2_casimir_vector, sl21_casimir_fundamental

SL2 = catalog_lookup("sl2")
SL21 = catalog_lookup("sl(2|1)")


def irreducible(datum, lam, cut=4):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return irreducible_quotient(build_verma(datum, lam, cut))


V2 = irreducible(SL2, [1])
V21 = irreducible(SL21, [1, 0])
TRIV = irreducible(SL2, [0])


@pytest.mark.parametrize("datum,V,oracle", [(SL2, V2, sl2_casimir_vector),
                                            (SL21, V21, sl21_casimir_fundamental)])
def test_casimir_matches_matrix_oracle(datum, V, oracle):
    got = casimir_action(datum, V, V).numeric().real
    want = oracle()
    for a, b in zip(diagonal_invariants(got), diagonal_invariants(want)):
        assert np.allclose(a, b, atol=1e-14)
    assert np.allclose(sorted(np.linalg.eigvals(got).real), sorted(np.linalg.eigvals(want).real))


def test_casimir_examples():
    assert casimir_action(SL2, V2, V2).eigenvalues() == [-1.5, 0.5, 0.5, 0.5]
    Z = casimir_action(SL2, TRIV, V2).numeric()
    assert not Z.any()
    for V in (V2, V21):
        om = casimir_action(V.datum, V, V).numeric()
        f = _dense_flip(V.parity, V.parity)
        assert np.allclose(f @ om @ f, om, atol=0)


def test_slot_casimirs_n3():
    oms = slot_casimirs(casimir_action(SL21, V21, V21), 3)
    P = adjacent_flip(V21.parity, 3, 2)
    assert np.allclose(P @ oms[(1, 2)] @ P, oms[(1, 3)])
    # Omega_12 + Omega_13 + Omega_23 commutes with each Omega_jk
    total = sum(oms.values())
    for m in oms.values():
        assert np.allclose(total @ m, m @ total, atol=1e-13)


def test_identity_cases():
    sys2 = KZSystem(SL21, V21, 2, order=3)
    T = sys2.word([])
    assert np.allclose(T.coeffs[0], np.eye(9)) and not T.coeffs[1:].any()
    triv = KZSystem(SL2, TRIV, 2, order=3)
    T = triv.word("s1")
    assert np.allclose(T.coeffs[0], np.eye(1)) and np.allclose(T.coeffs[1:], 0)


def test_order_zero_is_flip_product():
    sys3 = KZSystem(SL21, V21, 3, order=2)
    T = sys3.word("s1 s2^-1 s1")
    want = adjacent_flip(V21.parity, 3, 1) @ adjacent_flip(V21.parity, 3, 2) @ adjacent_flip(V21.parity, 3, 1)
    assert np.allclose(T.coeffs[0], want, atol=1e-12)


def test_flatness_n3():
    sys3 = KZSystem(SL2, V2, 3, order=4, tol=1e-8)
    a = sys3.word("s1 s2 s1").coeffs
    b = sys3.word("s2 s1 s2").coeffs
    assert np.max(np.abs(a - b)) <= 1e-7


def test_dk_examples():
    for w, order in [("s1 s1", 4)]:
        rows = dk_compare(SL2, V2, 2, [w], order, 1e-8)
        assert len(rows) == order + 1 and max(r.deviation for r in rows) <= 1e-7
    rows = dk_compare(SL21, V21, 2, ["s1"], 3, 1e-8)
    assert max(r.deviation for r in rows) <= 1e-7
    rows = dk_compare(SL2, TRIV, 2, ["s1", "s1^-1"], 3)
    assert all(r.deviation == 0 for r in rows)


def test_exact_trace_series_of_identity():
    rep = braid_representation(SL2, V2, 2)
    ser = exact_trace_series(rep, [], 3)
    assert ser[0] == 4 and all(ser[k] == 0 for k in range(1, 4))


def test_rkz_closed_form():
    for V in (V2, V21):
        res = rkz_consistency(V.datum, V, 4, 1e-8)
        assert res["half_turn"] <= 1e-7 and res["full_loop"] <= 1e-7


def test_path_collision():
    oms = slot_casimirs(casimir_action(SL2, V2, V2), 2)
    through = Path(lambda t: np.array([1.0, 2.0 - t], dtype=complex),
                   lambda t: np.array([0.0, -1.0], dtype=complex), "straight")
    with pytest.raises(PathCollision):
        transport(oms, through, 2, 4, 2, 1e-6)


def test_generator_path_endpoints():
    p = generator_path(3, 2)
    assert np.allclose(p.z(0), [1, 2, 3]) and np.allclose(p.z(1), [1, 3, 2])
    # counterclockwise: z_i dips below the axis; the inverse runs the other way
    assert p.z(0.5)[1].imag < 0 < p.z(0.5)[2].imag
    q = generator_path(3, 1, inverse=True)
    assert q.z(0.5)[1].imag < 0 < q.z(0.5)[0].imag


_SYS = {}


def _sys3():
    if "s" not in _SYS:
        _SYS["s"] = KZSystem(SL2, V2, 3, order=2, tol=1e-8)
    return _SYS["s"]


@settings(max_examples=10)
@given(st.lists(st.tuples(st.integers(1, 2), st.sampled_from([1, -1])), min_size=1, max_size=4))
def test_transport_is_multiplicative_and_invertible(word):
    sysm = _sys3()
    inv = [(i, -e) for i, e in reversed(word)]
    prod = sysm.word(word) @ sysm.word(inv)
    assert np.allclose(prod.coeffs[0], np.eye(8), atol=1e-9)
    assert np.max(np.abs(prod.coeffs[1:])) <= 1e-7
