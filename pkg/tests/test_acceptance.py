"""One test per acceptance criterion; each records a PASS/FAIL line."""
import random
import time
import warnings

import numpy as np
import pytest

from qsuper.braiding import (braid_representation, braid_residuals, classical_limit_residual,
                             r_matrix, ybe_residual)
from qsuper.cartan import CATALOG, RootWeight, catalog_lookup, cobracket_generator
from qsuper.errors import TruncationWarning
from qsuper.free_algebra import AlgebraElement, coproduct, tensor_of, word_weight, words_of_weight
from qsuper.kz import KZSystem, dk_compare, rkz_consistency
from qsuper.pairing import kernel_basis, pair, pair_tensors
from qsuper.scalars import FieldScalar
from qsuper.twist import apply_gauge, axiom_residuals, load_structure, random_gauge, residual
from qsuper.verma import (build_verma, character, classical_character, cocommutator_linear,
                          irreducible_quotient, is_atypical_at_depth_one, relation_residuals)

from .conftest import ACCEPTANCE

TOL = 1e-8
BUDGET = 10 * TOL


def record(n: int, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def irreducible(datum, lam, cut=4):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return irreducible_quotient(build_verma(datum, lam, cut))


def E(datum, text):
    return AlgebraElement.parse(datum, text)


def proportional(x: AlgebraElement, y: AlgebraElement) -> bool:
    if set(x.terms) != set(y.terms) or not x.terms:
        return False
    w0 = next(iter(x.terms))
    r = x.terms[w0] / y.terms[w0]
    return all(x.terms[w] == r * y.terms[w] for w in x.terms)


def test_criterion_1_relation_discovery():
    t0 = time.perf_counter()
    sl3 = catalog_lookup("sl3")
    serre = {(2, 1): E(sl3, "1 : E1*E1*E2 ; -q - q^-1 : E1*E2*E1 ; 1 : E2*E1*E1"),
             (1, 2): E(sl3, "1 : E1*E2*E2 ; -q - q^-1 : E2*E1*E2 ; 1 : E2*E2*E1")}
    ok_sl3 = all(len(k := kernel_basis(sl3, RootWeight(mu))) == 1 and proportional(k[0], rel)
                 for mu, rel in serre.items())

    sl22 = catalog_lookup("sl(2|2)")
    assert sl22.A[1][1] == 0 and sl22.is_odd(1)
    five = E(sl22, "1 : E2*E1*E2*E3 ; 1 : E2*E3*E2*E1 ; 1 : E1*E2*E3*E2 ; 1 : E3*E2*E1*E2 ;"
                   " -q - q^-1 : E2*E1*E3*E2")
    mu = RootWeight((1, 2, 1))
    ker = kernel_basis(sl22, mu)
    # membership: five is orthogonal to every word and lies in the span of the computed kernel
    ok_orth = all(pair(sl22, AlgebraElement.word(sl22, w), five).is_zero() for w in words_of_weight(mu))
    ok_span = _in_span(five, ker)

    squares = []
    for name in sorted(CATALOG):
        d = catalog_lookup(name)
        for i in range(d.s):
            if d.is_odd(i) and d.A[i][i] == 0:
                sq = AlgebraElement.word(d, (i, i))
                k = kernel_basis(d, RootWeight.simple(d.s, i) + RootWeight.simple(d.s, i))
                squares.append(len(k) == 1 and proportional(k[0], sq))
    elapsed = time.perf_counter() - t0
    ok = ok_sl3 and ok_orth and ok_span and all(squares) and len(squares) >= 4 and elapsed <= 60
    record(1, ok, f"sl3 Serre rank 1 at (2,1),(1,2)={ok_sl3}; sl(2|2) five-term element in kernel "
                  f"(orthogonal={ok_orth}, in span of {len(ker)} kernel vectors={ok_span}); "
                  f"odd isotropic squares {sum(squares)}/{len(squares)}; {elapsed:.1f}s <= 60s")


def _in_span(x: AlgebraElement, basis: list) -> bool:
    from qsuper import linalg
    from qsuper.scalars import ONE, ZERO

    words = sorted(set(x.terms).union(*(b.terms for b in basis)))
    rows = [[b.terms.get(w, ZERO) for w in words] for b in basis]
    target = [x.terms.get(w, ZERO) for w in words]
    return linalg.rank(rows + [target]) == linalg.rank(rows) if rows else not x.terms


def _random_element(rng, datum, mu):
    words = words_of_weight(mu)
    chosen = rng.sample(words, min(len(words), rng.randint(1, 3)))
    return AlgebraElement(datum, {w: FieldScalar.laurent({rng.randint(-2, 2): rng.choice([-2, -1, 1, 3])})
                                  for w in chosen})


def _random_weight(rng, s, n):
    coords = [0] * s
    for _ in range(n):
        coords[rng.randrange(s)] += 1
    return RootWeight(tuple(coords))


def test_criterion_2_pairing_axioms():
    rng = random.Random(20240601)
    data = [catalog_lookup(n) for n in ("sl2", "sl3", "sl(2|1)")]
    failures = 0
    for trial in range(200):
        d = data[trial % 3]
        total = rng.randint(1, 4)
        a = rng.randint(0, total)
        x = _random_element(rng, d, _random_weight(rng, d.s, a))
        y = _random_element(rng, d, _random_weight(rng, d.s, total - a))
        z = _random_element(rng, d, (x * y).weight() if not (x * y).is_zero() else x.weight())
        if pair(d, x * y, z) != pair_tensors(d, tensor_of(d, x, y), coproduct(z)):
            failures += 1
        if pair(d, z, x * y) != pair_tensors(d, coproduct(z), tensor_of(d, x, y)):
            failures += 1
    record(2, failures == 0, f"200 random homogeneous triples on sl2, sl3, sl(2|1) through degree 4: "
                             f"{failures} failures of C(xy,z)=C(x(x)y,Dz) or C(z,xy)=C(Dz,x(x)y)")


def _catalog_weights(datum):
    s = datum.s
    return [[1] + [0] * (s - 1), [0] * (s - 1) + [1], [1] * s]


def test_criterion_3_presentation_relations():
    bad = {}
    count = 0
    for name in sorted(CATALOG):
        d = catalog_lookup(name)
        for lam in _catalog_weights(d):
            if name == "osp(1|2)":
                lam = [2 * lam[0]]
            for V in (build_verma(d, lam, 4), irreducible(d, lam)):
                res = relation_residuals(V, kernel_degree=4)
                count += 1
                if any(res.values()):
                    bad[(name, tuple(lam))] = res
    record(3, not bad, f"{count} Verma builds and quotients (cut 4): weight, [E,F] and kernel-relation "
                       f"identities exact; failures {bad or 'none'}")


def test_criterion_4_character_equality():
    sl21 = catalog_lookup("sl(2|1)")
    candidates = [[1, 0], [1, 1], [0, 1], [2, 0], [2, 1]]
    atypical = next(lam for lam in candidates if is_atypical_at_depth_one(sl21, lam))
    typical = next(lam for lam in candidates if not is_atypical_at_depth_one(sl21, lam)
                   and 0 not in lam)
    cases = [("sl2", [0]), ("sl2", [1]), ("sl2", [2]), ("sl3", [1, 0]), ("osp(1|2)", [2]),
             ("sl(2|1)", typical), ("sl(2|1)", atypical)]
    rows = []
    ok = True
    for name, lam in cases:
        d = catalog_lookup(name)
        q = character(irreducible(d, lam))
        c = classical_character(d, lam, 4)
        same = all(q.by_depth.get(n, 0) == c.by_depth.get(n, 0) for n in range(5)) and \
            q.by_weight == c.by_weight
        ok &= same
        rows.append(f"{name}{tuple(lam)}:{[q.by_depth[n] for n in range(5)]}{'=' if same else '!='}")
    record(4, ok, "quantum vs classical depth tables (cut 4): " + " ".join(rows))


def test_criterion_5_braiding():
    out = []
    ok = True
    for name, lam in [("sl2", [1]), ("sl(2|1)", [1, 0])]:
        d = catalog_lookup(name)
        V = irreducible(d, lam)
        R = r_matrix(d, V, V)
        ybe = ybe_residual(d, V, R)
        lim = classical_limit_residual(d, V, R)
        br = sum(sum(braid_residuals(braid_representation(d, V, n, R)).values()) for n in (2, 3))
        ok &= ybe == 0 and lim == 0 and br == 0
        out.append(f"{name}: ybe={ybe} braid={br} classical-limit={lim}")
    record(5, ok, "; ".join(out))


def test_criterion_6_cobracket():
    bad = []
    for name in sorted(CATALOG):
        d = catalog_lookup(name)
        for i in range(d.s):
            if cocommutator_linear(d, i) != cobracket_generator(d, ("e", i)):
                bad.append((name, i + 1))
    record(6, not bad, f"order-h cocommutator of Delta(E_i) = (d_i/2) E_i ^ h_i on {len(CATALOG)} "
                       f"catalog data; mismatches {bad or 'none'}")


def test_criterion_7_drinfeld_kohno():
    t0 = time.perf_counter()
    worst, flat = 0.0, 0.0
    for name, lam in [("sl2", [1]), ("sl(2|1)", [1, 0])]:
        d = catalog_lookup(name)
        V = irreducible(d, lam)
        for n, words in [(2, ["s1", "s1 s1"]), (3, ["s1 s2", "s1 s2 s1"])]:
            system = KZSystem(d, V, n, 4, TOL)
            rows = dk_compare(d, V, n, words, 4, TOL, system=system)
            worst = max(worst, max(r.deviation for r in rows))
            if n == 3:
                a = system.word("s1 s2 s1").coeffs
                b = system.word("s2 s1 s2").coeffs
                flat = max(flat, float(np.max(np.abs(a - b))))
    elapsed = time.perf_counter() - t0
    ok = worst <= BUDGET and flat <= BUDGET and elapsed <= 600
    record(7, ok, f"max trace deviation through h^4 {worst:.2e}, flatness {flat:.2e} "
                  f"(budget {BUDGET:.0e}); {elapsed:.1f}s <= 600s")


def test_criterion_8_rkz():
    out = []
    ok = True
    for name, lam in [("sl2", [1]), ("sl(2|1)", [1, 0])]:
        d = catalog_lookup(name)
        res = rkz_consistency(d, irreducible(d, lam), 4, TOL)
        ok &= res["half_turn"] <= BUDGET and res["full_loop"] <= BUDGET
        out.append(f"{name}: half-turn vs exp(h Omega/2) {res['half_turn']:.1e}, "
                   f"loop vs exp(h Omega) {res['full_loop']:.1e}")
    record(8, ok, "; ".join(out) + f" (budget {BUDGET:.0e})")


@pytest.mark.parametrize("name", ["exterior1", "exterior2", "sweedler"])
def test_criterion_9_twist_calculus(name):
    S = load_structure(name)
    assert S.order == 3
    ident = apply_gauge(S, S.one(2))
    same = residual(ident.R, S.R) == 0 and residual(ident.Phi, S.Phi) == 0 and \
        all(residual(ident.coproduct[i], S.coproduct[i]) == 0 for i in S.coproduct)
    rng = random.Random(9)
    nonzero = 0
    for _ in range(20):
        T = apply_gauge(S, random_gauge(S, rng))
        nonzero += sum(1 for v in axiom_residuals(T).values() if v != 0)
    record(9, same and nonzero == 0, f"{name}: 20 random gauges at order 3, nonzero axiom residuals "
                                     f"{nonzero}; identity gauge is identity {same}")
