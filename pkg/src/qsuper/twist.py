"""Gauge transformations of quasitriangular quasi-bi-superalgebras given by tables.

Conventions: (id (x) Delta) Delta(a) = Phi (Delta (x) id) Delta(a) Phi^-1 and

    Delta_J = J^-1 Delta J,   R_J = (J_21)^-1 R J,
    Phi_J = J_23^-1 (id (x) Delta)(J^-1) Phi (Delta (x) id)(J) J_12.

Elements of A^(x)k are dicts {basis-index tuple: HSeries}; multiplication in
the tensor power is (a_1 (x) ... )(b_1 (x) ...) = prod_{i>j} (-1)^{|a_i||b_j|} a_1 b_1 (x) ...
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from . import linalg
from .errors import CounitViolation, NotInvertible, ParseError
from .scalars import HSeries, parse_hseries, parse_rational

DATA_DIR = Path(__file__).parent / "data"

Tensor = dict  # {tuple[int, ...]: HSeries}


@dataclass
class QuasiStructure:
    dim: int
    parity: list
    order: int
    product: dict  # (i, j) -> {k: HSeries}
    unit: int  # basis index of the unit
    counit: list  # HSeries per basis element
    coproduct: dict  # i -> Tensor of rank 2
    Phi: Tensor
    R: Tensor
    name: str = ""

    def zero(self) -> HSeries:
        return HSeries.zero(self.order)

    def one(self, k: int) -> Tensor:
        return {(self.unit,) * k: HSeries.constant(Fraction(1), self.order)}


# ---------------------------------------------------------------------------
# tensor arithmetic


def _add_into(out: Tensor, key, v: HSeries):
    cur = out.get(key)
    new = v if cur is None else cur + v
    if new.is_zero():
        out.pop(key, None)
    else:
        out[key] = new


def t_add(S: QuasiStructure, a: Tensor, b: Tensor, sign: int = 1) -> Tensor:
    out = dict(a)
    for k, v in b.items():
        _add_into(out, k, v if sign == 1 else -v)
    return out


def t_scale(a: Tensor, c) -> Tensor:
    return {k: v * c for k, v in a.items() if not (v * c).is_zero()}


def t_mul(S: QuasiStructure, a: Tensor, b: Tensor) -> Tensor:
    out: Tensor = {}
    p = S.parity
    for ka, va in a.items():
        for kb, vb in b.items():
            sign = 1
            for i in range(len(ka)):
                if p[ka[i]]:
                    for j in range(i):
                        if p[kb[j]]:
                            sign = -sign
            legs = [S.product.get((x, y), {}) for x, y in zip(ka, kb)]
            if any(not leg for leg in legs):
                continue
            coef = va * vb
            if sign < 0:
                coef = -coef
            for combo in itertools.product(*(leg.items() for leg in legs)):
                c = coef
                for _, v in combo:
                    c = c * v
                _add_into(out, tuple(k for k, _ in combo), c)
    return out


def t_prod(S: QuasiStructure, *xs: Tensor) -> Tensor:
    out = xs[0]
    for x in xs[1:]:
        out = t_mul(S, out, x)
    return out


def t_equal(a: Tensor, b: Tensor) -> bool:
    return residual(a, b) == 0


def residual(a: Tensor, b: Tensor):
    """max |coefficient| of a - b."""
    worst = 0
    for k in set(a) | set(b):
        va = a.get(k)
        vb = b.get(k)
        if va is None:
            d = vb.coeffs
        elif vb is None:
            d = va.coeffs
        else:
            d = (va - vb).coeffs
        for c in d:
            worst = max(worst, abs(c))
    return worst


def permute(S: QuasiStructure, a: Tensor, dest: tuple) -> Tensor:
    """Move leg i to slot dest[i] with the Koszul sign."""
    out: Tensor = {}
    p = S.parity
    n = len(dest)
    for k, v in a.items():
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if dest[i] > dest[j] and p[k[i]] and p[k[j]]:
                    sign = -sign
        new = [None] * n
        for i in range(n):
            new[dest[i]] = k[i]
        _add_into(out, tuple(new), v if sign == 1 else -v)
    return out


def coproduct_leg(S: QuasiStructure, a: Tensor, leg: int, coproduct: dict | None = None) -> Tensor:
    cop = S.coproduct if coproduct is None else coproduct
    out: Tensor = {}
    for k, v in a.items():
        for (x, y), c in cop.get(k[leg], {}).items():
            _add_into(out, k[:leg] + (x, y) + k[leg + 1:], v * c)
    return out


def counit_leg(S: QuasiStructure, a: Tensor, leg: int) -> Tensor:
    out: Tensor = {}
    for k, v in a.items():
        e = S.counit[k[leg]]
        if not e.is_zero():
            _add_into(out, k[:leg] + k[leg + 1:], v * e)
    return out


def insert_unit(S: QuasiStructure, a: Tensor, leg: int) -> Tensor:
    return {k[:leg] + (S.unit,) + k[leg:]: v for k, v in a.items()}


def is_even(S: QuasiStructure, a: Tensor) -> bool:
    return all(sum(S.parity[i] for i in k) % 2 == 0 for k in a)


# ---------------------------------------------------------------------------
# inverses


def _order0_inverse(S: QuasiStructure, a: Tensor, rank: int) -> Tensor:
    """Inverse of the h^0 part via the left regular representation."""
    dim = S.dim
    keys = list(itertools.product(range(dim), repeat=rank))
    index = {k: n for n, k in enumerate(keys)}
    a0 = {k: HSeries.constant(v[0], S.order) for k, v in a.items() if v[0] != 0}
    cols = []
    for k in keys:
        prod = t_mul(S, a0, {k: HSeries.constant(Fraction(1), S.order)})
        col = [Fraction(0)] * len(keys)
        for kk, v in prod.items():
            col[index[kk]] = v[0]
        cols.append(col)
    M = linalg.transpose(cols)
    try:
        inv = linalg.inverse(M, Fraction(0), Fraction(1))
    except ArithmeticError as exc:
        raise NotInvertible("element is not invertible at order 0") from exc
    one = index[(S.unit,) * rank]
    return {k: HSeries.constant(inv[index[k]][one], S.order) for k in keys if inv[index[k]][one] != 0}


def t_inverse(S: QuasiStructure, a: Tensor) -> Tensor:
    rank = len(next(iter(a))) if a else 0
    if not a:
        raise NotInvertible("zero element")
    one = S.one(rank)
    b0 = _order0_inverse(S, a, rank)
    x = t_mul(S, b0, a)  # 1 + O(h)
    y = t_add(S, one, x, sign=-1)  # 1 - x = O(h)
    inv = dict(one)
    power = dict(one)
    for _ in range(S.order):
        power = t_mul(S, power, y)
        if not power:
            break
        inv = t_add(S, inv, power)
    return t_mul(S, inv, b0)


# ---------------------------------------------------------------------------
# axioms


def _basis(S: QuasiStructure, i: int) -> Tensor:
    return {(i,): HSeries.constant(Fraction(1), S.order)}


def axiom_residuals(S: QuasiStructure) -> dict:
    """Max |coefficient| of each axiom defect at the stored truncation."""
    res: dict = {}
    basis = [_basis(S, i) for i in range(S.dim)]
    # associativity of the product
    worst = 0
    for a, b, c in itertools.product(range(S.dim), repeat=3):
        x, y, z = basis[a], basis[b], basis[c]
        worst = max(worst, residual(t_mul(S, t_mul(S, x, y), z), t_mul(S, x, t_mul(S, y, z))))
    res["associativity"] = worst
    # counit
    worst = 0
    for i in range(S.dim):
        d = S.coproduct.get(i, {})
        worst = max(worst, residual(counit_leg(S, d, 0), basis[i]), residual(counit_leg(S, d, 1), basis[i]))
    worst = max(worst, residual(counit_leg(S, S.Phi, 1), S.one(2)))
    res["counit"] = worst
    # Delta is an algebra map
    worst = 0
    for a, b in itertools.product(range(S.dim), repeat=2):
        lhs = {}
        for k, v in S.product.get((a, b), {}).items():
            lhs = t_add(S, lhs, t_scale(S.coproduct.get(k, {}), v))
        worst = max(worst, residual(lhs, t_mul(S, S.coproduct.get(a, {}), S.coproduct.get(b, {}))))
    res["multiplicativity"] = worst
    # quasi-coassociativity
    worst = 0
    for i in range(S.dim):
        d = S.coproduct.get(i, {})
        left = coproduct_leg(S, d, 1)
        right = coproduct_leg(S, d, 0)
        worst = max(worst, residual(t_mul(S, left, S.Phi), t_mul(S, S.Phi, right)))
    res["quasi_coassociativity"] = worst
    # pentagon
    P = S.Phi
    lhs = t_mul(S, coproduct_leg(S, P, 2), coproduct_leg(S, P, 0))
    rhs = t_prod(S, insert_unit(S, P, 0), coproduct_leg(S, P, 1), insert_unit(S, P, 3))
    res["pentagon"] = residual(lhs, rhs)
    # hexagons
    h1, h2 = hexagon_terms(S)
    res["hexagon_left"] = residual(coproduct_leg(S, S.R, 0), h1)
    res["hexagon_right"] = residual(coproduct_leg(S, S.R, 1), h2)
    # quasi-cocommutativity
    worst = 0
    for i in range(S.dim):
        d = S.coproduct.get(i, {})
        worst = max(worst, residual(t_mul(S, S.R, d), t_mul(S, permute(S, d, (1, 0)), S.R)))
    res["quasi_cocommutativity"] = worst
    return res


def leg_place(S: QuasiStructure, a: Tensor, slots: tuple, total: int) -> Tensor:
    """Put the legs of a into the given slots of a rank-``total`` tensor, units elsewhere.

    ``leg_place(R, (0, 2), 3)`` is R_13 and ``leg_place(Phi, (2, 0, 1), 3)`` is Phi_312
    (first leg of Phi in slot 3, second in slot 1, third in slot 2).
    """
    rank = len(slots)
    padded: Tensor = {}
    for k, v in a.items():
        padded[k + (S.unit,) * (total - rank)] = v
    rest = [s for s in range(total) if s not in slots]
    return permute(S, padded, tuple(slots) + tuple(rest))


def hexagon_terms(S: QuasiStructure) -> tuple:
    """Right-hand sides of the two hexagons with associator insertions.

    (Delta (x) id) R = Phi_312 R_13 Phi_132^-1 R_23 Phi
    (id (x) Delta) R = Phi_231^-1 R_13 Phi_213 R_12 Phi^-1
    """
    P, R = S.Phi, S.R
    Pinv = t_inverse(S, P)
    R13 = leg_place(S, R, (0, 2), 3)
    R23 = leg_place(S, R, (1, 2), 3)
    R12 = leg_place(S, R, (0, 1), 3)
    phi312 = leg_place(S, P, (2, 0, 1), 3)
    phi132_inv = leg_place(S, Pinv, (0, 2, 1), 3)
    phi231_inv = leg_place(S, Pinv, (1, 2, 0), 3)
    phi213 = leg_place(S, P, (1, 0, 2), 3)
    h1 = t_prod(S, phi312, R13, phi132_inv, R23, P)
    h2 = t_prod(S, phi231_inv, R13, phi213, R12, Pinv)
    return h1, h2


def plain_hexagons(S: QuasiStructure) -> dict:
    """Residuals of the associator-free hexagons (informational only)."""
    R13 = leg_place(S, S.R, (0, 2), 3)
    R23 = leg_place(S, S.R, (1, 2), 3)
    R12 = leg_place(S, S.R, (0, 1), 3)
    return {"plain_hexagon_left": residual(coproduct_leg(S, S.R, 0), t_mul(S, R13, R23)),
            "plain_hexagon_right": residual(coproduct_leg(S, S.R, 1), t_mul(S, R13, R12))}


# ---------------------------------------------------------------------------
# gauges


def check_counit(S: QuasiStructure, J: Tensor):
    one = S.one(1)
    if residual(counit_leg(S, J, 0), one) != 0 or residual(counit_leg(S, J, 1), one) != 0:
        raise CounitViolation("gauge must satisfy (eps (x) id)(J) = (id (x) eps)(J) = 1")


def apply_gauge(S: QuasiStructure, J: Tensor) -> QuasiStructure:
    if any(v.order != S.order for v in J.values()):
        raise ValueError("gauge truncation order differs from the structure")
    check_counit(S, J)
    Jinv = t_inverse(S, J)
    cop = {i: t_prod(S, Jinv, d, J) for i, d in S.coproduct.items()}
    J21 = permute(S, J, (1, 0))
    R = t_prod(S, t_inverse(S, J21), S.R, J)
    J12 = insert_unit(S, J, 2)
    J23 = insert_unit(S, J, 0)
    Phi = t_prod(S, t_inverse(S, J23), coproduct_leg(S, Jinv, 1), S.Phi, coproduct_leg(S, J, 0), J12)
    return replace(S, coproduct=cop, R=R, Phi=Phi)


def compose_gauges(S: QuasiStructure, J: Tensor, Jp: Tensor) -> Tensor:
    """Single gauge equal to applying J and then Jp."""
    return t_mul(S, J, Jp)


def project_counital(S: QuasiStructure, X: Tensor) -> Tensor:
    """X - 1 (x) (eps (x) id)X - (id (x) eps)X (x) 1 + (eps (x) eps)(X) 1 (x) 1."""
    a = insert_unit(S, counit_leg(S, X, 0), 0)
    b = insert_unit(S, counit_leg(S, X, 1), 1)
    c = counit_leg(S, counit_leg(S, X, 0), 0)
    out = t_add(S, X, a, sign=-1)
    out = t_add(S, out, b, sign=-1)
    for k, v in c.items():
        out = t_add(S, out, {(S.unit, S.unit): v})
    return out


def random_gauge(S: QuasiStructure, rng: random.Random, span: int = 3) -> Tensor:
    """J = 1 (x) 1 + sum_k h^k X_k with random even integer X_k, made counital."""
    even_keys = [k for k in itertools.product(range(S.dim), repeat=2)
                 if (S.parity[k[0]] + S.parity[k[1]]) % 2 == 0]
    X: Tensor = {}
    for key in even_keys:
        coeffs = [Fraction(0)] + [Fraction(rng.randint(-span, span)) for _ in range(S.order)]
        ser = HSeries(coeffs)
        if not ser.is_zero():
            X[key] = ser
    X = project_counital(S, X)
    return t_add(S, S.one(2), X)


# ---------------------------------------------------------------------------
# documents


def _series(text, order: int) -> HSeries:
    if isinstance(text, bool) or isinstance(text, float):
        raise ParseError(f"inexact literal {text!r}")
    if isinstance(text, int):
        return HSeries.constant(Fraction(text), order)
    text = str(text)
    if "h" in text:
        ser = parse_hseries(text)
        if ser.order > order:
            raise ParseError(f"series {text!r} exceeds truncation order {order}")
        return HSeries(list(ser.coeffs) + [Fraction(0)] * (order - ser.order))
    return HSeries.constant(parse_rational(text), order)


def _tensor(entries: list, rank: int, order: int) -> Tensor:
    out: Tensor = {}
    for e in entries:
        if len(e) != rank + 1:
            raise ParseError(f"tensor entry {e!r} should have {rank} indices and a value")
        _add_into(out, tuple(int(i) for i in e[:rank]), _series(e[rank], order))
    return out


def load_structure(document) -> QuasiStructure:
    if isinstance(document, (str, Path)) and not str(document).lstrip().startswith("{"):
        path = Path(document)
        if not path.exists():
            path = DATA_DIR / f"{document}.json"
        document = path.read_text()
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed structure document: {exc}") from exc
    order = int(document["order"])
    dim = int(document["dim"])
    parity = [int(p) for p in document["parity"]]
    if len(parity) != dim:
        raise ParseError("parity vector length differs from dim")
    product: dict = {}
    for i, j, k, v in document["product"]:
        product.setdefault((int(i), int(j)), {})[int(k)] = _series(v, order)
    counit = [_series(v, order) for v in document["counit"]]
    coproduct: dict = {}
    for i, a, b, v in document["coproduct"]:
        _add_into(coproduct.setdefault(int(i), {}), (int(a), int(b)), _series(v, order))
    S = QuasiStructure(dim=dim, parity=parity, order=order, product=product,
                       unit=int(document.get("unit", 0)), counit=counit, coproduct=coproduct,
                       Phi=_tensor(document["Phi"], 3, order), R=_tensor(document["R"], 2, order),
                       name=str(document.get("name", "")))
    return S


def dump_structure(S: QuasiStructure) -> dict:
    def tens(t: Tensor):
        return [list(k) + [str(v)] for k, v in sorted(t.items())]

    return {
        "name": S.name, "dim": S.dim, "parity": S.parity, "order": S.order, "unit": S.unit,
        "product": [[i, j, k, str(v)] for (i, j), d in sorted(S.product.items()) for k, v in sorted(d.items())],
        "counit": [str(v) for v in S.counit],
        "coproduct": [[i, a, b, str(v)] for i, d in sorted(S.coproduct.items()) for (a, b), v in sorted(d.items())],
        "Phi": tens(S.Phi), "R": tens(S.R),
    }


def shipped_structures() -> list:
    return sorted(p.stem for p in DATA_DIR.glob("*.json"))
