"""Regenerate the structure-constant tables shipped in src/qsuper/data.

exterior1: Lambda[x], x odd and primitive, Phi = 1, R = 1.
exterior2: Lambda[x, y], x, y odd and primitive, Phi = 1, R = exp(h t / 2)
           with the even super-symmetric invariant t = x (x) y - y (x) x.
sweedler:  Lambda[x] smashed with Z/2 = <g>, g x = -x g, g grouplike, x odd primitive,
           Phi = 1, R = 1 (noncommutative, super-cocommutative).
"""
import json
from fractions import Fraction

from qsuper.scalars import HSeries
from qsuper.twist import DATA_DIR, QuasiStructure, dump_structure, t_add, t_mul, t_scale

ORDER = 3


def const(c):
    return HSeries.constant(Fraction(c), ORDER)


def exterior1() -> QuasiStructure:
    product = {(0, 0): {0: const(1)}, (0, 1): {1: const(1)}, (1, 0): {1: const(1)}}
    coproduct = {0: {(0, 0): const(1)}, 1: {(1, 0): const(1), (0, 1): const(1)}}
    return QuasiStructure(dim=2, parity=[0, 1], order=ORDER, product=product, unit=0,
                          counit=[const(1), const(0)], coproduct=coproduct,
                          Phi={(0, 0, 0): const(1)}, R={(0, 0): const(1)}, name="exterior1")


def exterior2() -> QuasiStructure:
    # basis 1, x, y, xy
    product = {(0, b): {b: const(1)} for b in range(4)}
    product.update({(a, 0): {a: const(1)} for a in range(1, 4)})
    product[(1, 2)] = {3: const(1)}
    product[(2, 1)] = {3: const(-1)}
    coproduct = {
        0: {(0, 0): const(1)},
        1: {(1, 0): const(1), (0, 1): const(1)},
        2: {(2, 0): const(1), (0, 2): const(1)},
        3: {(3, 0): const(1), (1, 2): const(1), (2, 1): const(-1), (0, 3): const(1)},
    }
    S = QuasiStructure(dim=4, parity=[0, 1, 1, 0], order=ORDER, product=product, unit=0,
                       counit=[const(1), const(0), const(0), const(0)], coproduct=coproduct,
                       Phi={(0, 0, 0): const(1)}, R={}, name="exterior2")
    t = {(1, 2): const(1), (2, 1): const(-1)}
    # exp(h t / 2) = sum_k (h/2)^k t^k / k!
    R = {(0, 0): const(1)}
    power = {(0, 0): const(1)}
    fact = 1
    for k in range(1, ORDER + 1):
        power = t_mul(S, power, t)
        fact *= k
        hk = HSeries([Fraction(0)] * k + [Fraction(1, 2 ** k * fact)] + [Fraction(0)] * (ORDER - k))
        R = t_add(S, R, {key: v * hk for key, v in power.items()})
    S.R = R
    return S


def sweedler() -> QuasiStructure:
    # basis 1, g, x, gx
    product = {(0, b): {b: const(1)} for b in range(4)}
    product.update({(a, 0): {a: const(1)} for a in range(1, 4)})
    product[(1, 1)] = {0: const(1)}
    product[(1, 2)] = {3: const(1)}
    product[(2, 1)] = {3: const(-1)}
    product[(1, 3)] = {2: const(1)}
    product[(3, 1)] = {2: const(-1)}
    coproduct = {
        0: {(0, 0): const(1)},
        1: {(1, 1): const(1)},
        2: {(2, 0): const(1), (0, 2): const(1)},
        3: {(3, 1): const(1), (1, 3): const(1)},
    }
    return QuasiStructure(dim=4, parity=[0, 0, 1, 1], order=ORDER, product=product, unit=0,
                          counit=[const(1), const(1), const(0), const(0)], coproduct=coproduct,
                          Phi={(0, 0, 0): const(1)}, R={(0, 0): const(1)}, name="sweedler")


if __name__ == "__main__":
    DATA_DIR.mkdir(exist_ok=True)
    for S in (exterior1(), exterior2(), sweedler()):
        path = DATA_DIR / f"{S.name}.json"
        path.write_text(json.dumps(dump_structure(S), indent=1) + "\n")
        print("wrote", path)
