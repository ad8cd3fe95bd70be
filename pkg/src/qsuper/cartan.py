"""Super Cartan data (A, tau), symmetrizers, weight pairings and cobrackets.

Indices are 0-based in code.  The document format and all printed output use
1-based generator indices (``tau`` lists, ``E1*E2`` words).
"""
from __future__ import annotations

import hashlib
import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DegeneratePairing, IndexOutOfRange, NotSymmetrizable, ParseError, UnknownName
from .scalars import parse_rational


@dataclass(frozen=True)
class CartanDatum:
    A: tuple[tuple[Fraction, ...], ...]
    tau: frozenset[int]  # 1-based odd indices
    d: tuple[Fraction, ...]
    name: str = ""

    def __post_init__(self):
        s = len(self.A)
        if s == 0 or any(len(r) != s for r in self.A):
            raise ParseError("Cartan matrix must be square and nonempty")
        if not all(1 <= t <= s for t in self.tau):
            raise ParseError(f"tau {sorted(self.tau)} not inside 1..{s}")
        if len(self.d) != s or any(x == 0 for x in self.d):
            raise NotSymmetrizable("symmetrizers must be nonzero, one per row")
        if self.d[0] != 1:
            raise NotSymmetrizable("symmetrizers are normalized with d_1 = 1")
        for i in range(s):
            for j in range(s):
                if self.d[i] * self.A[i][j] != self.d[j] * self.A[j][i]:
                    raise NotSymmetrizable(f"d_i a_ij != d_j a_ji at ({i + 1},{j + 1})")

    @property
    def s(self) -> int:
        return len(self.A)

    @property
    def L(self) -> int:
        dens = [x.denominator for x in self.d]
        dens += [(self.d[i] * self.A[i][j]).denominator for i in range(self.s) for j in range(self.s)]
        return math.lcm(*dens)

    def is_odd(self, i: int) -> bool:
        """Parity of generator i (0-based)."""
        return (i + 1) in self.tau

    @property
    def parities(self) -> tuple[int, ...]:
        return tuple(int(self.is_odd(i)) for i in range(self.s))

    def sym(self, i: int, j: int) -> Fraction:
        """(alpha_i, alpha_j) = d_i a_ij."""
        return self.d[i] * self.A[i][j]

    @property
    def DA(self) -> list[list[Fraction]]:
        return [[self.sym(i, j) for j in range(self.s)] for i in range(self.s)]

    def canonical(self) -> dict:
        return {
            "name": self.name,
            "A": [[_fmt(x) for x in row] for row in self.A],
            "tau": sorted(self.tau),
            "d": [_fmt(x) for x in self.d],
        }

    def digest(self) -> str:
        doc = dict(self.canonical())
        doc.pop("name")
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:16]

    def __str__(self):
        return self.name or json.dumps(self.canonical())


def _fmt(x: Fraction) -> Union[int, str]:
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RootWeight:
    """Element sum_i coords[i] * alpha_i of the positive root cone."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.coords):
            raise ValueError("root weights have nonnegative coordinates")

    @property
    def total(self) -> int:
        return sum(self.coords)

    @classmethod
    def simple(cls, s: int, i: int) -> "RootWeight":
        return cls(tuple(int(k == i) for k in range(s)))

    @classmethod
    def zero(cls, s: int) -> "RootWeight":
        return cls((0,) * s)

    def __add__(self, other: "RootWeight") -> "RootWeight":
        return RootWeight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootWeight") -> "RootWeight":
        return RootWeight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class WeightFunctional:
    """A weight given by its values on h_1..h_s.

    ``extension`` optionally fixes the coordinates of the weight on the simple
    roots, which is required to pair two functionals when DA is singular.
    """

    values: tuple[Fraction, ...]
    extension: tuple[Fraction, ...] | None = None

    @classmethod
    def of(cls, values: Sequence, extension: Sequence | None = None) -> "WeightFunctional":
        return cls(tuple(Fraction(v) for v in values),
                   None if extension is None else tuple(Fraction(v) for v in extension))

    def shifted(self, datum: CartanDatum, mu: RootWeight) -> "WeightFunctional":
        """The weight self - mu (mu a combination of simple roots)."""
        vals = tuple(self.values[i] - sum(mu.coords[j] * datum.A[i][j] for j in range(datum.s))
                     for i in range(datum.s))
        ext = None
        if self.extension is not None:
            ext = tuple(a - b for a, b in zip(self.extension, mu.coords))
        return WeightFunctional(vals, ext)

    def __str__(self):
        return "(" + ",".join(_fmt_q(v) for v in self.values) + ")"


def _fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Weight = Union[RootWeight, WeightFunctional]


def symmetrize(A: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Symmetrizers with d_1 = 1 found by BFS from index 1; free components get 1."""
    A = [[Fraction(x) for x in row] for row in A]
    s = len(A)
    if any(len(r) != s for r in A):
        raise ParseError("Cartan matrix must be square")
    d: list[Fraction | None] = [None] * s
    for root in range(s):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(s):
                if i == j:
                    continue
                aij, aji = A[i][j], A[j][i]
                if (aij == 0) != (aji == 0):
                    raise NotSymmetrizable(f"zero pattern differs at ({i + 1},{j + 1})")
                if aij == 0:
                    continue
                want = d[i] * aij / aji
                if d[j] is None:
                    d[j] = want
                    queue.append(j)
                elif d[j] != want:
                    raise NotSymmetrizable(f"inconsistent cycle through ({i + 1},{j + 1})")
    return tuple(d)


def load_cartan(document) -> CartanDatum:
    """Build a datum from a JSON string or an already-parsed mapping."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed Cartan document: {exc}") from exc
    if not isinstance(document, dict) or "A" not in document:
        raise ParseError("Cartan document must be an object with key 'A'")
    A = tuple(tuple(_entry(x) for x in row) for row in document["A"])
    tau = document.get("tau", [])
    if not all(isinstance(t, int) and not isinstance(t, bool) for t in tau):
        raise ParseError("tau must be a list of 1-based integer indices")
    if "d" in document and document["d"] is not None:
        d = tuple(_entry(x) for x in document["d"])
    else:
        d = symmetrize(A)
    return CartanDatum(A=A, tau=frozenset(tau), d=d, name=str(document.get("name", "")))


def _entry(x) -> Fraction:
    if isinstance(x, bool):
        raise ParseError("booleans are not matrix entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise ParseError(f"entry {x!r} is not an integer or 'p/q' string")


def _functional_coords(datum: CartanDatum, lam: WeightFunctional) -> list[Fraction]:
    if lam.extension is not None:
        return list(lam.extension)
    from .linalg import inverse  # local: linalg is tiny and has no deps on us

    try:
        inv = inverse(datum.DA, Fraction(0), Fraction(1))
    except ArithmeticError as exc:
        raise DegeneratePairing(
            f"DA is singular for {datum}; supply a WeightFunctional extension") from exc
    rhs = [datum.d[i] * lam.values[i] for i in range(datum.s)]
    return [sum(inv[i][j] * rhs[j] for j in range(datum.s)) for i in range(datum.s)]


def root_pairing(datum: CartanDatum, lam: Weight, mu: Weight) -> Fraction:
    """Symmetric form with (alpha_i, alpha_j) = d_i a_ij and (L, alpha_i) = d_i L(h_i)."""
    s = datum.s
    if isinstance(lam, RootWeight) and isinstance(mu, RootWeight):
        return sum((lam.coords[i] * mu.coords[j] * datum.sym(i, j)
                    for i in range(s) for j in range(s)), Fraction(0))
    if isinstance(lam, WeightFunctional) and isinstance(mu, RootWeight):
        lam, mu = mu, lam
    if isinstance(lam, RootWeight):
        return sum((lam.coords[i] * datum.d[i] * mu.values[i] for i in range(s)), Fraction(0))
    x = _functional_coords(datum, lam)
    return sum((x[i] * datum.d[i] * mu.values[i] for i in range(s)), Fraction(0))


# ---------------------------------------------------------------------------
# classical cobracket on generators

Symbol = tuple  # ("e" | "f" | "h", 0-based index)
Tensor2 = dict  # {(Symbol, Symbol): Fraction}


def symbol_parity(datum: CartanDatum, sym: Symbol) -> int:
    kind, i = sym
    return int(kind in ("e", "f") and datum.is_odd(i))


def wedge(datum: CartanDatum, x: Symbol, y: Symbol, c: Fraction) -> Tensor2:
    """c * x ^ y = c (x (x) y - (-1)^{|x||y|} y (x) x)."""
    sign = -1 if symbol_parity(datum, x) and symbol_parity(datum, y) else 1
    out: Tensor2 = {}
    _acc(out, (x, y), c)
    _acc(out, (y, x), -sign * c)
    return out


def _acc(t: dict, key, c):
    v = t.get(key, 0) + c
    if v == 0:
        t.pop(key, None)
    else:
        t[key] = v


def cobracket_generator(datum: CartanDatum, generator: Symbol) -> Tensor2:
    kind, i = generator
    if not 0 <= i < datum.s:
        raise IndexOutOfRange(f"generator index {i + 1} outside 1..{datum.s}")
    if kind == "e":
        return wedge(datum, ("e", i), ("h", i), datum.d[i] / 2)
    if kind == "f":
        return wedge(datum, ("f", i), ("h", i), -datum.d[i] / 2)
    if kind == "h":
        return {}
    raise ValueError(f"unknown generator kind {kind!r}")


def co_jacobi(datum: CartanDatum, generator: Symbol) -> dict:
    """Super cyclic sum (1 + xi + xi^2)(delta (x) id) delta(x); zero for a Lie cobracket."""
    first = cobracket_generator(datum, generator)
    triple: dict = {}
    for (a, b), c in first.items():
        for (a1, a2), c2 in cobracket_generator(datum, a).items():
            _acc(triple, (a1, a2, b), c * c2)
    out: dict = {}
    for key, c in triple.items():
        for shift in range(3):
            k = key
            sign = 1
            for _ in range(shift):
                # xi(x (x) y (x) z) = (-1)^{|x|(|y|+|z|)} y (x) z (x) x
                px = symbol_parity(datum, k[0])
                py = symbol_parity(datum, k[1]) + symbol_parity(datum, k[2])
                if px * py % 2:
                    sign = -sign
                k = (k[1], k[2], k[0])
            _acc(out, k, sign * c)
    return out


def format_symbol(sym: Symbol) -> str:
    return f"{sym[0]}{sym[1] + 1}"


# ---------------------------------------------------------------------------
# catalog

CATALOG: dict[str, dict] = {
    "sl2": {"name": "sl2", "A": [[2]], "tau": []},
    "sl3": {"name": "sl3", "A": [[2, -1], [-1, 2]], "tau": []},
    "sp4": {"name": "sp4", "A": [[2, -2], [-1, 2]], "tau": []},
    "sl(2|1)": {"name": "sl(2|1)", "A": [[2, -1], [-1, 0]], "tau": [2]},
    "osp(1|2)": {"name": "osp(1|2)", "A": [[2]], "tau": [1]},
    # type A(1,1) with odd isotropic middle node; DA is singular (sl(2|2))
    "sl(2|2)": {"name": "sl(2|2)", "A": [[2, -1, 0], [-1, 0, 1], [0, -1, 2]], "tau": [2]},
    # sl(3|1) with the Borel eps1-eps2, eps2-delta1, delta1-eps3
    "sl(3|1)": {"name": "sl(3|1)", "A": [[2, -1, 0], [-1, 0, 1], [0, 1, 0]], "tau": [2, 3]},
}

_ALIASES = {"sl(2)": "sl2", "sl(3)": "sl3", "sl21": "sl(2|1)", "osp12": "osp(1|2)",
            "sl22": "sl(2|2)", "sl31": "sl(3|1)", "sp(4)": "sp4"}


def catalog_lookup(name: str) -> CartanDatum:
    key = _ALIASES.get(name, name)
    if key not in CATALOG:
        raise UnknownName(f"no catalog datum named {name!r}; known: {sorted(CATALOG)}")
    return load_cartan(CATALOG[key])
