"""The Drinfeld/Yamane form on the free positive superalgebra.

The form is fixed by C(E_i, E_j) = delta_ij c_i together with the Hopf-pairing
axioms C(xy, z) = C(x (x) y, Delta z), C(x, yz) = C(Delta x, y (x) z),
C(x (x) y, z (x) w) = (-1)^{|y||z|} C(x, z) C(y, w) and C(K^a, K^b) = q^-(a,b).
Peeling the first letter of either argument gives the two recursions

    C(E_i x', z) = c_i sum_{z_t = i} (-1)^{|i| odd(z_{>t})} q^-(alpha_i, wt z_{<t}) C(x', z minus t)
    C(x, E_j z') = c_j sum_{x_t = j} (-1)^{|j| odd(x_{>t})} q^-(alpha_j, wt x_{<t}) C(x minus t, z')

Every value on words of weight mu is prod_i c_i^{mu_i} times a Laurent
polynomial with integer coefficients, so we recurse on those ("reduced" values)
with exponents stored as integers in units of 1/L.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from . import linalg
from .cartan import CartanDatum, RootWeight
from .errors import DegreeCutExceeded, NotInvertible
from .free_algebra import (AlgebraElement, DecoratedTensor, Leg, Word, pair_exponent,
                           word_parity, word_weight, words_of_weight)
from .scalars import ONE, ZERO, FieldScalar, format_scalar, parse_scalar

Laurent = dict  # {int exponent in units 1/L: int}


def generator_value(datum: CartanDatum, i: int) -> FieldScalar:
    """c_i = (q_i - q_i^-1) / (q^d_alpha - q^-d_alpha)."""
    qi = FieldScalar.q(datum.d[i])
    a_ii = datum.A[i][i]
    d_alpha = Fraction(1) if a_ii == 0 else datum.d[i] * a_ii / 2
    qa = FieldScalar.q(d_alpha)
    return (qi - qi.inverse()) / (qa - qa.inverse())


def _laurent_to_scalar(p: Laurent, L: int) -> FieldScalar:
    return FieldScalar.laurent(p, L)


class PairingEngine:
    """Memoized evaluation of the form for one datum."""

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.L = datum.L
        s = datum.s
        # (alpha_i, alpha_j) * L as integers
        self._sym = [[int(datum.sym(i, j) * self.L) for j in range(s)] for i in range(s)]
        self._odd = [datum.is_odd(i) for i in range(s)]
        self._c = [generator_value(datum, i) for i in range(s)]
        self._memo_left: dict = {}
        self._memo_right: dict = {}

    # reduced recursion ------------------------------------------------
    def reduced(self, x: Word, z: Word, split: str = "left") -> Laurent:
        if len(x) != len(z):
            return {}
        if split == "left":
            return self._left(tuple(x), tuple(z))
        return self._right(tuple(x), tuple(z))

    def _left(self, x: Word, z: Word) -> Laurent:
        if not x:
            return {0: 1}
        key = (x, z)
        hit = self._memo_left.get(key)
        if hit is not None:
            return hit
        i, rest = x[0], x[1:]
        out: Laurent = {}
        pre = 0  # L * (alpha_i, wt z_{<t})
        odd_after = sum(self._odd[c] for c in z)
        for t, letter in enumerate(z):
            odd_after -= self._odd[letter]
            if letter == i:
                sub = self._left(rest, z[:t] + z[t + 1:])
                if sub:
                    sign = -1 if (self._odd[i] and odd_after % 2) else 1
                    for e, c in sub.items():
                        k = e - pre
                        v = out.get(k, 0) + sign * c
                        if v:
                            out[k] = v
                        else:
                            out.pop(k, None)
            pre += self._sym[i][letter]
        self._memo_left[key] = out
        return out

    def _right(self, x: Word, z: Word) -> Laurent:
        if not z:
            return {0: 1}
        key = (x, z)
        hit = self._memo_right.get(key)
        if hit is not None:
            return hit
        j, rest = z[0], z[1:]
        out: Laurent = {}
        pre = 0
        odd_after = sum(self._odd[c] for c in x)
        for t, letter in enumerate(x):
            odd_after -= self._odd[letter]
            if letter == j:
                sub = self._right(x[:t] + x[t + 1:], rest)
                if sub:
                    sign = -1 if (self._odd[j] and odd_after % 2) else 1
                    for e, c in sub.items():
                        k = e - pre
                        v = out.get(k, 0) + sign * c
                        if v:
                            out[k] = v
                        else:
                            out.pop(k, None)
            pre += self._sym[j][letter]
        self._memo_right[key] = out
        return out

    def scale(self, mu: RootWeight) -> FieldScalar:
        out = ONE
        for i, m in enumerate(mu.coords):
            if m:
                out = out * self._c[i] ** m
        return out

    def words(self, x: Word, z: Word, split: str = "left") -> FieldScalar:
        if word_weight(x, self.datum.s) != word_weight(z, self.datum.s):
            return ZERO
        red = self.reduced(x, z, split)
        if not red:
            return ZERO
        return self.scale(word_weight(x, self.datum.s)) * _laurent_to_scalar(red, self.L)


@lru_cache(maxsize=32)
def engine(datum: CartanDatum) -> PairingEngine:
    return PairingEngine(datum)


def pair(datum: CartanDatum, x: AlgebraElement, y: AlgebraElement, split: str = "left") -> FieldScalar:
    eng = engine(datum)
    total = ZERO
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            if len(w1) == len(w2):
                v = eng.words(w1, w2, split)
                if not v.is_zero():
                    total = total + c1 * c2 * v
    return total


def pair_legs(datum: CartanDatum, a: Leg, b: Leg) -> FieldScalar:
    """C(E_u K^k, E_v K^l) = C(E_u, E_v) q^-((mu,l) + (k,mu) + (k,l))."""
    (u, k), (v, l) = a, b
    base = engine(datum).words(u, v)
    if base.is_zero():
        return ZERO
    mu = word_weight(u, datum.s).coords
    e = pair_exponent(datum, mu, l) + pair_exponent(datum, k, mu) + pair_exponent(datum, k, l)
    return base * FieldScalar.q(-e)


def pair_tensors(datum: CartanDatum, t: DecoratedTensor, u: DecoratedTensor) -> FieldScalar:
    """Leg-wise pairing with the super sign prod_{i<j} (-1)^{|t_j||u_i|}."""
    total = ZERO
    for kt, ct in t.terms.items():
        pt = [word_parity(datum, w) for w, _ in kt]
        for ku, cu in u.terms.items():
            pu = [word_parity(datum, w) for w, _ in ku]
            sign = 1
            for i in range(len(kt)):
                for j in range(i + 1, len(kt)):
                    if pt[j] and pu[i]:
                        sign = -sign
            v = ONE
            for a, b in zip(kt, ku):
                v = v * pair_legs(datum, a, b)
                if v.is_zero():
                    break
            if not v.is_zero():
                total = total + ct * cu * v * sign
    return total


# ---------------------------------------------------------------------------
# Gram blocks, kernels, quotient bases


@dataclass
class GramBlock:
    weight: RootWeight
    monomials: list
    reduced: list  # Laurent FieldScalar entries
    scale: FieldScalar

    @property
    def matrix(self) -> list:
        return [[self.scale * x for x in row] for row in self.reduced]

    def to_document(self) -> dict:
        return {
            "weight": list(self.weight.coords),
            "monomials": [list(w) for w in self.monomials],
            "reduced": [[format_scalar(x) for x in row] for row in self.reduced],
            "scale": format_scalar(self.scale),
        }

    @classmethod
    def from_document(cls, doc: dict) -> "GramBlock":
        return cls(RootWeight(tuple(doc["weight"])), [tuple(w) for w in doc["monomials"]],
                   [[parse_scalar(x) for x in row] for row in doc["reduced"]],
                   parse_scalar(doc["scale"]))


def gram(datum: CartanDatum, mu: RootWeight, cut: int | None = None) -> GramBlock:
    if cut is not None and mu.total > cut:
        raise DegreeCutExceeded(f"weight {mu} has degree {mu.total} > cut {cut}")
    eng = engine(datum)
    words = words_of_weight(mu)
    red = [[_laurent_to_scalar(eng.reduced(a, b), eng.L) for b in words] for a in words]
    return GramBlock(mu, words, red, eng.scale(mu))


def _poly_content(polys: list) -> tuple:
    """lcm of coefficient denominators and gcd of numerators across polys."""
    dens, nums = 1, 0
    for p in polys:
        for c in p.coeffs():
            if c != 0:
                dens = math.lcm(dens, int(c.q))
                nums = math.gcd(nums, int(c.p))
    return dens, nums


def normalize_relation(vec: list) -> list:
    """Scale a null vector to integral content-1 Laurent coefficients.

    The first nonzero coefficient gets lowest q-power exponent 0 and a
    positive leading coefficient.
    """
    nz = [x for x in vec if not x.is_zero()]
    if not nz:
        return list(vec)
    L = math.lcm(*(x.L for x in nz))
    lifted = []
    for x in vec:
        if x.is_zero():
            lifted.append(None)
        else:
            lifted.append(x._lift(L))
    den = None
    for item in lifted:
        if item is not None:
            d = item[2]
            den = d if den is None else (den * d) // den.gcd(d)
    vmin = min(item[0] for item in lifted if item is not None)
    polys = []
    for item in lifted:
        if item is None:
            polys.append(None)
            continue
        v, n, d = item
        polys.append((n * (den // d)).left_shift(v - vmin))
    g = None
    for p in polys:
        if p is not None:
            g = p if g is None else g.gcd(p)
    polys = [None if p is None else p // g for p in polys]
    dl, gn = _poly_content([p for p in polys if p is not None])
    polys = [None if p is None else p * flint.fmpq(dl, gn) for p in polys]
    first = next(p for p in polys if p is not None)
    low = next(k for k, c in enumerate(first.coeffs()) if c != 0)
    sign = 1 if first.coeffs()[-1] > 0 else -1
    out = []
    for p in polys:
        if p is None:
            out.append(ZERO)
        else:
            out.append(FieldScalar(-low, p * sign, flint.fmpq_poly([1]), L))
    return out


def kernel_basis(datum: CartanDatum, mu: RootWeight, cut: int | None = None,
                 block: GramBlock | None = None) -> list:
    """Normalized basis of {z : C(x, z) = 0 for all x} in weight mu."""
    block = block if block is not None else gram(datum, mu, cut)
    null = linalg.nullspace(block.reduced, ZERO, ONE)
    out = []
    for vec in null:
        vec = normalize_relation(vec)
        out.append(AlgebraElement(datum, dict(zip(block.monomials, vec))))
    return out


@dataclass
class QuotientBlock:
    weight: RootWeight
    monomials: list
    pivots: list  # words spanning the quotient in this weight
    rows: list  # words whose rows against the pivots are invertible
    solve: list  # inverse of reduced[rows, pivots]
    reduced: list
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {w: k for k, w in enumerate(self.monomials)}

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass
class QuotientBasis:
    datum: CartanDatum
    cut: int
    cache: object = None  # optional GramCache
    blocks: dict = field(default_factory=dict)
    _coords: dict = field(default_factory=dict)

    def gram(self, mu: RootWeight) -> GramBlock:
        if self.cache is None:
            return gram(self.datum, mu, self.cut)
        g = self.cache.get(self.datum, mu, self.cut)
        if g is None:
            g = gram(self.datum, mu, self.cut)
            self.cache.put(self.datum, mu, self.cut, g)
        return g

    def block(self, mu: RootWeight) -> QuotientBlock:
        if mu.total > self.cut:
            raise DegreeCutExceeded(f"weight {mu} beyond degree cut {self.cut}")
        blk = self.blocks.get(mu)
        if blk is None:
            blk = _quotient_block(self.gram(mu))
            self.blocks[mu] = blk
        return blk

    def pivots(self, mu: RootWeight) -> list:
        return self.block(mu).pivots

    def word_coords(self, word: Word) -> list:
        hit = self._coords.get(word)
        if hit is not None:
            return hit
        blk = self.block(word_weight(word, self.datum.s))
        col = blk.index[word]
        rhs = [blk.reduced[blk.index[r]][col] for r in blk.rows]
        out = linalg.matvec(blk.solve, rhs, ZERO)
        self._coords[word] = out
        return out

    def all_weights(self) -> list:
        return [mu for n in range(self.cut + 1) for mu in weights_of_degree(self.datum.s, n)]


def weights_of_degree(s: int, n: int) -> list:
    """All RootWeights of total n, reverse-lexicographic (alpha_1-heavy first)."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(RootWeight(tuple(prefix + [left])))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    rec([], n, s)
    return out


def _quotient_block(block: GramBlock) -> QuotientBlock:
    g = block.reduced
    pcols = linalg.rref(g)[1] if g else []
    pivots = [block.monomials[c] for c in pcols]
    sub = [[row[c] for c in pcols] for row in g]
    prow = linalg.independent_rows(sub) if pcols else []
    rows = [block.monomials[r] for r in prow]
    square = [[g[r][c] for c in pcols] for r in prow]
    try:
        solve = linalg.inverse(square, ZERO, ONE) if square else []
    except NotInvertible as exc:  # pragma: no cover - guarded invariant
        raise NotInvertible(f"pivot restriction singular at weight {block.weight}") from exc
    return QuotientBlock(block.weight, block.monomials, pivots, rows, solve, g)


def quotient_basis(datum: CartanDatum, degree_cut: int, eager: bool = False, cache=None) -> QuotientBasis:
    qb = QuotientBasis(datum, degree_cut, cache=cache)
    if eager:
        for mu in qb.all_weights():
            qb.block(mu)
    return qb


def normal_form(datum: CartanDatum, x: AlgebraElement, basis: QuotientBasis) -> list:
    """Coordinates of homogeneous x on the pivots of its weight."""
    if x.is_zero():
        return []
    mu = x.weight()
    blk = basis.block(mu)
    out = [ZERO] * blk.rank
    for w, c in x.terms.items():
        for k, v in enumerate(basis.word_coords(w)):
            if not v.is_zero():
                out[k] = out[k] + c * v
    return out
