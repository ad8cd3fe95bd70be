"""Free associative superalgebra on E_1..E_s and its braided coproduct.

Words are tuples of 0-based letters.  A decorated leg ``(word, k)`` stands for
``E_word * K^k`` with ``K^k = prod_i q^(k_i d_i h_i)``; tokens are even and are
always moved to the right of the word, paying ``K_i E_j = q^(d_i a_ij) E_j K_i``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .cartan import CartanDatum, RootWeight
from .errors import ParseError
from .scalars import ONE, ZERO, FieldScalar, format_scalar, scalar

Word = tuple[int, ...]
Leg = tuple[Word, tuple[int, ...]]


def parse_word(text: str) -> Word:
    """``"E1*E2*E1"`` (also accepts F letters and ``"1"`` for the empty word)."""
    s = text.strip()
    if s in ("", "1"):
        return ()
    out = []
    for tok in s.split("*"):
        m = re.fullmatch(r"\s*[EF](\d+)\s*", tok)
        if not m or int(m.group(1)) < 1:
            raise ParseError(f"bad word literal {text!r}")
        out.append(int(m.group(1)) - 1)
    return tuple(out)


def format_word(word: Word, letter: str = "E") -> str:
    return "*".join(f"{letter}{i + 1}" for i in word) if word else "1"


def word_weight(word: Word, s: int) -> RootWeight:
    c = [0] * s
    for i in word:
        c[i] += 1
    return RootWeight(tuple(c))


def word_parity(datum: CartanDatum, word: Word) -> int:
    return sum(datum.is_odd(i) for i in word) % 2


def words_of_weight(mu: RootWeight) -> list[Word]:
    """All words with letter counts mu, in lexicographic order."""
    letters = [i for i, c in enumerate(mu.coords) for _ in range(c)]
    return sorted(set(itertools.permutations(letters)))


def pair_exponent(datum: CartanDatum, a: Iterable, b: Iterable) -> Fraction:
    """(sum a_i alpha_i, sum b_j alpha_j) for integer coordinate vectors."""
    a, b = tuple(a), tuple(b)
    return sum((a[i] * b[j] * datum.sym(i, j)
                for i in range(datum.s) if a[i] for j in range(datum.s) if b[j]), Fraction(0))


@dataclass(frozen=True)
class AlgebraElement:
    datum: CartanDatum
    terms: Mapping[Word, FieldScalar]

    def __post_init__(self):
        object.__setattr__(self, "terms", {w: c for w, c in self.terms.items() if not c.is_zero()})

    @classmethod
    def word(cls, datum: CartanDatum, word: Word, coef=ONE) -> "AlgebraElement":
        return cls(datum, {tuple(word): scalar(coef)})

    @classmethod
    def one(cls, datum: CartanDatum) -> "AlgebraElement":
        return cls.word(datum, ())

    @classmethod
    def generator(cls, datum: CartanDatum, i: int) -> "AlgebraElement":
        return cls.word(datum, (i,))

    @classmethod
    def parse(cls, datum: CartanDatum, text: str) -> "AlgebraElement":
        """Sum of ``coef : word`` entries separated by ``;`` or a single word."""
        terms: dict = {}
        for part in text.split(";"):
            if ":" in part:
                c, w = part.rsplit(":", 1)
                coef = scalar(c.strip())
            else:
                coef, w = ONE, part
            w = parse_word(w)
            terms[w] = terms.get(w, ZERO) + coef
        return cls(datum, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return AlgebraElement(self.datum, out)

    def __neg__(self):
        return AlgebraElement(self.datum, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = scalar(c)
        return AlgebraElement(self.datum, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def weights(self) -> set[RootWeight]:
        return {word_weight(w, self.datum.s) for w in self.terms}

    def weight(self) -> RootWeight:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError("element is not weight-homogeneous")
        return next(iter(ws))

    def parity(self) -> int:
        ps = {word_parity(self.datum, w) for w in self.terms}
        if len(ps) > 1:
            raise ValueError("element is not parity-homogeneous")
        return ps.pop() if ps else 0

    def component(self, mu: RootWeight) -> "AlgebraElement":
        return AlgebraElement(self.datum, {w: c for w, c in self.terms.items()
                                           if word_weight(w, self.datum.s) == mu})

    def format(self, letter: str = "E") -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            parts.append(f"({format_scalar(c)})*{format_word(w, letter)}")
        return " + ".join(parts)

    def __str__(self):
        return self.format()


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    out: dict = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            w = w1 + w2
            out[w] = out.get(w, ZERO) + c1 * c2
    return AlgebraElement(x.datum, out)


# ---------------------------------------------------------------------------
# decorated tensors


@dataclass(frozen=True)
class DecoratedTensor:
    """Linear combination of ``leg_1 (x) ... (x) leg_n`` with legs ``E_w K^k``."""

    datum: CartanDatum
    terms: Mapping[tuple[Leg, ...], FieldScalar]

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: c for k, c in self.terms.items() if not c.is_zero()})

    @property
    def legs(self) -> int:
        return len(next(iter(self.terms))) if self.terms else 0

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return DecoratedTensor(self.datum, out)

    def __sub__(self, other):
        return self + DecoratedTensor(other.datum, {k: -c for k, c in other.terms.items()})

    def __mul__(self, other: "DecoratedTensor") -> "DecoratedTensor":
        out: dict = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                key, c = _leg_product(self.datum, ka, kb)
                out[key] = out.get(key, ZERO) + c * ca * cb
        return DecoratedTensor(self.datum, out)

    def __eq__(self, other):
        if not isinstance(other, DecoratedTensor):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            legs = []
            for w, k in key:
                tok = "".join(f"K{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(k) if e)
                body = format_word(w) if w else ""
                legs.append((body + ("*" if body and tok else "") + tok) or "1")
            parts.append(f"({format_scalar(self.terms[key])})*" + " (x) ".join(legs))
        return " + ".join(parts)

    def __str__(self):
        return self.format()


def _leg_product(datum: CartanDatum, a: tuple[Leg, ...], b: tuple[Leg, ...]):
    s = datum.s
    exp = Fraction(0)
    sign = 1
    legs = []
    pa = [word_parity(datum, w) for w, _ in a]
    pb = [word_parity(datum, w) for w, _ in b]
    for i, ((wa, ka), (wb, kb)) in enumerate(zip(a, b)):
        # moving b_i left past a_{i+1..n}
        if pb[i] and sum(pa[i + 1:]) % 2:
            sign = -sign
        exp += pair_exponent(datum, ka, word_weight(wb, s).coords)
        legs.append((wa + wb, tuple(x + y for x, y in zip(ka, kb))))
    return tuple(legs), FieldScalar.q(exp) * sign


def _zero_k(s: int) -> tuple[int, ...]:
    return (0,) * s


def tensor_of(datum: CartanDatum, *elements: AlgebraElement) -> DecoratedTensor:
    """Plain tensor product of undecorated elements."""
    z = _zero_k(datum.s)
    out: dict = {}
    for combo in itertools.product(*(e.terms.items() for e in elements)):
        key = tuple((w, z) for w, _ in combo)
        c = ONE
        for _, ci in combo:
            c = c * ci
        out[key] = out.get(key, ZERO) + c
    return DecoratedTensor(datum, out)


def word_coproduct_terms(datum: CartanDatum, word: Word) -> Iterator[tuple[Word, Word, Fraction, int]]:
    """Yield ``(left, right, q-exponent, sign)`` with Delta(E_word) = sum sign q^e left (x) right K^wt(left)."""
    n = len(word)
    odd = [datum.is_odd(i) for i in word]
    for mask in range(1 << n):
        chosen = [(mask >> t) & 1 for t in range(n)]
        exp = Fraction(0)
        sign = 1
        for u in range(n):
            for t in range(u + 1, n):
                if chosen[u] and not chosen[t]:
                    exp += datum.sym(word[u], word[t])
                elif not chosen[u] and chosen[t] and odd[u] and odd[t]:
                    sign = -sign
        left = tuple(word[t] for t in range(n) if chosen[t])
        right = tuple(word[t] for t in range(n) if not chosen[t])
        yield left, right, exp, sign


def coproduct(x: AlgebraElement) -> DecoratedTensor:
    datum = x.datum
    s = datum.s
    out: dict = {}
    for w, c in x.terms.items():
        for left, right, exp, sign in word_coproduct_terms(datum, w):
            key = ((left, _zero_k(s)), (right, word_weight(left, s).coords))
            out[key] = out.get(key, ZERO) + c * FieldScalar.q(exp) * sign
    return DecoratedTensor(datum, out)


def coproduct_on_leg(t: DecoratedTensor, leg: int) -> DecoratedTensor:
    """Apply Delta to one leg; Delta(E_w K^k) = sum E_l K^k (x) E_r K^(wt l + k)."""
    datum = t.datum
    s = datum.s
    out: dict = {}
    for key, c in t.terms.items():
        w, k = key[leg]
        for left, right, exp, sign in word_coproduct_terms(datum, w):
            wl = word_weight(left, s).coords
            new = (key[:leg] + ((left, k), (right, tuple(a + b for a, b in zip(wl, k))))
                   + key[leg + 1:])
            out[new] = out.get(new, ZERO) + c * FieldScalar.q(exp) * sign
    return DecoratedTensor(datum, out)


def counit_on_leg(t: DecoratedTensor, leg: int) -> DecoratedTensor:
    out: dict = {}
    for key, c in t.terms.items():
        if key[leg][0] == ():
            new = key[:leg] + key[leg + 1:]
            out[new] = out.get(new, ZERO) + c
    return DecoratedTensor(t.datum, out)
