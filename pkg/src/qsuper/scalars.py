"""Exact scalars in q^(1/L) and truncated power series in h.

A :class:`FieldScalar` is an element of the rational function field Q(q^(1/L)).
Internally it is stored as ``x^val * num(x) / den(x)`` with ``x = q^(1/L)``,
``num`` and ``den`` coprime polynomials over Q, ``num(0) != 0``, ``den(0) != 0``
and ``den`` monic.  ``L`` is reduced to the smallest value that keeps all
exponents integral, so equal values always have identical representations.

:class:`HSeries` is a power series in h truncated at a fixed order, with either
exact rational or complex double coefficients.  :func:`h_expand` substitutes
``q = e^(h/2)``.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import flint

from .errors import NotInvertible, ParseError, PoleAtOne, PoleAtZero

Rational = Fraction


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, flint.fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, flint.fmpz):
        return Fraction(int(c))
    if isinstance(c, str):
        return parse_rational(c)
    raise TypeError(f"cannot convert {c!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer literal; floating-point literals are rejected."""
    s = str(text).strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ParseError(f"not an exact rational literal: {text!r}")
    if re.fullmatch(r".*/0+", s):
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(s)


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _poly(coeffs: Sequence) -> flint.fmpq_poly:
    return flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                            for c in coeffs])


def _coeffs(p: flint.fmpq_poly) -> list[Fraction]:
    return [Fraction(int(c.p), int(c.q)) for c in p.coeffs()]


def _low_order(p: flint.fmpq_poly) -> int:
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            return k
    raise ValueError("zero polynomial")


def _stretch(p: flint.fmpq_poly, k: int) -> flint.fmpq_poly:
    """Substitute x -> x^k."""
    if k == 1:
        return p
    cs = p.coeffs()
    out = [0] * ((len(cs) - 1) * k + 1) if cs else []
    for i, c in enumerate(cs):
        out[i * k] = c
    return flint.fmpq_poly(out)


def _compress(p: flint.fmpq_poly, g: int) -> flint.fmpq_poly:
    """Substitute x^g -> x (all exponents must be divisible by g)."""
    if g == 1:
        return p
    return flint.fmpq_poly(p.coeffs()[::g])


_ONE_POLY = flint.fmpq_poly([1])
_ZERO_POLY = flint.fmpq_poly([])


class FieldScalar:
    """Exact element of Q(q^(1/L)) in canonical form."""

    __slots__ = ("val", "num", "den", "L", "_key")

    def __init__(self, val: int, num: flint.fmpq_poly, den: flint.fmpq_poly, L: int,
                 _canonical: bool = False):
        if _canonical:
            self.val, self.num, self.den, self.L = val, num, den, L
        else:
            self.val, self.num, self.den, self.L = _normalize(val, num, den, L)
        self._key = None

    # constructors -------------------------------------------------------
    @classmethod
    def from_rational(cls, c) -> "FieldScalar":
        c = _to_fraction(c)
        if c == 0:
            return ZERO
        return cls(0, _poly([c]), _ONE_POLY, 1, _canonical=True)

    @classmethod
    def q(cls, exponent=1) -> "FieldScalar":
        """The monomial q^exponent for a rational exponent."""
        e = _to_fraction(exponent)
        return cls(e.numerator, _ONE_POLY, _ONE_POLY, e.denominator, _canonical=True)

    @classmethod
    def laurent(cls, terms: dict, L: int = 1) -> "FieldScalar":
        """Build sum of c * q^(e/L) from ``{e: c}`` with integer keys."""
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return ZERO
        lo = min(terms)
        hi = max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = _to_fraction(c)
        return cls(lo, _poly(coeffs), _ONE_POLY, L)

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.val == 0 and self.num.is_one() and self.den.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic -------------------------------------------------------
    def _lift(self, L: int):
        k = L // self.L
        return self.val * k, _stretch(self.num, k), _stretch(self.den, k)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        L = math.lcm(self.L, other.L)
        v1, n1, d1 = self._lift(L)
        v2, n2, d2 = other._lift(L)
        m = min(v1, v2)
        num = n1.left_shift(v1 - m) * d2 + n2.left_shift(v2 - m) * d1
        return FieldScalar(m, num, d1 * d2, L)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return FieldScalar(self.val, -self.num, self.den, self.L, _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ZERO
        if self.is_one():
            return other
        if other.is_one():
            return self
        L = math.lcm(self.L, other.L)
        v1, n1, d1 = self._lift(L)
        v2, n2, d2 = other._lift(L)
        return FieldScalar(v1 + v2, n1 * n2, d1 * d2, L)

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero scalar")
        return FieldScalar(-self.val, self.den, self.num, self.L)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison -------------------------------------------------------
    def key(self):
        if self._key is None:
            self._key = (self.L, self.val, tuple(_coeffs(self.num)), tuple(_coeffs(self.den)))
        return self._key

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.L == other.L and self.val == other.val and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash(self.key())

    # views ------------------------------------------------------------
    def numerator_terms(self) -> dict[Fraction, Fraction]:
        """Terms of the numerator as ``{q-exponent: coefficient}``."""
        return {Fraction(self.val + k, self.L): c
                for k, c in enumerate(_coeffs(self.num)) if c != 0}

    def denominator_terms(self) -> dict[Fraction, Fraction]:
        return {Fraction(k, self.L): c for k, c in enumerate(_coeffs(self.den)) if c != 0}

    def as_rational(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if self.val != 0 or not self.den.is_one() or self.num.degree() != 0:
            raise ValueError(f"{self} is not a constant")
        return _coeffs(self.num)[0]

    def is_constant(self) -> bool:
        return self.is_zero() or (self.val == 0 and self.den.is_one() and self.num.degree() == 0)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"FieldScalar({format_scalar(self)!r})"


def _normalize(val: int, num, den, L: int):
    if num.is_zero():
        return 0, _ZERO_POLY, _ONE_POLY, 1
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    k = _low_order(num)
    if k:
        num = num.right_shift(k)
        val += k
    k = _low_order(den)
    if k:
        den = den.right_shift(k)
        val -= k
    if den.degree() > 0:
        g = num.gcd(den)
        if not g.is_one():
            num = num // g
            den = den // g
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    exps = [val, L]
    exps += [i for i, c in enumerate(num.coeffs()) if c != 0]
    exps += [i for i, c in enumerate(den.coeffs()) if c != 0]
    g = reduce(math.gcd, exps)
    if g > 1:
        num = _compress(num, g)
        den = _compress(den, g)
        val //= g
        L //= g
    return val, num, den, L


def _coerce(x):
    if isinstance(x, FieldScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return FieldScalar.from_rational(x)
    return NotImplemented


ZERO = FieldScalar(0, _ZERO_POLY, _ONE_POLY, 1, _canonical=True)
ONE = FieldScalar(0, _ONE_POLY, _ONE_POLY, 1, _canonical=True)


def scalar(x) -> FieldScalar:
    """Coerce an int, Fraction, string or FieldScalar to a FieldScalar."""
    if isinstance(x, str):
        return parse_scalar(x)
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot coerce {x!r} to FieldScalar")
    return out


def qint(n, d=1) -> FieldScalar:
    """Symmetric quantum number (q^(dn) - q^(-dn)) / (q^d - q^(-d))."""
    n = Fraction(n)
    d = Fraction(d)
    return (FieldScalar.q(d * n) - FieldScalar.q(-d * n)) / (FieldScalar.q(d) - FieldScalar.q(-d))


# ---------------------------------------------------------------------------
# printing and parsing


def _fmt_terms(terms: dict[Fraction, Fraction]) -> str:
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = _fmt_rational(a)
        else:
            mono = "q" if e == 1 else f"q^({_fmt_rational(e)})"
            body = mono if a == 1 else f"{_fmt_rational(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_scalar(x: FieldScalar) -> str:
    """Canonical text form; ``parse_scalar(format_scalar(x)) == x``."""
    num = _fmt_terms(x.numerator_terms())
    if x.den.is_one():
        return num
    return f"({num})/({_fmt_terms(x.denominator_terms())})"


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coef>\d+(?:/\d+)?)?\s*(?P<q>\*?\s*q(?:\s*\^\s*(?:\((?P<e1>[+-]?\d+(?:/\d+)?)\)|(?P<e2>[+-]?\d+(?:/\d+)?)))?)?\s*"
)


def _parse_sum(text: str) -> FieldScalar:
    s = text.strip()
    if not s:
        raise ParseError("empty scalar expression")
    total = ZERO
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("q") is None):
            raise ParseError(f"bad scalar expression {text!r} at offset {pos}")
        if m.group("sign") is None and not first:
            raise ParseError(f"missing operator in {text!r} at offset {pos}")
        if m.group("coef") is None and m.group("q").startswith("*"):
            raise ParseError(f"dangling '*' in {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = parse_rational(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("q") is None:
            exp = Fraction(0)
        else:
            e = m.group("e1") or m.group("e2")
            exp = parse_rational(e) if e is not None else Fraction(1)
        total = total + sign * coef * FieldScalar.q(exp)
        pos = m.end()
        first = False
    return total


def parse_scalar(text: str) -> FieldScalar:
    """Parse the scalar printing format: a sum of ``c*q^(a/b)`` terms or ``(N)/(D)``."""
    s = text.strip()
    m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", s)
    if m and _balanced(m.group(1)) and _balanced(m.group(2)):
        den = _parse_sum(m.group(2))
        if den.is_zero():
            raise ParseError("zero denominator")
        return _parse_sum(m.group(1)) / den
    if "." in s or "e" in s.lower().replace("q", ""):
        raise ParseError(f"floating-point literal in {text!r}")
    return _parse_sum(s)


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


# ---------------------------------------------------------------------------
# specialisations


def _root_one_multiplicity(p: flint.fmpq_poly) -> tuple[int, flint.fmpq_poly]:
    k = 0
    lin = flint.fmpq_poly([-1, 1])
    while not p.is_zero() and p(1) == 0:
        p = p // lin
        k += 1
    return k, p


def evaluate_at_one(x: FieldScalar) -> Fraction:
    """Classical limit q -> 1 after cancelling common (q^(1/L) - 1) factors."""
    if x.is_zero():
        return Fraction(0)
    kn, n = _root_one_multiplicity(x.num)
    kd, d = _root_one_multiplicity(x.den)
    if kd > kn:
        raise PoleAtOne(f"{x} has a pole at q = 1")
    if kn > kd:
        return Fraction(0)
    return _to_fraction(n(1)) / _to_fraction(d(1))


class HSeries:
    """Power series in h truncated after h^order.

    Coefficients are either all exact :class:`~fractions.Fraction` values or
    complex doubles; mixing promotes to complex.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise ValueError("HSeries needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for c in self.coeffs)

    @classmethod
    def constant(cls, c, order: int) -> "HSeries":
        return cls([c] + [Fraction(0)] * order)

    @classmethod
    def zero(cls, order: int) -> "HSeries":
        return cls([Fraction(0)] * (order + 1))

    @classmethod
    def exp(cls, a, order: int) -> "HSeries":
        """Series of e^(a h)."""
        out = [Fraction(1)]
        for k in range(1, order + 1):
            out.append(out[-1] * a / k)
        return cls(out)

    def _check(self, other: "HSeries"):
        if other.order != self.order:
            raise ValueError(f"truncation mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, HSeries):
            other = HSeries.constant(other, self.order)
        self._check(other)
        return HSeries(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return HSeries(-a for a in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, HSeries):
            other = HSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HSeries):
            return HSeries(a * other for a in self.coeffs)
        self._check(other)
        n = len(self.coeffs)
        a, b = self.coeffs, other.coeffs
        return HSeries(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0) if self.exact and other.exact else 0j)
                       for k in range(n))

    __rmul__ = __mul__

    def inverse(self) -> "HSeries":
        a = self.coeffs
        if a[0] == 0:
            raise NotInvertible("series with zero constant term")
        inv0 = (Fraction(1) / a[0]) if isinstance(a[0], (Fraction, int)) else 1 / a[0]
        out = [inv0]
        for k in range(1, len(a)):
            s = sum(a[i] * out[k - i] for i in range(1, k + 1))
            out.append(-s * inv0)
        return HSeries(out)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            cs = _fmt_rational(Fraction(c)) if isinstance(c, (Fraction, int)) else repr(complex(c))
            parts.append(cs if k == 0 else (f"{cs} h" if k == 1 else f"{cs} h^{k}"))
        return " + ".join(parts)

    def __repr__(self):
        return f"HSeries({str(self)!r})"


def parse_hseries(text: str) -> HSeries:
    """Parse ``"c0 + c1 h + ... + cN h^N"`` with exact rational coefficients."""
    parts = [p.strip() for p in text.split(" + ")]
    out = []
    for k, p in enumerate(parts):
        body = p
        if k == 1:
            if not body.endswith(" h"):
                raise ParseError(f"bad series term {p!r}")
            body = body[:-2]
        elif k > 1:
            suffix = f" h^{k}"
            if not body.endswith(suffix):
                raise ParseError(f"bad series term {p!r}")
            body = body[: -len(suffix)]
        out.append(parse_rational(body))
    return HSeries(out)


def _exp_series_of_poly(p: flint.fmpq_poly, shift: int, L: int, n_terms: int) -> list[Fraction]:
    """Taylor coefficients of x^shift * p(x) at x = e^(h/(2L)), h^0..h^(n_terms-1)."""
    cs = [(shift + i, c) for i, c in enumerate(_coeffs(p)) if c != 0]
    out = []
    fact = 1
    for j in range(n_terms):
        if j:
            fact *= j
        s = sum((c * Fraction(e, 2 * L) ** j for e, c in cs), Fraction(0))
        out.append(s / fact)
    return out


def h_expand(x: FieldScalar, order: int) -> HSeries:
    """Taylor coefficients of x(q = e^(h/2)) through h^order, exactly."""
    if x.is_zero():
        return HSeries.zero(order)
    # valuation of the denominator at h = 0 equals the multiplicity of root x = 1
    kd, _ = _root_one_multiplicity(x.den)
    kn, _ = _root_one_multiplicity(x.num)
    if kd > kn:
        raise PoleAtZero(f"{x} has a pole at h = 0")
    n_terms = order + 1 + kd
    num = _exp_series_of_poly(x.num, x.val, x.L, n_terms)[kd:]
    den = _exp_series_of_poly(x.den, 0, x.L, n_terms)[kd:]
    return HSeries(num[: order + 1]) * HSeries(den[: order + 1]).inverse()
