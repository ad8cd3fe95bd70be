"""R-matrices on tensor products of modules and braid group representations.

R = D * Theta where
    Theta = sum_mu prod_i ((-1)^|i| (q_i - q_i^-1))^{mu_i} sum_{a,b} (G_mu^-1)_{ba} E_a (x) F_b,
G_mu the reduced Gram block restricted to the pivots of weight mu, and D the
Cartan factor v_l (x) w_m -> q^{(l, m)} v_l (x) w_m applied after Theta.
An operator a (x) b acts by (a (x) b)(v (x) w) = (-1)^{|b||v|} av (x) bw.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import linalg
from .cartan import CartanDatum, root_pairing
from .errors import DepthCutTooSmall, ParseError
from .pairing import quotient_basis, weights_of_degree
from .scalars import ONE, ZERO, FieldScalar, evaluate_at_one, h_expand
from .sparse import SMat
from .verma import Module


def tensor_parity(V: Module, W: Module) -> list:
    return [(a + b) % 2 for a in V.parity for b in W.parity]


def op_tensor(V: Module, A: SMat, B: SMat, b_parity: int) -> SMat:
    """Matrix of a (x) b on V (x) W where b has parity b_parity."""
    if b_parity:
        A = A @ V.parity_matrix()
    return A.kron(B)


def super_flip(pv: list, pw: list) -> SMat:
    """tau: V (x) W -> W (x) V, v (x) w -> (-1)^{|v||w|} w (x) v."""
    dv, dw = len(pv), len(pw)
    out = SMat(dv * dw, dv * dw)
    for a in range(dv):
        for b in range(dw):
            out.set(b * dv + a, a * dw + b, -ONE if pv[a] and pw[b] else ONE)
    return out


def cartan_factor(datum: CartanDatum, V: Module, W: Module) -> SMat:
    diag = []
    for a in range(V.dim):
        la = V.weight(a)
        for b in range(W.dim):
            diag.append(FieldScalar.q(root_pairing(datum, la, W.weight(b))))
    return SMat.diagonal(diag)


def _depth_span(M: Module) -> int:
    return max(M.depth(k) for k in range(M.dim)) - min(M.depth(k) for k in range(M.dim))


def quasi_r_action(datum: CartanDatum, V: Module, W: Module, depth_cut: int | None = None) -> SMat:
    """Theta acting on V (x) W."""
    need = min(_depth_span(V), _depth_span(W))
    if depth_cut is None:
        depth_cut = need
    if depth_cut < need:
        raise DepthCutTooSmall(f"tensor weights need Gram data to degree {need}, cut is {depth_cut}")
    qb = quotient_basis(datum, depth_cut)
    total = SMat.identity(V.dim * W.dim)
    for n in range(1, need + 1):
        for mu in weights_of_degree(datum.s, n):
            piv = qb.pivots(mu)
            if not piv:
                continue
            Ea = [V.word_operator(w, "E") for w in piv]
            if all(op.is_zero() for op in Ea):
                continue
            Fb = [W.word_operator(w, "F") for w in piv]
            blk = qb.block(mu)
            cols = [blk.index[w] for w in piv]
            M = [[blk.reduced[a][b] for b in cols] for a in cols]
            Minv = linalg.inverse(M, ZERO, ONE)
            factor = ONE
            for i, m in enumerate(mu.coords):
                qi = FieldScalar.q(datum.d[i])
                f = qi - qi.inverse()
                if datum.is_odd(i):
                    f = -f
                factor = factor * f ** m
            pb = sum(mu.coords[i] for i in range(datum.s) if datum.is_odd(i)) % 2
            for a, A in enumerate(Ea):
                if A.is_zero():
                    continue
                for b, B in enumerate(Fb):
                    c = Minv[b][a]
                    if c.is_zero() or B.is_zero():
                        continue
                    total = total + op_tensor(V, A, B, pb).scale(factor * c)
    return total


def r_matrix(datum: CartanDatum, V: Module, W: Module, depth_cut: int | None = None) -> SMat:
    return cartan_factor(datum, V, W) @ quasi_r_action(datum, V, W, depth_cut)


def coproduct_action(V: Module, W: Module, gen: str, i: int, opposite: bool = False) -> SMat:
    """Action of Delta(x) (or Delta^op(x)) on V (x) W for x in {E_i, F_i, K_i}.

    Delta(E) = E (x) K + 1 (x) E, Delta(F) = F (x) 1 + K^-1 (x) F, Delta(K) = K (x) K.
    """
    IV, IW = SMat.identity(V.dim), SMat.identity(W.dim)
    p = 1 if V.datum.is_odd(i) else 0
    if gen == "K":
        return V.Ki(i).kron(W.Ki(i))
    if gen == "E":
        terms = [(V.E[i], W.Ki(i), 0), (IV, W.E[i], p)]
        if opposite:
            terms = [(V.Ki(i), W.E[i], p), (V.E[i], IW, 0)]
    elif gen == "F":
        terms = [(V.F[i], IW, 0), (V.Ki(i, -1), W.F[i], p)]
        if opposite:
            terms = [(IV, W.F[i], p), (V.F[i], W.Ki(i, -1), 0)]
    else:
        raise ValueError(gen)
    out = SMat(V.dim * W.dim, V.dim * W.dim)
    for A, B, pb in terms:
        out = out + op_tensor(V, A, B, pb)
    return out


def intertwining_residuals(datum: CartanDatum, V: Module, W: Module, R: SMat | None = None) -> dict:
    R = R if R is not None else r_matrix(datum, V, W)
    out = {}
    for gen in ("E", "F", "K"):
        for i in range(datum.s):
            lhs = R @ coproduct_action(V, W, gen, i)
            rhs = coproduct_action(V, W, gen, i, opposite=True) @ R
            out[f"{gen}{i + 1}"] = (lhs - rhs).nnz()
    return out


# ---------------------------------------------------------------------------
# braid group


def parse_braid_word(text: str) -> list:
    """``"s1 s2 s1^-1"`` -> [(1, 1), (2, 1), (1, -1)] (1-based generator, exponent)."""
    out = []
    for tok in text.replace("*", " ").split():
        m = re.fullmatch(r"s(\d+)(?:\^(-?\d+))?", tok)
        if not m or int(m.group(1)) < 1:
            raise ParseError(f"bad braid token {tok!r} in {text!r}")
        e = int(m.group(2)) if m.group(2) is not None else 1
        if e == 0:
            continue
        out.extend([(int(m.group(1)), 1 if e > 0 else -1)] * abs(e))
    return out


def format_braid_word(word: list) -> str:
    return " ".join(f"s{i}" + ("" if e == 1 else "^-1") for i, e in word) or "1"


def embed(op: SMat, i: int, n: int, d: int) -> SMat:
    """Place an even operator on slots i, i+1 (1-based) of V^(x)n."""
    left = SMat.identity(d ** (i - 1))
    right = SMat.identity(d ** (n - i - 1))
    return left.kron(op).kron(right)


@dataclass
class BraidRepresentation:
    datum: CartanDatum
    module: Module
    n: int
    generators: list  # rho(sigma_i), i = 1..n-1
    inverses: list

    @property
    def dim(self) -> int:
        return self.module.dim ** self.n

    def word(self, word) -> SMat:
        if isinstance(word, str):
            word = parse_braid_word(word)
        out = SMat.identity(self.dim)
        for i, e in word:
            if not 1 <= i < self.n:
                raise ParseError(f"generator s{i} outside 1..{self.n - 1}")
            out = out @ (self.generators[i - 1] if e > 0 else self.inverses[i - 1])
        return out


def braid_generator(datum: CartanDatum, V: Module, R: SMat | None = None) -> SMat:
    R = R if R is not None else r_matrix(datum, V, V)
    return super_flip(V.parity, V.parity) @ R


def _inverse(op: SMat) -> SMat:
    return SMat.from_dense(linalg.inverse(op.dense(), ZERO, ONE))


def braid_representation(datum: CartanDatum, V: Module, n: int, R: SMat | None = None) -> BraidRepresentation:
    check = braid_generator(datum, V, R)
    inv = _inverse(check)
    gens = [embed(check, i, n, V.dim) for i in range(1, n)]
    invs = [embed(inv, i, n, V.dim) for i in range(1, n)]
    return BraidRepresentation(datum, V, n, gens, invs)


def braid_residuals(rep: BraidRepresentation) -> dict:
    out = {}
    g = rep.generators
    for i in range(len(g) - 1):
        out[f"s{i + 1}s{i + 2}s{i + 1}"] = (g[i] @ g[i + 1] @ g[i] - g[i + 1] @ g[i] @ g[i + 1]).nnz()
    for i in range(len(g)):
        for j in range(i + 2, len(g)):
            out[f"s{i + 1}s{j + 1}"] = (g[i] @ g[j] - g[j] @ g[i]).nnz()
    return out


def ybe_residual(datum: CartanDatum, V: Module, R: SMat | None = None) -> int:
    """Nonzero entries of R12 R13 R23 - R23 R13 R12 on V^(x)3."""
    R = R if R is not None else r_matrix(datum, V, V)
    d = V.dim
    I = SMat.identity(d)
    R12 = R.kron(I)
    R23 = I.kron(R)
    P23 = I.kron(super_flip(V.parity, V.parity))
    R13 = P23 @ R12 @ P23
    return (R12 @ R13 @ R23 - R23 @ R13 @ R12).nnz()


def classical_limit_residual(datum: CartanDatum, V: Module, R: SMat | None = None) -> int:
    """Nonzero entries of (rho(sigma) at q = 1) - super flip."""
    check = braid_generator(datum, V, R)
    flip = super_flip(V.parity, V.parity)
    lim = check.map(evaluate_at_one)
    flipq = flip.map(evaluate_at_one)
    return (lim - flipq).nnz()


def h_expand_matrix(op: SMat, order: int) -> dict:
    """{(i, j): HSeries} for every nonzero entry."""
    return {key: h_expand(v, order) for key, v in op.items()}
