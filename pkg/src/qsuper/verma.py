"""Deformed Verma modules, contravariant forms, irreducible quotients, characters.

Basis vectors of M(L) are F-pivot words applied to the highest weight vector;
the F-words reuse the E-side quotient basis through the mirror E_i -> F_i.
The raising action is computed on free words by straightening

    E_i F_j X = (-1)^{|i||j|} F_j E_i X + delta_ij [L'(h_i)]_i X,
    [n]_i = (q^(d_i n) - q^(-d_i n)) / (q_i - q_i^-1),

where L' is the weight of X, and then reduced to pivots.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cartan import CartanDatum, RootWeight, WeightFunctional
from .errors import TruncationWarning
from .free_algebra import Word, word_parity, word_weight, words_of_weight
from .pairing import QuotientBasis, quotient_basis, weights_of_degree
from .scalars import ONE, ZERO, FieldScalar, evaluate_at_one
from .sparse import SMat


def qbracket(datum: CartanDatum, i: int, value: Fraction) -> FieldScalar:
    """(q^(d_i v) - q^(-d_i v)) / (q_i - q_i^-1)."""
    if value == 0:
        return ZERO
    d = datum.d[i]
    return (FieldScalar.q(d * value) - FieldScalar.q(-d * value)) / (FieldScalar.q(d) - FieldScalar.q(-d))


def weight_values(datum: CartanDatum, lam: WeightFunctional, mu: RootWeight) -> tuple:
    """Values of lam - mu on h_1..h_s."""
    return tuple(lam.values[i] - sum(mu.coords[j] * datum.A[i][j] for j in range(datum.s))
                 for i in range(datum.s))


@dataclass
class Module:
    """Finite-dimensional (or depth-truncated) weight module with exact actions.

    ``offsets[k]`` is mu with weight(v_k) = lam - mu; ``labels[k]`` the F-word.
    F acting on vectors at depth ``depth_cut`` is unknown and stored as zero;
    ``complete`` says whether that truncation is harmless.
    """

    datum: CartanDatum
    lam: WeightFunctional
    offsets: list
    labels: list
    parity: list
    E: list
    F: list
    depth_cut: int
    complete: bool = False
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.offsets)

    def depth(self, k: int) -> int:
        return self.offsets[k].total

    def weight(self, k: int) -> WeightFunctional:
        return self.lam.shifted(self.datum, self.offsets[k])

    def h_values(self, k: int) -> tuple:
        return weight_values(self.datum, self.lam, self.offsets[k])

    def H(self, i: int) -> SMat:
        return SMat.diagonal([FieldScalar.from_rational(self.h_values(k)[i]) for k in range(self.dim)])

    def K(self, kvec) -> SMat:
        """Action of prod_i q^(k_i d_i h_i)."""
        diag = []
        for k in range(self.dim):
            hv = self.h_values(k)
            diag.append(FieldScalar.q(sum(kvec[i] * self.datum.d[i] * hv[i] for i in range(self.datum.s))))
        return SMat.diagonal(diag)

    def Ki(self, i: int, power: int = 1) -> SMat:
        kvec = [0] * self.datum.s
        kvec[i] = power
        return self.K(kvec)

    def parity_matrix(self) -> SMat:
        return SMat.diagonal([ONE if p == 0 else -ONE for p in self.parity])

    def defined_below(self, depth: int) -> list:
        """Indices of basis vectors of depth <= depth."""
        return [k for k in range(self.dim) if self.depth(k) <= depth]

    def word_operator(self, word: Word, letter: str = "E") -> SMat:
        """Operator of E_{w1} E_{w2} ... (rightmost letter acts first)."""
        ops = self.E if letter == "E" else self.F
        out = SMat.identity(self.dim)
        for i in word:
            out = out @ ops[i]
        return out

    def element_operator(self, element, letter: str = "E") -> SMat:
        out = SMat.zeros(self.dim, self.dim)
        for w, c in element.terms.items():
            out = out + self.word_operator(w, letter).scale(c)
        return out

    def weights(self) -> list:
        seen = []
        for mu in self.offsets:
            if mu not in seen:
                seen.append(mu)
        return seen

    def indices_of(self, mu: RootWeight) -> list:
        return [k for k, m in enumerate(self.offsets) if m == mu]


@dataclass
class VermaModule(Module):
    qb: QuotientBasis | None = None
    _efree: dict = field(default_factory=dict, repr=False)

    def raise_free(self, i: int, word: Word) -> dict:
        """E_i applied to F_word v as a combination of free F-words."""
        key = (i, word)
        hit = self._efree.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        if word:
            j, rest = word[0], word[1:]
            sub = self.raise_free(i, rest)
            sign = -1 if (self.datum.is_odd(i) and self.datum.is_odd(j)) else 1
            for w, c in sub.items():
                _acc(out, (j,) + w, c * sign)
            if i == j:
                mu = word_weight(rest, self.datum.s)
                val = weight_values(self.datum, self.lam, mu)[i]
                _acc(out, rest, qbracket(self.datum, i, val))
        self._efree[key] = out
        return out


def _acc(d: dict, k, v):
    if v.is_zero():
        return
    cur = d.get(k)
    new = v if cur is None else cur + v
    if new.is_zero():
        d.pop(k, None)
    else:
        d[k] = new


def build_verma(datum: CartanDatum, lam, degree_cut: int, qb: QuotientBasis | None = None) -> VermaModule:
    if not isinstance(lam, WeightFunctional):
        lam = WeightFunctional.of(lam)
    if len(lam.values) != datum.s:
        raise ValueError(f"weight has {len(lam.values)} values, datum rank is {datum.s}")
    qb = qb if qb is not None and qb.cut >= degree_cut else quotient_basis(datum, degree_cut)
    offsets, labels, index = [], [], {}
    for n in range(degree_cut + 1):
        for mu in weights_of_degree(datum.s, n):
            for w in qb.pivots(mu):
                index[w] = len(offsets)
                offsets.append(mu)
                labels.append(w)
    dim = len(offsets)
    parity = [word_parity(datum, w) for w in labels]
    mod = VermaModule(datum=datum, lam=lam, offsets=offsets, labels=labels, parity=parity,
                      E=[], F=[], depth_cut=degree_cut, qb=qb)
    s = datum.s
    for i in range(s):
        Fi = SMat(dim, dim)
        for k, w in enumerate(labels):
            if len(w) >= degree_cut:
                continue
            new = (i,) + w
            mu = word_weight(new, s)
            piv = qb.pivots(mu)
            for p, c in zip(piv, qb.word_coords(new)):
                if not c.is_zero():
                    Fi.set(index[p], k, c)
        mod.F.append(Fi)
    for i in range(s):
        Ei = SMat(dim, dim)
        for k, w in enumerate(labels):
            for word, c in mod.raise_free(i, w).items():
                piv = qb.pivots(word_weight(word, s))
                for p, v in zip(piv, qb.word_coords(word)):
                    if not v.is_zero():
                        Ei.add_to(index[p], k, c * v)
        mod.E.append(Ei)
    return mod


# ---------------------------------------------------------------------------
# contravariant form and quotients


def _apply(op: SMat, vec: dict) -> dict:
    out: dict = {}
    for i, row in op.data.items():
        acc = None
        for j, a in row.items():
            b = vec.get(j)
            if b is not None:
                acc = a * b if acc is None else acc + a * b
        if acc is not None and not acc.is_zero():
            out[i] = acc
    return out


def contravariant_gram(module: Module, mu) -> list:
    """Matrix <F_a v, F_b v> = [v] E_{a_k} ... E_{a_1} F_b v over basis vectors of weight mu.

    ``mu`` may be a RootWeight or an integer depth (all weights of that depth).
    """
    if isinstance(mu, int):
        idx = [k for k in range(module.dim) if module.depth(k) == mu]
    else:
        idx = module.indices_of(mu)
    top = module.indices_of(RootWeight.zero(module.datum.s))
    if len(top) != 1:
        raise ValueError("module has no unique highest weight vector")
    v0 = top[0]
    out = []
    for a in idx:
        row = []
        for b in idx:
            vec = {b: ONE}
            for letter in module.labels[a]:
                vec = _apply(module.E[letter], vec)
                if not vec:
                    break
            row.append(vec.get(v0, ZERO))
        out.append(row)
    return out


def irreducible_quotient(module: Module) -> Module:
    """Quotient by the radical of the contravariant form, weight by weight."""
    keep: list = []
    proj: dict = {}
    ranks_at_cut = 0
    for mu in module.weights():
        idx = module.indices_of(mu)
        S = contravariant_gram(module, mu)
        cols = linalg.rref(S)[1] if S else []
        sub = [[row[c] for c in cols] for row in S]
        rows = linalg.independent_rows(sub) if cols else []
        if cols:
            inv = linalg.inverse([[S[r][c] for c in cols] for r in rows], ZERO, ONE)
            P = linalg.matmul(inv, [S[r] for r in rows], ZERO)
        else:
            P = []
        proj[mu] = (idx, [idx[c] for c in cols], P)
        keep.extend(idx[c] for c in cols)
        if mu.total == module.depth_cut:
            ranks_at_cut += len(cols)
    keep.sort()
    new_index = {k: n for n, k in enumerate(keep)}
    complete = module.complete or ranks_at_cut == 0
    if not complete:
        warnings.warn(f"irreducible quotient has rank {ranks_at_cut} at the depth cut "
                      f"{module.depth_cut}; results are exact only below depth "
                      f"{module.depth_cut - 1}", TruncationWarning, stacklevel=2)

    def project(op: SMat) -> SMat:
        out = SMat(len(keep), len(keep))
        for n, k in enumerate(keep):
            col = {r: v for r, row in op.data.items() for c, v in row.items() if c == k}
            by_weight: dict = {}
            for r, v in col.items():
                by_weight.setdefault(module.offsets[r], {})[r] = v
            for mu, vec in by_weight.items():
                idx, kept, P = proj[mu]
                for a, target in enumerate(kept):
                    acc = ZERO
                    for pos, r in enumerate(idx):
                        if r in vec and not P[a][pos].is_zero():
                            acc = acc + P[a][pos] * vec[r]
                    if not acc.is_zero():
                        out.set(new_index[target], n, acc)
        return out

    return Module(datum=module.datum, lam=module.lam,
                  offsets=[module.offsets[k] for k in keep],
                  labels=[module.labels[k] for k in keep],
                  parity=[module.parity[k] for k in keep],
                  E=[project(op) for op in module.E], F=[project(op) for op in module.F],
                  depth_cut=module.depth_cut, complete=complete, name=module.name)


def _count_nonzero_columns(op: SMat, cols: list) -> int:
    keep = set(cols)
    return len({c for _, row in op.data.items() for c, v in row.items() if c in keep and not v.is_zero()})


def relation_residuals(module: Module, kernel_degree: int | None = None) -> dict:
    """Number of basis vectors on which each defining identity fails.

    Checks [h_j, E_i] = a_ji E_i, [h_j, F_i] = -a_ji F_i, the super commutator
    [E_i, F_j] = delta_ij (K_i - K_i^-1)/(q_i - q_i^-1), and that every kernel
    relation (and its F mirror) through ``kernel_degree`` acts by zero.  Identities
    involving F are only tested on vectors where F is defined (below the cut).
    """
    datum = module.datum
    s = datum.s
    cut = module.depth_cut
    below = [k for k in range(module.dim) if module.depth(k) < cut]
    out = {"weight_E": 0, "weight_F": 0, "EF": 0, "kernel_E": 0, "kernel_F": 0}
    for i in range(s):
        for j in range(s):
            a = FieldScalar.from_rational(datum.A[j][i])
            H = module.H(j)
            out["weight_E"] += _count_nonzero_columns(H @ module.E[i] - module.E[i] @ H - module.E[i].scale(a),
                                                      list(range(module.dim)))
            out["weight_F"] += _count_nonzero_columns(H @ module.F[i] - module.F[i] @ H + module.F[i].scale(a),
                                                      below)
            sign = -ONE if datum.is_odd(i) and datum.is_odd(j) else ONE
            comm = module.E[i] @ module.F[j] - (module.F[j] @ module.E[i]).scale(sign)
            if i == j:
                qi = FieldScalar.q(datum.d[i])
                comm = comm - (module.Ki(i) - module.Ki(i, -1)).scale((qi - qi.inverse()).inverse())
            out["EF"] += _count_nonzero_columns(comm, below)
    top = cut if kernel_degree is None else kernel_degree
    if top >= 2:
        from .pairing import kernel_basis

        for n in range(2, top + 1):
            for mu in weights_of_degree(s, n):
                for rel in kernel_basis(datum, mu):
                    out["kernel_E"] += _count_nonzero_columns(module.element_operator(rel, "E"),
                                                              list(range(module.dim)))
                    cols = [k for k in range(module.dim) if module.depth(k) <= cut - n]
                    out["kernel_F"] += _count_nonzero_columns(module.element_operator(rel, "F"), cols)
    return out


@dataclass
class CharacterTable:
    by_depth: dict
    by_weight: dict

    @property
    def total(self) -> int:
        return sum(self.by_depth.values())

    def rows(self) -> list:
        return [(mu.total, mu, r) for mu, r in sorted(self.by_weight.items(),
                                                      key=lambda kv: (kv[0].total, [-c for c in kv[0].coords]))]


def character(module: Module) -> CharacterTable:
    by_weight: dict = {}
    for mu in module.offsets:
        by_weight[mu] = by_weight.get(mu, 0) + 1
    by_depth: dict = {n: 0 for n in range(module.depth_cut + 1)}
    for mu, r in by_weight.items():
        by_depth[mu.total] = by_depth.get(mu.total, 0) + r
    return CharacterTable(by_depth, by_weight)


def quantum_character(datum: CartanDatum, lam, degree_cut: int) -> CharacterTable:
    """Character of the irreducible quotient via contravariant ranks (no projection)."""
    mod = build_verma(datum, lam, degree_cut)
    by_weight = {}
    for mu in mod.weights():
        by_weight[mu] = linalg.rank(contravariant_gram(mod, mu))
    by_depth = {n: 0 for n in range(degree_cut + 1)}
    for mu, r in by_weight.items():
        by_depth[mu.total] += r
    return CharacterTable(by_depth, {m: r for m, r in by_weight.items()})


# ---------------------------------------------------------------------------
# the classical (q = 1) side, computed on free f-words without any relations


def classical_character(datum: CartanDatum, lam, degree_cut: int) -> CharacterTable:
    """Shapovalov ranks of the classical Verma module of the contragredient superalgebra.

    Works over Q on all free f-words: e_i f_j X = (-1)^{|i||j|} f_j e_i X + delta_ij L'(h_i) X.
    Serre-type elements lie in the radical, so the ranks are those of V(L).
    """
    if not isinstance(lam, WeightFunctional):
        lam = WeightFunctional.of(lam)
    s = datum.s
    memo: dict = {}

    def raise_free(i: int, word: Word) -> dict:
        key = (i, word)
        if key in memo:
            return memo[key]
        out: dict = {}
        if word:
            j, rest = word[0], word[1:]
            sign = -1 if (datum.is_odd(i) and datum.is_odd(j)) else 1
            for w, c in raise_free(i, rest).items():
                out[(j,) + w] = out.get((j,) + w, 0) + sign * c
            if i == j:
                val = weight_values(datum, lam, word_weight(rest, s))[i]
                out[rest] = out.get(rest, 0) + val
            out = {w: c for w, c in out.items() if c != 0}
        memo[key] = out
        return out

    def shap(a: Word, b: Word) -> Fraction:
        vec = {b: Fraction(1)}
        for letter in a:
            new: dict = {}
            for w, c in vec.items():
                for w2, c2 in raise_free(letter, w).items():
                    new[w2] = new.get(w2, 0) + c * c2
            vec = {w: c for w, c in new.items() if c != 0}
            if not vec:
                return Fraction(0)
        return vec.get((), Fraction(0))

    by_weight = {}
    by_depth = {n: 0 for n in range(degree_cut + 1)}
    for n in range(degree_cut + 1):
        for mu in weights_of_degree(s, n):
            words = words_of_weight(mu)
            S = [[shap(a, b) for b in words] for a in words]
            r = linalg.rank(S)
            if r:
                by_weight[mu] = r
                by_depth[n] += r
    return CharacterTable(by_depth, by_weight)


def depth_one_drops(datum: CartanDatum, lam) -> list:
    """0-based i with f_i v_L null in the classical Verma module (L(h_i) = 0)."""
    table = classical_character(datum, lam, 1)
    return [i for i in range(datum.s) if table.by_weight.get(RootWeight.simple(datum.s, i), 0) == 0]


def is_atypical_at_depth_one(datum: CartanDatum, lam) -> bool:
    """True when some odd isotropic f_i v_L is null: an odd rank drop at depth 1."""
    return any(datum.is_odd(i) and datum.A[i][i] == 0 for i in depth_one_drops(datum, lam))


def classical_limit(module: Module) -> dict:
    """E_i, F_i matrices of a module with all scalars sent to q = 1."""
    return {"E": [op.map(evaluate_at_one) for op in module.E],
            "F": [op.map(evaluate_at_one) for op in module.F]}


# ---------------------------------------------------------------------------
# first-order co-commutator of the coproduct


def cocommutator_linear(datum: CartanDatum, i: int) -> dict:
    """Order-h coefficient of (Delta - Delta^op)(E_i) in classical symbols.

    Each K^k = q^(sum k_j d_j h_j) expands as 1 + (h/2) sum_j k_j d_j h_j + O(h^2)
    and scalar coefficients are expanded with q = e^(h/2).  Returns
    {(left symbol, right symbol): Fraction} with symbols ("e", j), ("h", j) or "1".
    """
    from .free_algebra import AlgebraElement, coproduct
    from .scalars import h_expand

    D = coproduct(AlgebraElement.generator(datum, i))
    diff: dict = {}
    for key, c in D.terms.items():
        _acc(diff, key, c)
    for ((w1, k1), (w2, k2)), c in D.terms.items():
        sign = -1 if word_parity(datum, w1) and word_parity(datum, w2) else 1
        _acc(diff, ((w2, k2), (w1, k1)), -c * sign)

    def leg_terms(word, kvec):
        base = ("e", word[0]) if word else "1"
        if len(word) > 1:
            raise ValueError("only generator coproducts are expanded")
        out = [(0, base, Fraction(1))]
        if not word:
            for j, k in enumerate(kvec):
                if k:
                    out.append((1, ("h", j), Fraction(k) * datum.d[j] / 2))
        elif any(kvec):
            raise ValueError("decorated generator legs do not occur in Delta(E_i)")
        return out

    result: dict = {}
    for ((w1, k1), (w2, k2)), c in diff.items():
        ser = h_expand(c, 1)
        for o1, s1, c1 in leg_terms(w1, k1):
            for o2, s2, c2 in leg_terms(w2, k2):
                for oc in range(2):
                    if o1 + o2 + oc == 1:
                        v = ser[oc] * c1 * c2
                        if v:
                            result[(s1, s2)] = result.get((s1, s2), 0) + v
                    if o1 + o2 + oc == 0 and ser[0] * c1 * c2 != 0:
                        result.setdefault(("order0", "order0"), 0)
                        result[("order0", "order0")] += ser[0] * c1 * c2
    return {k: v for k, v in result.items() if v != 0}
