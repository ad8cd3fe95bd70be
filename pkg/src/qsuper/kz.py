"""Casimir action, KZ parallel transport and the Drinfeld-Kohno trace comparison.

Transport along z(t) solves dT/dt = h A(t) T with

    A(t) = 1/(2 pi i) sum_{j<k} Omega_jk (z_j' - z_k') / (z_j - z_k),

so T = sum_k h^k T_k with T_0 = 1 and T_k' = A T_{k-1}; all orders are
integrated together as one linear system.  The generator sigma_i rotates
z_i, z_{i+1} counterclockwise by a half-turn about their midpoint, starting
from the base point (1, 2, ..., n); its operator is the super flip on slots
(i, i+1) composed after the transport.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .braiding import BraidRepresentation, parse_braid_word, r_matrix, super_flip
from .cartan import CartanDatum
from .errors import PathCollision, ToleranceNotMet
from .scalars import HSeries, h_expand
from .verma import Module


@dataclass
class CasimirAction:
    matrix: list  # exact Fractions on V (x) W
    parity_v: list
    parity_w: list

    def numeric(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix], dtype=complex)

    def eigenvalues(self) -> list:
        return sorted(np.linalg.eigvals(self.numeric()).real.round(12).tolist())


def casimir_action(datum: CartanDatum, V: Module, W: Module) -> CasimirAction:
    """h-linear coefficient of R^op R with R^op = tau R_WV tau."""
    R = r_matrix(datum, V, W)
    Rwv = r_matrix(datum, W, V) if W is not V else R
    t_vw = super_flip(V.parity, W.parity)
    t_wv = super_flip(W.parity, V.parity)
    rr = t_wv @ Rwv @ t_vw @ R
    n = V.dim * W.dim
    mat = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in rr.items():
        ser = h_expand(v, 1)
        expect0 = 1 if i == j else 0
        if ser[0] != expect0:
            raise ArithmeticError("R^op R is not 1 at h = 0")
        mat[i][j] = Fraction(ser[1])
    return CasimirAction(mat, list(V.parity), list(W.parity))


# ---------------------------------------------------------------------------
# numeric tensor-slot operators


def _dense_flip(pv: list, pw: list) -> np.ndarray:
    dv, dw = len(pv), len(pw)
    out = np.zeros((dv * dw, dv * dw))
    for a in range(dv):
        for b in range(dw):
            out[b * dv + a, a * dw + b] = -1.0 if pv[a] and pw[b] else 1.0
    return out


def adjacent_flip(parity: list, n: int, i: int) -> np.ndarray:
    """Super flip of slots i, i+1 (1-based) on V^(x)n as a dense array."""
    d = len(parity)
    return np.kron(np.kron(np.eye(d ** (i - 1)), _dense_flip(parity, parity)), np.eye(d ** (n - i - 1)))


def slot_casimirs(omega: CasimirAction, n: int) -> dict:
    """{(j, k): Omega_jk} for 1 <= j < k <= n on V^(x)n."""
    p = omega.parity_v
    d = len(p)
    base = omega.numeric()
    out = {}
    for j in range(1, n):
        adj = np.kron(np.kron(np.eye(d ** (j - 1)), base), np.eye(d ** (n - j - 1)))
        out[(j, j + 1)] = adj
        # move slot k next to j by flips k-1 <-> k, ..., j+1 <-> j+2
        for k in range(j + 2, n + 1):
            S = np.eye(d ** n)
            for m in range(k - 1, j, -1):
                S = adjacent_flip(p, n, m) @ S
            # S maps slot k to slot j+1; super flips are involutions up to order reversal
            out[(j, k)] = np.linalg.inv(S) @ adj @ S
    return out


@dataclass
class Path:
    """Points z(t) for t in [0, 1] and their velocities."""

    z: callable
    zdot: callable
    name: str = ""


def generator_path(n: int, i: int, inverse: bool = False) -> Path:
    c = i + 0.5
    sgn = -1.0 if inverse else 1.0

    def z(t):
        pts = np.arange(1, n + 1, dtype=complex)
        e = np.exp(1j * math.pi * sgn * t)
        pts[i - 1] = c - 0.5 * e
        pts[i] = c + 0.5 * e
        return pts

    def zdot(t):
        v = np.zeros(n, dtype=complex)
        e = 1j * math.pi * sgn * np.exp(1j * math.pi * sgn * t)
        v[i - 1] = -0.5 * e
        v[i] = 0.5 * e
        return v

    return Path(z, zdot, f"s{i}" + ("^-1" if inverse else ""))


def loop_path(n: int = 2) -> Path:
    """z_2 runs once counterclockwise around z_1 on the unit circle."""

    def z(t):
        pts = np.arange(1, n + 1, dtype=complex)
        pts[1] = 1 + np.exp(2j * math.pi * t)
        return pts

    def zdot(t):
        v = np.zeros(n, dtype=complex)
        v[1] = 2j * math.pi * np.exp(2j * math.pi * t)
        return v

    return Path(z, zdot, "loop")


@dataclass
class MonodromySeries:
    n: int
    order: int
    tol: float
    coeffs: np.ndarray  # shape (order+1, D, D)
    error_estimate: float = 0.0

    def __matmul__(self, other: "MonodromySeries") -> "MonodromySeries":
        N = self.order
        D = self.coeffs.shape[1]
        out = np.zeros((N + 1, D, D), dtype=complex)
        for a in range(N + 1):
            for b in range(N + 1 - a):
                out[a + b] += self.coeffs[a] @ other.coeffs[b]
        return MonodromySeries(self.n, N, self.tol, out, self.error_estimate + other.error_estimate)

    def left_constant(self, M: np.ndarray) -> "MonodromySeries":
        return MonodromySeries(self.n, self.order, self.tol,
                               np.einsum("ij,kjl->kil", M, self.coeffs), self.error_estimate)

    @classmethod
    def identity(cls, n: int, D: int, order: int, tol: float) -> "MonodromySeries":
        c = np.zeros((order + 1, D, D), dtype=complex)
        c[0] = np.eye(D)
        return cls(n, order, tol, c)

    def trace(self) -> np.ndarray:
        return np.array([np.trace(c) for c in self.coeffs])


def _integrate(omegas: dict, path: Path, D: int, order: int, rtol: float, atol: float) -> np.ndarray:
    pairs = list(omegas)

    def A(t):
        z, zd = path.z(t), path.zdot(t)
        out = np.zeros((D, D), dtype=complex)
        for (j, k) in pairs:
            diff = z[j - 1] - z[k - 1]
            if abs(diff) < 1e-12:
                raise PathCollision(f"points {j} and {k} collide at t={t}")
            out += omegas[(j, k)] * ((zd[j - 1] - zd[k - 1]) / diff)
        return out / (2j * math.pi)

    def rhs(t, y):
        T = y.reshape(order, D, D)
        a = A(t)
        out = np.empty_like(T)
        out[0] = a
        for k in range(1, order):
            out[k] = a @ T[k - 1]
        return out.ravel()

    y0 = np.zeros(order * D * D, dtype=complex)
    sol = solve_ivp(rhs, (0.0, 1.0), y0, method="RK45", rtol=rtol, atol=atol)
    if not sol.success:
        raise ToleranceNotMet(sol.message)
    coeffs = np.zeros((order + 1, D, D), dtype=complex)
    coeffs[0] = np.eye(D)
    coeffs[1:] = sol.y[:, -1].reshape(order, D, D)
    return coeffs


def transport(omegas: dict, path: Path, n: int, D: int, order: int, tol: float) -> MonodromySeries:
    """Parallel transport along a path with an a-posteriori error estimate."""
    coarse = _integrate(omegas, path, D, order, rtol=tol * 1e-3, atol=tol * 1e-4)
    fine = _integrate(omegas, path, D, order, rtol=tol * 1e-5, atol=tol * 1e-6)
    err = float(np.max(np.abs(coarse - fine)))
    if err > tol:
        raise ToleranceNotMet(f"transport along {path.name} changed by {err:.2e} > {tol:.1e}")
    return MonodromySeries(n, order, tol, fine, err)


class KZSystem:
    """KZ monodromy on V^(x)n with cached generator transports."""

    def __init__(self, datum: CartanDatum, V: Module, n: int, order: int = 4, tol: float = 1e-8,
                 omega: CasimirAction | None = None):
        self.datum, self.V, self.n, self.order, self.tol = datum, V, n, order, tol
        self.omega = omega if omega is not None else casimir_action(datum, V, V)
        self.D = V.dim ** n
        self.omegas = slot_casimirs(self.omega, n)
        self._gens: dict = {}

    def generator(self, i: int, e: int = 1) -> MonodromySeries:
        key = (i, e)
        if key not in self._gens:
            T = transport(self.omegas, generator_path(self.n, i, inverse=e < 0), self.n, self.D,
                          self.order, self.tol)
            self._gens[key] = T.left_constant(adjacent_flip(self.V.parity, self.n, i))
        return self._gens[key]

    def word(self, word) -> MonodromySeries:
        if isinstance(word, str):
            word = parse_braid_word(word)
        out = MonodromySeries.identity(self.n, self.D, self.order, self.tol)
        for i, e in word:
            if not 1 <= i < self.n:
                raise ValueError(f"generator s{i} outside 1..{self.n - 1}")
            out = out @ self.generator(i, e)
        return out


def kz_transport(datum: CartanDatum, V: Module, n: int, word, N: int = 4, tol: float = 1e-8,
                 system: KZSystem | None = None) -> MonodromySeries:
    system = system or KZSystem(datum, V, n, N, tol)
    return system.word(word)


def exact_trace_series(rep: BraidRepresentation, word, N: int) -> HSeries:
    M = rep.word(word)
    total = None
    for i in range(M.rows):
        v = M.get(i, i)
        if v != 0:
            total = v if total is None else total + v
    if total is None:
        return HSeries.zero(N)
    return h_expand(total, N)


@dataclass
class DKRow:
    word: str
    order: int
    exact: complex
    numeric: complex
    deviation: float


def dk_compare(datum: CartanDatum, V: Module, n: int, words: list, N: int = 4, tol: float = 1e-8,
               rep: BraidRepresentation | None = None, system: KZSystem | None = None) -> list:
    from .braiding import braid_representation

    rep = rep or braid_representation(datum, V, n)
    system = system or KZSystem(datum, V, n, N, tol)
    rows = []
    for w in words:
        ex = exact_trace_series(rep, w, N)
        nu = system.word(w).trace()
        for k in range(N + 1):
            e = complex(float(ex[k]))
            rows.append(DKRow(w if isinstance(w, str) else str(w), k, e, complex(nu[k]),
                              float(abs(e - nu[k]))))
    return rows


def exp_series(omega: np.ndarray, scale: float, N: int) -> np.ndarray:
    """Coefficients of exp(h * scale * Omega) through h^N."""
    D = omega.shape[0]
    out = np.zeros((N + 1, D, D), dtype=complex)
    out[0] = np.eye(D)
    for k in range(1, N + 1):
        out[k] = out[k - 1] @ (scale * omega) / k
    return out


def rkz_consistency(datum: CartanDatum, V: Module, N: int = 4, tol: float = 1e-8) -> dict:
    """n = 2: half-turn transport vs exp(h Omega / 2), full loop vs exp(h Omega)."""
    omega = casimir_action(datum, V, V)
    omegas = slot_casimirs(omega, 2)
    D = V.dim ** 2
    half = transport(omegas, generator_path(2, 1), 2, D, N, tol)
    loop = transport(omegas, loop_path(2), 2, D, N, tol)
    om = omega.numeric()
    return {
        "half_turn": float(np.max(np.abs(half.coeffs - exp_series(om, 0.5, N)))),
        "full_loop": float(np.max(np.abs(loop.coeffs - exp_series(om, 1.0, N)))),
    }
