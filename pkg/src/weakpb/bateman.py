"""Two-mode truncated Fock realization of the quantized Bateman oscillator.

States are ``|n1, n2>`` with ``n1 + n2 <= T``.  Products of truncated
operators are only trusted on the *safe subspace*: inputs with total quanta
at most ``T - d`` for an operator word of total degree ``d``.

Units: hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np
import sympy


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class BatemanParams:
    m: float
    gamma: float
    k: float

    def __post_init__(self):
        for name in ("m", "k"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        # gamma = 0 is the decoupled limit, kept as a sanity case
        if not self.gamma >= 0:
            raise ParameterError("gamma must be non-negative")
        if self.omega2 <= 0:
            # omega^2 < 0 and omega^2 = 0 need different techniques; not handled here
            raise ParameterError(
                f"omega^2 = k/m - gamma^2/(4 m^2) = {self.omega2} is not strictly positive")

    @property
    def omega2(self) -> float:
        return self.k / self.m - self.gamma ** 2 / (4 * self.m ** 2)

    @property
    def omega(self) -> float:
        return math.sqrt(self.omega2)

    def as_dict(self) -> dict:
        return {"m": self.m, "gamma": self.gamma, "k": self.k, "omega": self.omega}


@lru_cache(maxsize=64)
def fock_basis(T: int) -> tuple[tuple[int, int], ...]:
    """States ordered by total quanta, then by descending ``n1``."""
    return tuple((n1, t - n1) for t in range(T + 1) for n1 in range(t, -1, -1))


def fock_index(T: int) -> dict[tuple[int, int], int]:
    return {s: i for i, s in enumerate(fock_basis(T))}


def totals(T: int) -> np.ndarray:
    return np.array([n1 + n2 for n1, n2 in fock_basis(T)])


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: np.ndarray
    degree: int
    T: int

    def __post_init__(self):
        d = math.comb(self.T + 2, 2)
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match T={self.T}")

    def _check(self, other: "FockOperator"):
        if other.T != self.T:
            raise ValueError("operators live on different truncations")

    def __add__(self, other):
        self._check(other)
        return FockOperator(self.matrix + other.matrix, max(self.degree, other.degree), self.T)

    def __sub__(self, other):
        self._check(other)
        return FockOperator(self.matrix - other.matrix, max(self.degree, other.degree), self.T)

    def __neg__(self):
        return FockOperator(-self.matrix, self.degree, self.T)

    def __matmul__(self, other):
        self._check(other)
        return FockOperator(self.matrix @ other.matrix, self.degree + other.degree, self.T)

    def __mul__(self, c):
        return FockOperator(c * self.matrix, self.degree, self.T)

    __rmul__ = __mul__

    @property
    def dag(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T, self.degree, self.T)

    @classmethod
    def identity(cls, T: int) -> "FockOperator":
        return cls(np.eye(math.comb(T + 2, 2), dtype=complex), 0, T)

    def band_ok(self) -> bool:
        """Entries vanish between states whose totals differ by more than ``degree``."""
        t = totals(self.T)
        far = np.abs(t[:, None] - t[None, :]) > self.degree
        return not np.any(self.matrix[far] != 0)

    def on_safe(self, t_max: int | None = None) -> np.ndarray:
        """Columns acting on states with total quanta <= ``t_max`` (default ``T - degree``)."""
        if t_max is None:
            t_max = self.T - self.degree
        return self.matrix[:, totals(self.T) <= t_max]


@dataclass(frozen=True)
class SafeSubspace:
    T: int
    degree: int

    @property
    def t_max(self) -> int:
        return self.T - self.degree

    def mask(self) -> np.ndarray:
        return totals(self.T) <= self.t_max

    def residual(self, op: FockOperator) -> float:
        """Max-abs entry of ``op`` restricted to safe input states."""
        cols = op.matrix[:, self.mask()]
        return float(np.max(np.abs(cols))) if cols.size else 0.0


def build_bosonic(T: int) -> tuple[FockOperator, FockOperator]:
    """Annihilation operators ``a1``, ``a2``."""
    if T < 2:
        raise ValueError("truncation T must be at least 2")
    idx = fock_index(T)
    d = len(idx)
    a1 = np.zeros((d, d), dtype=complex)
    a2 = np.zeros((d, d), dtype=complex)
    for (n1, n2), i in idx.items():
        if n1:
            a1[idx[(n1 - 1, n2)], i] = math.sqrt(n1)
        if n2:
            a2[idx[(n1, n2 - 1)], i] = math.sqrt(n2)
    return FockOperator(a1, 1, T), FockOperator(a2, 1, T)


def build_pb(params: BatemanParams, T: int):
    """Pseudo-bosonic combinations ``A1, A2, B1, B2``.

    ``params`` is accepted for interface symmetry; the combinations are
    parameter independent.
    """
    if T < 3:
        raise ValueError("truncation T must be at least 3")
    a1, a2 = build_bosonic(T)
    r = 1 / math.sqrt(2)
    A1 = r * (a1 - a2.dag)
    A2 = r * (a2 - a1.dag)
    B1 = r * (a1.dag + a2)
    B2 = r * (a1 + a2.dag)
    return A1, A2, B1, B2


def hamiltonian_bosonic(params: BatemanParams, T: int) -> FockOperator:
    """``w (a1† a1 - a2† a2) + (i gamma / 2m)(a1 a2 - a1† a2†)``."""
    if T < 4:
        raise ValueError("truncation T must be at least 4")
    a1, a2 = build_bosonic(T)
    w, c = params.omega, 1j * params.gamma / (2 * params.m)
    return w * (a1.dag @ a1 - a2.dag @ a2) + c * (a1 @ a2 - a1.dag @ a2.dag)


def hamiltonian_pb(params: BatemanParams, T: int) -> FockOperator:
    """``w (B1 A1 - B2 A2) + (i gamma / 2m)(B1 A1 + B2 A2 + 1)``."""
    if T < 4:
        raise ValueError("truncation T must be at least 4")
    A1, A2, B1, B2 = build_pb(params, T)
    w, c = params.omega, 1j * params.gamma / (2 * params.m)
    one = FockOperator.identity(T)
    return w * (B1 @ A1 - B2 @ A2) + c * (B1 @ A1 + B2 @ A2 + one)


def commutator(X: FockOperator, Y: FockOperator) -> FockOperator:
    return X @ Y - Y @ X


def ccr_residuals(T: int) -> dict[str, float]:
    """``[a_j, a_k†] - delta_jk`` and ``[a_j, a_k]`` on SafeSubspace(T-2)."""
    a = build_bosonic(T)
    one = FockOperator.identity(T)
    safe = SafeSubspace(T, 2)
    out = {}
    for j in range(2):
        for k in range(2):
            expected = one if j == k else 0 * one
            out[f"[a{j+1},a{k+1}†]"] = safe.residual(commutator(a[j], a[k].dag) - expected)
            out[f"[a{j+1},a{k+1}]"] = safe.residual(commutator(a[j], a[k]))
    return out


def pb_residuals(params: BatemanParams, T: int) -> dict[str, float]:
    """``[A_j, B_k] - delta_jk`` plus the vanishing mixed commutators."""
    A1, A2, B1, B2 = build_pb(params, T)
    A, B = (A1, A2), (B1, B2)
    one = FockOperator.identity(T)
    safe = SafeSubspace(T, 2)
    out = {}
    for j in range(2):
        for k in range(2):
            expected = one if j == k else 0 * one
            out[f"[A{j+1},B{k+1}]"] = safe.residual(commutator(A[j], B[k]) - expected)
    out["[A1,A2]"] = safe.residual(commutator(A1, A2))
    out["[B1,B2]"] = safe.residual(commutator(B1, B2))
    return out


def hamiltonian_residual(params: BatemanParams, T: int) -> float:
    """Max-abs difference of the two Hamiltonian forms on SafeSubspace(T-2)."""
    diff = hamiltonian_bosonic(params, T) - hamiltonian_pb(params, T)
    return SafeSubspace(T, 2).residual(diff)


def non_normality(params: BatemanParams, T: int) -> float:
    """Frobenius norm of ``H H† - H† H`` restricted to SafeSubspace(T-4)."""
    H = hamiltonian_bosonic(params, T)
    C = H @ H.dag - H.dag @ H
    return float(np.linalg.norm(C.on_safe(T - 4)))


def not_adjoint_gap(params: BatemanParams, T: int) -> dict[str, float]:
    """Max-abs entries of ``B_j - A_j†``."""
    A1, A2, B1, B2 = build_pb(params, T)
    return {"B1-A1†": float(np.max(np.abs((B1 - A1.dag).matrix))),
            "B2-A2†": float(np.max(np.abs((B2 - A2.dag).matrix)))}


def diagonal_sum_state(T: int, N: int, normalized: bool = False) -> np.ndarray:
    """``sum_{n<=N} |n, n>`` (needs ``2N + 1 <= T`` for ``A1`` to act exactly)."""
    idx = fock_index(T)
    v = np.zeros(len(idx), dtype=complex)
    for n in range(N + 1):
        v[idx[(n, n)]] = 1
    return v / math.sqrt(N + 1) if normalized else v


def sigma_min(ops: Sequence[FockOperator], t_max: int) -> float:
    """Smallest singular value of the stacked operators on states with total <= t_max."""
    stacked = np.vstack([op.on_safe(t_max) for op in ops])
    return float(np.linalg.svd(stacked, compute_uv=False).min())


def joint_kernel_scan(params: BatemanParams, T_list: Iterable[int]) -> list[dict]:
    """For each T: sigma_min of ``(A1, A2)``, of ``(B1†, B2†)`` and of ``A1`` alone,
    all on SafeSubspace(T-1)."""
    rows = []
    for T in T_list:
        if T < 4:
            raise ValueError("truncation T must be at least 4")
        A1, A2, B1, B2 = build_pb(params, T)
        rows.append({
            "T": T,
            "sigma_min_A": sigma_min((A1, A2), T - 1),
            "sigma_min_Bdag": sigma_min((B1.dag, B2.dag), T - 1),
            "sigma_min_A1_only": sigma_min((A1,), T - 1),
        })
    return rows


# --- distributional vacua in position representation -------------------------

X1, X2, X = sympy.symbols("x1 x2 x", real=True)

# twelve polynomial prefactors, degree <= 8, for p(x1, x2) exp(-(x1^2 + x2^2)/2)
VACUUM_BATTERY = (
    "1", "x1", "x2", "x1**2", "x1*x2", "x1**2*x2", "x1*x2**3", "(x1 - x2)**2",
    "x1**4 - 3*x2**2", "x1*x2**5", "x1**4*x2**4", "1 + x1**3 - 2*x2**2 + x1*x2**6",
)


def _ladder_parts(params: BatemanParams):
    # a_k = c x_k + d d/dx_k with p_k = -i d/dx_k
    w = sympy.sqrt(sympy.nsimplify(params.m) * sympy.Float(params.omega, 40))
    return w / sympy.sqrt(2), 1 / (sympy.sqrt(2) * w)


def _position_ops(params: BatemanParams):
    c, d = _ladder_parts(params)
    xs = (X1, X2)

    def a(k):
        return lambda f: c * xs[k] * f + d * sympy.diff(f, xs[k])

    def adag(k):
        return lambda f: c * xs[k] * f - d * sympy.diff(f, xs[k])

    r = 1 / sympy.sqrt(2)
    # adjoints of A_j and the operators B_j (adjoints of B_j†)
    A_dag = (lambda f: r * (adag(0)(f) - a(1)(f)),      # A1† = (a1† - a2)/√2
             lambda f: r * (adag(1)(f) - a(0)(f)))      # A2† = (a2† - a1)/√2
    B = (lambda f: r * (adag(0)(f) + a(1)(f)),          # B1 = (a1† + a2)/√2
         lambda f: r * (a(0)(f) + adag(1)(f)))          # B2 = (a1 + a2†)/√2
    return A_dag, B


def weak_vacuum_residual(params: BatemanParams, which: str, p: str | sympy.Expr,
                         offset=0, dps: int = 30) -> dict[int, complex]:
    """Pairing of the lowering operators applied to a candidate vacuum with a test function.

    ``which="phi00"``: candidate ``delta(x1 - x2 - offset)``; returns
    ``<A_j delta, f> = int (A_j† f)(x + offset, x) dx`` for j = 1, 2.
    ``which="psi00"``: candidate ``delta(x1 + x2 - offset)``; returns
    ``<B_j† delta, f> = int (B_j f)(x, offset - x) dx``.
    The test function is ``f = p(x1, x2) exp(-(x1^2 + x2^2)/2)``.
    """
    if isinstance(p, str):
        p = sympy.sympify(p, locals={"x1": X1, "x2": X2})
    poly = sympy.Poly(p, X1, X2)
    if poly.total_degree() > 8:
        raise ValueError("test-function polynomial degree must be at most 8")
    f = p * sympy.exp(-(X1 ** 2 + X2 ** 2) / 2)
    A_dag, B = _position_ops(params)
    eps = sympy.nsimplify(offset)
    if which == "phi00":
        ops, sub = A_dag, {X1: X + eps, X2: X}
    elif which == "psi00":
        ops, sub = B, {X1: X, X2: eps - X}
    else:
        raise ValueError(f"unknown vacuum {which!r}")
    out = {}
    with mpmath.workdps(dps):
        for j, op in enumerate(ops, start=1):
            line = sympy.expand(op(f).subs(sub, simultaneous=True))
            fn = sympy.lambdify(X, line, modules="mpmath")
            out[j] = complex(mpmath.quad(fn, [mpmath.ninf, 0, mpmath.inf]))
    return out


def vacuum_battery(params: BatemanParams, which: str, offset=0,
                   battery: Sequence[str] = VACUUM_BATTERY) -> list[dict]:
    rows = []
    for p in battery:
        res = weak_vacuum_residual(params, which, p, offset)
        rows.append({"p": p, "residual_1": abs(res[1]), "residual_2": abs(res[2])})
    return rows


def params_from(m, gamma, k) -> BatemanParams:
    """Build parameters from numbers or rational strings like ``"1/2"``."""
    return BatemanParams(*(float(Fraction(str(v))) for v in (m, gamma, k)))
