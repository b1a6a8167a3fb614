"""Taylor reconstruction, dual Taylor series and quasi-basis convergence scans."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import mpmath

from .distrib import DEFAULT_MAX_ORDER, WeakDistribution, add, scale
from .families import phi, psi
from .pairing import (DEFAULT_DPS, CapabilityMissing, TestFunction, pair_dist_fn,
                      pair_fn_dist, quad_inner)
from .scalar import ExactScalar, coerce, is_zero, to_mpc

DEFAULT_N_MAX = 512
DIVERGENCE_WINDOW = 16
ORDERINGS = ("phi_psi", "psi_phi")
ACCELERATIONS = ("none", "euler")


class InfiniteMoments(ValueError):
    """A moment sequence without finite support has no dual Taylor distribution."""


def mpstr(v, digits: int = 20) -> str:
    return mpmath.nstr(v, digits)


def complex_json(v, digits: int = 20) -> dict:
    v = to_mpc(v)
    return {"re": mpstr(v.real, digits), "im": mpstr(v.imag, digits)}


# --- Taylor reconstruction ----------------------------------------------------

@dataclass(frozen=True)
class TaylorReconstruction:
    poly: WeakDistribution
    coefficients: tuple          # coefficient of x^n, n = 0..N
    sup_error: Optional[object]  # max |f - P| on the interval, if f can be evaluated
    interval: tuple

    def __call__(self, x):
        return mpmath.polyval([to_mpc(c) for c in reversed(self.coefficients)], x)


def taylor_reconstruct(f: TestFunction, N: int, interval=(-1, 1), grid: int = 2001,
                       dps: int = DEFAULT_DPS) -> TaylorReconstruction:
    """``sum_{n<=N} <psi_n, f> phi_n``, assembled through the pairing."""
    if not f.has_taylor:
        raise CapabilityMissing("taylor", "Taylor reconstruction", f.label)
    with mpmath.workdps(dps):
        poly = WeakDistribution.zero(max(N, DEFAULT_MAX_ORDER))
        for n in range(N + 1):
            poly = add(poly, scale(pair_dist_fn(psi(n), f).value, phi(n)))
        coeffs = tuple(poly.poly.get(n, ExactScalar(0)) for n in range(N + 1))
        rec = TaylorReconstruction(poly, coeffs, None, tuple(interval))
        if not f.has_eval:
            return rec
        lo, hi = (mpmath.mpf(str(v)) for v in interval)
        xs = mpmath.linspace(lo, hi, grid)
        err = max(abs(f.eval(x) - rec(x)) for x in xs)
    return TaylorReconstruction(poly, coeffs, err, tuple(interval))


# --- dual Taylor series ------------------------------------------------------------

@dataclass(frozen=True)
class MomentSequence:
    values: Mapping[int, object]
    support_bound: Optional[int] = None

    def __post_init__(self):
        vals = {int(n): coerce(v) for n, v in dict(self.values).items()}
        if self.support_bound is not None:
            bad = [n for n, v in vals.items() if n > self.support_bound and not is_zero(v)]
            if bad:
                raise ValueError(f"moments beyond support bound {self.support_bound}: {bad}")
        object.__setattr__(self, "values", vals)

    def __call__(self, n: int):
        return self.values.get(n, ExactScalar(0))

    @classmethod
    def finite(cls, values: Sequence) -> "MomentSequence":
        """Moments ``values[0], values[1], ...`` and zero afterwards."""
        return cls(dict(enumerate(values)), support_bound=max(len(values) - 1, 0))

    @classmethod
    def from_test_function(cls, f: TestFunction, n_max: int) -> "MomentSequence":
        """A prefix of the moments of ``f``; the tail is unknown, so no bound is set."""
        return cls({n: f.moment(n) for n in range(n_max + 1)})


def dual_taylor(mu: MomentSequence) -> WeakDistribution:
    """``sum_n (-1)^n mu(n)/n! delta^(n)``; defined only for finitely many moments."""
    if mu.support_bound is None:
        raise InfiniteMoments("moment sequence has no finite support bound; "
                              "the dual Taylor series is not a distribution")
    L = mu.support_bound
    out = WeakDistribution.zero(max(L, DEFAULT_MAX_ORDER))
    fact = 1
    for n in range(L + 1):
        if n:
            fact *= n
        out = add(out, WeakDistribution.delta_derivative(
            n, mu(n) * ExactScalar(Fraction((-1) ** n, fact)), out.max_order))
    return out


# --- quasi-basis scan ---------------------------------------------------------------

@dataclass
class ConvergenceReport:
    ordering: str
    acceleration: str
    terms: list
    partial_sums: list
    reference: Optional[object]
    reference_note: str
    residuals: list
    verdict: str
    tol: float
    n_star: Optional[int] = None
    stopped_at: Optional[int] = None
    labels: tuple = field(default_factory=tuple)

    @property
    def value(self):
        return self.partial_sums[-1] if self.partial_sums else None

    def to_json_obj(self, digits: int = 20) -> dict:
        return {
            "f": self.labels[0] if self.labels else None,
            "g": self.labels[1] if len(self.labels) > 1 else None,
            "ordering": self.ordering,
            "acceleration": self.acceleration,
            "verdict": self.verdict,
            "tol": self.tol,
            "n_star": self.n_star,
            "stopped_at": self.stopped_at,
            "value": complex_json(self.value, digits) if self.partial_sums else None,
            "reference": complex_json(self.reference, digits) if self.reference is not None else None,
            "reference_note": self.reference_note,
            "final_residual": mpstr(self.residuals[-1], 6) if self.residuals else None,
        }

    def to_csv(self, digits: int = 20) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "S_N_re", "S_N_im", "residual"])
        for n, s in enumerate(self.partial_sums):
            s = to_mpc(s)
            r = mpstr(self.residuals[n], 6) if self.residuals else ""
            w.writerow([n, mpstr(s.real, digits), mpstr(s.imag, digits), r])
        return buf.getvalue()


def quasi_basis_terms(f: TestFunction, g: TestFunction, ordering: str, N_max: int,
                      dps: int = DEFAULT_DPS) -> list:
    """``<f, phi_n><psi_n, g>`` (phi_psi) or ``<f, psi_n><phi_n, g>`` (psi_phi)."""
    if ordering == "phi_psi":
        if not f.has_moments:
            raise CapabilityMissing("moments", "<f, phi_n>", f.label)
        if not g.has_taylor:
            raise CapabilityMissing("taylor", "<psi_n, g>", g.label)
        left, right = phi, psi
    elif ordering == "psi_phi":
        if not f.has_taylor:
            raise CapabilityMissing("taylor", "<f, psi_n>", f.label)
        if not g.has_moments:
            raise CapabilityMissing("moments", "<phi_n, g>", g.label)
        left, right = psi, phi
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    with mpmath.workdps(dps):
        return [to_mpc(pair_fn_dist(f, left(n)).value * pair_dist_fn(right(n), g).value)
                for n in range(N_max + 1)]


def _rising_run(mags: list, window: int) -> Optional[int]:
    """Index at which ``window`` consecutive strictly increasing magnitudes end."""
    run = 0
    for i in range(1, len(mags)):
        run = run + 1 if mags[i] > mags[i - 1] else 0
        if run >= window:
            return i
    return None


class _EulerAccumulator:
    """Running Euler transform of ``sum_k u_k`` with ``a_k = (-1)^k u_k``.

    Keeps the last diagonal of the forward-difference table, so each new term
    costs O(k).  Returns the increment ``(-1)^k Delta^k a_0 / 2^(k+1)``.
    """

    def __init__(self):
        self.diag: list = []

    def push(self, u):
        k = len(self.diag)
        a = u if k % 2 == 0 else -u
        new = [a]
        for i in range(1, k + 1):
            new.append(new[i - 1] - self.diag[i - 1])
        self.diag = new
        sign = 1 if k % 2 == 0 else -1
        return sign * new[k] / mpmath.mpf(2) ** (k + 1)


def quasi_basis_scan(f: TestFunction, g: TestFunction, ordering: str = "phi_psi",
                     N_max: int = DEFAULT_N_MAX, accel: str = "none", tol: float = 1e-10,
                     dps: int = DEFAULT_DPS, reference=None,
                     window: int = DIVERGENCE_WINDOW) -> ConvergenceReport:
    """Partial sums of the quasi-basis expansion of ``<f, g>`` against a quadrature reference.

    With ``accel="euler"`` the nonzero terms are Euler-transformed; divergence
    is judged on whatever increments are actually being summed.
    """
    if accel not in ACCELERATIONS:
        raise ValueError(f"unknown acceleration {accel!r}")
    with mpmath.workdps(dps):
        terms = quasi_basis_terms(f, g, ordering, N_max, dps)
        if reference is None and f.has_eval and g.has_eval:
            reference = quad_inner(f, g, dps=dps)
            note = "adaptive tanh-sinh quadrature of conj(f)*g over the real line"
        elif reference is None:
            note = "no reference: a test function cannot be evaluated pointwise"
        else:
            reference = mpmath.mpc(reference)
            note = "supplied by caller"

        euler = _EulerAccumulator() if accel == "euler" else None
        partial, increments = [], []
        s = mpmath.mpc(0)
        stopped = None
        scale_ = mpmath.mpf(1)
        noise = mpmath.mpf(10) ** (4 - dps)
        for n, t in enumerate(terms):
            if t != 0:
                inc = euler.push(t) if euler else t
                s += inc
                scale_ = max(scale_, abs(s))
                # increments at the rounding floor carry no growth information
                increments.append(abs(inc) if abs(inc) > noise * scale_ else 0)
            partial.append(+s)
            if _rising_run(increments[-(window + 1):], window) is not None:
                stopped = n
                break

        residuals = [abs(p - reference) for p in partial] if reference is not None else []
        n_star = None
        if stopped is not None:
            verdict = "diverging"
        else:
            for n in range(len(residuals) - 1, -1, -1):
                if residuals[n] < tol:
                    n_star = n
                else:
                    break
            verdict = "converged" if n_star is not None else "inconclusive"

    return ConvergenceReport(ordering, accel, terms[:len(partial)], partial, reference, note,
                             residuals, verdict, tol, n_star, stopped, (f.label, g.label))
