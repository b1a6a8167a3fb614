"""Convolution pairing between class members and test functions.

``<F, G> = (conj(F) * G~)(0)`` with ``G~(x) = G(-x)``.  On the monomial/delta
basis this reduces to the table

    <x^n, delta^(m)> = (-1)^n n! [n == m]

extended conjugate-linearly in the first slot and linearly in the second.
``<delta^(m), x^n>`` follows from Hermitian symmetry.  Poly-poly and
delta-delta contributions do not exist and raise :class:`UndefinedPairing`.

Test functions are described through what can be computed about them:
Taylor coefficients at 0, moments, and point values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import sympy

from .distrib import WeakDistribution
from .scalar import ZERO, ExactScalar, conj, is_exact, to_mpc

DEFAULT_DPS = 34


class UndefinedPairing(ValueError):
    """The convolution at 0 does not exist for this pair of arguments."""


class CapabilityMissing(LookupError):
    """A test function lacks the data a pairing term needs."""

    def __init__(self, capability: str, term: str, label: str = "?"):
        self.capability = capability
        self.term = term
        super().__init__(f"{label}: term {term} needs capability {capability!r}")


@dataclass(frozen=True)
class PairingValue:
    value: object
    exact: bool

    def to_mpc(self):
        return to_mpc(self.value)

    def __complex__(self):
        return complex(to_mpc(self.value))


def _pval(v) -> PairingValue:
    return PairingValue(v, is_exact(v))


@dataclass(frozen=True)
class TestFunction:
    """A function known through Taylor coefficients, moments and point values.

    Taylor data is only supplied for entire functions; this is the caller's
    promise and is not checked.  ``breakpoints`` lists points where ``eval``
    is not smooth, used to split quadrature intervals.
    """

    __test__ = False  # keep pytest from collecting this class

    label: str
    taylor_fn: Optional[Callable[[int], object]] = None
    moment_fn: Optional[Callable[[int], object]] = None
    eval_fn: Optional[Callable[[object], object]] = None
    breakpoints: tuple = field(default=())

    @property
    def has_taylor(self) -> bool:
        return self.taylor_fn is not None

    @property
    def has_moments(self) -> bool:
        return self.moment_fn is not None

    @property
    def has_eval(self) -> bool:
        return self.eval_fn is not None

    @property
    def caps(self) -> dict[str, bool]:
        return {"has_taylor": self.has_taylor, "has_moments": self.has_moments,
                "has_eval": self.has_eval}

    def taylor(self, n: int):
        if self.taylor_fn is None:
            raise CapabilityMissing("taylor", f"taylor({n})", self.label)
        return self.taylor_fn(n)

    def moment(self, n: int):
        if self.moment_fn is None:
            raise CapabilityMissing("moments", f"moment({n})", self.label)
        return self.moment_fn(n)

    def eval(self, x):
        if self.eval_fn is None:
            raise CapabilityMissing("eval", "eval(x)", self.label)
        return self.eval_fn(x)

    def __str__(self):
        return self.label


# --- providers -------------------------------------------------------------

def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _gaussian_taylor(alpha: Fraction, n: int) -> Fraction:
    if n % 2:
        return Fraction(0)
    k = n // 2
    return (-alpha) ** k / math.factorial(k)


def _gaussian_moment(alpha: Fraction, n: int):
    # int x^(2k) exp(-alpha x^2) dx = Gamma(k + 1/2) / alpha^(k + 1/2)
    if n % 2:
        return Fraction(0)
    k = n // 2
    return mpmath.gamma(k + mpmath.mpf(1) / 2) / _mpf(alpha) ** (k + mpmath.mpf(1) / 2)


def make_gaussian(alpha) -> TestFunction:
    """``exp(-alpha x^2)`` for positive rational ``alpha``."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("gaussian width parameter must be positive")
    return TestFunction(
        label=f"gaussian:alpha={alpha}",
        taylor_fn=lambda n: _gaussian_taylor(alpha, n),
        moment_fn=lambda n: _gaussian_moment(alpha, n),
        eval_fn=lambda x: mpmath.exp(-_mpf(alpha) * x * x),
    )


def make_poly_gaussian(p: Sequence, alpha) -> TestFunction:
    """``p(x) exp(-alpha x^2)`` with ``p`` given by ascending rational coefficients."""
    coeffs = [Fraction(c) for c in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("gaussian width parameter must be positive")

    def taylor(n):
        return sum((c * _gaussian_taylor(alpha, n - j) for j, c in enumerate(coeffs) if j <= n),
                   Fraction(0))

    def moment(n):
        return mpmath.fsum(_mpf(c) * _gaussian_moment(alpha, n + j)
                           for j, c in enumerate(coeffs) if c)

    def value(x):
        return mpmath.polyval([_mpf(c) for c in reversed(coeffs)], x) * mpmath.exp(-_mpf(alpha) * x * x)

    poly_txt = "+".join(f"{c}*x^{j}" for j, c in enumerate(coeffs)) or "0"
    return TestFunction(f"polygauss:{poly_txt},alpha={alpha}", taylor, moment, value)


def make_indicator(a, b) -> TestFunction:
    """Indicator of ``[a, b]``: exact moments and point values, no Taylor data."""
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError(f"invalid interval [{a}, {b}]")

    def value(x):
        return mpmath.mpf(1) if _mpf(a) <= x <= _mpf(b) else mpmath.mpf(0)

    return TestFunction(
        label=f"indicator:{a},{b}",
        moment_fn=lambda n: (b ** (n + 1) - a ** (n + 1)) / (n + 1),
        eval_fn=value,
        breakpoints=(a, b),
    )


def make_exp(c=1) -> TestFunction:
    """``exp(c x)``: entire, so Taylor data exists, but moments diverge."""
    c = Fraction(c)
    return TestFunction(
        label=f"exp:c={c}",
        taylor_fn=lambda n: c ** n / math.factorial(n),
        eval_fn=lambda x: mpmath.exp(_mpf(c) * x),
    )


def make_zero() -> TestFunction:
    return TestFunction("zero", lambda n: Fraction(0), lambda n: Fraction(0),
                        lambda x: mpmath.mpf(0))


_X = sympy.Symbol("x")


def parse_polynomial(text: str) -> list[Fraction]:
    """Ascending rational coefficients of a polynomial in ``x``."""
    expr = sympy.sympify(text.replace("^", "**"), locals={"x": _X})
    poly = sympy.Poly(expr, _X)
    coeffs = [Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
              for c in reversed(poly.all_coeffs())]
    return coeffs


def resolve_test_function(spec: str) -> TestFunction:
    """Build a provider from labels such as ``gaussian:alpha=1/2``,
    ``indicator:0,1``, ``polygauss:1+x^2,alpha=1`` or ``exp:c=1``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "gaussian":
        m = re.fullmatch(r"\s*alpha\s*=\s*([^,]+)\s*", rest)
        if not m:
            raise ValueError(f"bad gaussian spec {spec!r}")
        return make_gaussian(Fraction(m.group(1)))
    if kind == "indicator":
        parts = [p.strip() for p in rest.split(",")]
        if len(parts) != 2:
            raise ValueError(f"bad indicator spec {spec!r}")
        return make_indicator(Fraction(parts[0]), Fraction(parts[1]))
    if kind == "polygauss":
        m = re.fullmatch(r"\s*(.+?)\s*,\s*alpha\s*=\s*([^,]+)\s*", rest)
        if not m:
            raise ValueError(f"bad polygauss spec {spec!r}")
        return make_poly_gaussian(parse_polynomial(m.group(1)), Fraction(m.group(2)))
    if kind == "exp":
        m = re.fullmatch(r"\s*c\s*=\s*([^,]+)\s*", rest or "c=1")
        if not m:
            raise ValueError(f"bad exp spec {spec!r}")
        return make_exp(Fraction(m.group(1)))
    if kind == "zero":
        return make_zero()
    raise ValueError(f"unknown test function kind {kind!r}")


# --- pairings --------------------------------------------------------------

def _signed_factorial(n: int) -> int:
    return (-1) ** n * math.factorial(n)


def pair(F: WeakDistribution, G: WeakDistribution) -> PairingValue:
    """Exact-or-numeric ``<F, G>`` for two class members."""
    if F.poly and G.poly:
        raise UndefinedPairing("pairing of two polynomial parts diverges")
    if F.delta and G.delta:
        raise UndefinedPairing("pairing of two delta parts is not defined")
    total = ZERO
    # <x^n, delta^(n)> and, by Hermitian symmetry, <delta^(n), x^n>: both real
    for left, right in ((F.poly, G.delta), (F.delta, G.poly)):
        for n, c in left.items():
            d = right.get(n)
            if d is not None:
                total = total + conj(c) * d * _signed_factorial(n)
    return _pval(total)


def pair_dist_fn(F: WeakDistribution, f: TestFunction) -> PairingValue:
    """``<F, f>`` with ``<x^n, f> = moment(n)`` and
    ``<delta^(n), f> = (-1)^n n! taylor(n)``."""
    total = ZERO
    for n, c in F.poly.items():
        if not f.has_moments:
            raise CapabilityMissing("moments", f"x^{n}", f.label)
        total = total + conj(c) * f.moment(n)
    for n, c in F.delta.items():
        if not f.has_taylor:
            raise CapabilityMissing("taylor", f"delta^({n})", f.label)
        total = total + conj(c) * f.taylor(n) * _signed_factorial(n)
    return _pval(total)


def pair_fn_dist(f: TestFunction, F: WeakDistribution) -> PairingValue:
    v = pair_dist_fn(F, f)
    return PairingValue(conj(v.value), v.exact)


# --- quadrature oracles ----------------------------------------------------

def _intervals(*fs: TestFunction) -> list:
    pts = sorted({_mpf(Fraction(p)) for f in fs for p in f.breakpoints})
    return [mpmath.ninf, *pts, mpmath.inf]


def quad_moment(f: TestFunction, n: int, dps: int = DEFAULT_DPS):
    """Moment by adaptive (tanh-sinh) quadrature of ``x^n f(x)``."""
    with mpmath.workdps(dps):
        return mpmath.quad(lambda x: x ** n * f.eval(x), _intervals(f))


def quad_inner(f: TestFunction, g: TestFunction, dps: int = DEFAULT_DPS):
    """``int conj(f) g dx`` by adaptive quadrature."""
    with mpmath.workdps(dps):
        return mpmath.quad(lambda x: mpmath.conj(f.eval(x)) * g.eval(x), _intervals(f, g))
