"""Exact complex-rational scalars with an optional square-root factor.

A value is ``(re + i*im) * sqrt(radical)`` where ``re``, ``im`` are
:class:`fractions.Fraction` and ``radical`` is a square-free positive integer.
Keeping the radical square-free makes equality a plain field comparison.

Numeric (``mpmath.mpc``) coefficients are accepted by the helper functions at
the bottom of the module so that exact and high-precision data can share the
same containers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath
from sympy import factorint


class RadicalMismatch(ArithmeticError):
    """Raised when adding scalars whose square-free radicals differ."""


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == s*s*r`` and ``r`` square-free."""
    if n <= 0:
        raise ValueError(f"radicand must be positive, got {n}")
    s, r = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            r *= p
    return s, r


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"expected a rational, got {type(v).__name__}")


class ExactScalar:
    """Immutable exact scalar ``(re + i*im) * sqrt(radical)``."""

    __slots__ = ("re", "im", "radical")

    def __init__(self, re=0, im=0, radical=1):
        re = _as_fraction(re)
        im = _as_fraction(im)
        rad = _as_fraction(radical)
        if rad <= 0:
            raise ValueError("radical must be a positive rational")
        if re == 0 and im == 0:
            rad = Fraction(1)
        elif rad != 1:
            # sqrt(p/q) = sqrt(p*q)/q, then pull squares out of p*q
            p, q = rad.numerator, rad.denominator
            s, r = squarefree_split(p * q)
            scale = Fraction(s, q)
            re, im, rad = re * scale, im * scale, Fraction(r)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "radical", int(rad))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction, radical: int) -> "ExactScalar":
        # trusted constructor: radical already square-free
        obj = object.__new__(cls)
        if re == 0 and im == 0:
            radical = 1
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        object.__setattr__(obj, "radical", radical)
        return obj

    @classmethod
    def sqrt(cls, q) -> "ExactScalar":
        return cls(1, 0, q)

    @classmethod
    def coerce(cls, v) -> "ExactScalar":
        if isinstance(v, ExactScalar):
            return v
        if isinstance(v, complex):
            raise TypeError("floating complex values are not exact")
        return cls(v)

    # --- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_rational(self) -> bool:
        return self.radical == 1 and self.im == 0

    # --- arithmetic -------------------------------------------------------
    def __neg__(self):
        return ExactScalar._raw(-self.re, -self.im, self.radical)

    def conjugate(self) -> "ExactScalar":
        return ExactScalar._raw(self.re, -self.im, self.radical)

    def __add__(self, other):
        if _is_numeric(other):
            return self.to_mpc() + other
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.radical != other.radical:
            raise RadicalMismatch(
                f"cannot add sqrt({self.radical}) and sqrt({other.radical}) terms"
            )
        return ExactScalar._raw(self.re + other.re, self.im + other.im, self.radical)

    __radd__ = __add__

    def __sub__(self, other):
        if _is_numeric(other):
            return self.to_mpc() - other
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_numeric(other):
            return self.to_mpc() * other
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        # both radicals square-free: a*b = g^2 * (a/g)*(b/g)
        g = math.gcd(self.radical, other.radical)
        rad = (self.radical // g) * (other.radical // g)
        return ExactScalar._raw(re * g, im * g, rad)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        den = self.re * self.re + self.im * self.im
        # 1/((re+i im) sqrt(r)) = (re - i im) sqrt(r) / (den * r)
        k = den * self.radical
        return ExactScalar._raw(self.re / k, -self.im / k, self.radical)

    def __truediv__(self, other):
        if _is_numeric(other):
            return self.to_mpc() / other
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    # --- comparison / conversion -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return (self.re, self.im, self.radical) == (other.re, other.im, other.radical)

    def __hash__(self):
        return hash((self.re, self.im, self.radical))

    def to_mpc(self) -> mpmath.mpc:
        r = mpmath.sqrt(self.radical)
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator) * r

    def __complex__(self):
        return complex(self.to_mpc())

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        if self.im == 0:
            body = str(self.re)
        elif self.re == 0:
            body = f"{self.im}i"
        else:
            sign = "+" if self.im > 0 else "-"
            body = f"({self.re}{sign}{abs(self.im)}i)"
        if self.radical != 1:
            body = f"{body}*sqrt({self.radical})"
        return body

    def to_json(self) -> list[str]:
        """``[re_num, re_den, im_num, im_den, rad_num, rad_den]`` as strings."""
        return [str(self.re.numerator), str(self.re.denominator),
                str(self.im.numerator), str(self.im.denominator),
                str(self.radical), "1"]

    @classmethod
    def from_json(cls, parts) -> "ExactScalar":
        if len(parts) != 6:
            raise ValueError("exact scalar needs six integer components")
        n = [int(p) for p in parts]
        return cls(Fraction(n[0], n[1]), Fraction(n[2], n[3]), Fraction(n[4], n[5]))


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar(0, 1)


@lru_cache(maxsize=None)
def sqrt_factorial(n: int) -> ExactScalar:
    """Exact ``sqrt(n!)``, built incrementally so only small radicands are factored."""
    if n < 0:
        raise ValueError("negative factorial")
    if n <= 1:
        return ONE
    return sqrt_factorial(n - 1) * ExactScalar.sqrt(n)


@lru_cache(maxsize=None)
def inv_sqrt_factorial(n: int) -> ExactScalar:
    return sqrt_factorial(n).inverse()


# --- mixed exact / numeric helpers ----------------------------------------

def _is_numeric(v) -> bool:
    return isinstance(v, (mpmath.mpf, mpmath.mpc, float, complex))


def is_exact(v) -> bool:
    return isinstance(v, (ExactScalar, int, Fraction))


def is_zero(v) -> bool:
    if isinstance(v, ExactScalar):
        return v.is_zero()
    return v == 0


def conj(v):
    if isinstance(v, ExactScalar):
        return v.conjugate()
    if isinstance(v, (int, Fraction)):
        return v
    return mpmath.conj(v)


def to_mpc(v) -> mpmath.mpc:
    if isinstance(v, ExactScalar):
        return v.to_mpc()
    if isinstance(v, Fraction):
        return mpmath.mpc(mpmath.mpf(v.numerator) / v.denominator)
    return mpmath.mpc(v)


def coerce(v):
    """Map ints/Fractions to ExactScalar; leave numeric values as ``mpc``."""
    if isinstance(v, ExactScalar):
        return v
    if isinstance(v, (int, Fraction)):
        return ExactScalar(v)
    return mpmath.mpc(v)
