"""The closed class span{x^n} + span{delta^(n)} and the ladder operators on it.

Elements are stored sparsely: ``poly[n]`` is the coefficient of ``x**n`` and
``delta[n]`` the coefficient of the n-th derivative of the Dirac delta.
Multiplication by ``x`` and differentiation both keep the class invariant:

    x * x**n        = x**(n+1)
    x * delta^(n)   = -n * delta^(n-1)      (x * delta = 0)
    D x**n          = n * x**(n-1)
    D delta^(n)     = delta^(n+1)

The four ladder atoms are ``a = D``, ``b = x``, ``a† = -D`` and ``b† = x``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .scalar import ExactScalar, coerce, is_exact, is_zero

DEFAULT_MAX_ORDER = 512


class OrderOverflow(OverflowError):
    """A degree or delta order exceeded the configured cap."""


def _prune(coeffs: Mapping[int, object]) -> dict[int, object]:
    return {n: c for n, c in sorted(coeffs.items()) if not is_zero(c)}


@dataclass(frozen=True, eq=False)
class WeakDistribution:
    poly: Mapping[int, object] = field(default_factory=dict)
    delta: Mapping[int, object] = field(default_factory=dict)
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        poly = _prune({int(n): coerce(c) for n, c in dict(self.poly).items()})
        delta = _prune({int(n): coerce(c) for n, c in dict(self.delta).items()})
        for n in list(poly) + list(delta):
            if n < 0:
                raise ValueError(f"negative degree/order {n}")
            if n > self.max_order:
                raise OrderOverflow(f"order {n} exceeds cap {self.max_order}")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "delta", delta)

    # --- constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, n: int, coeff=1, max_order: int = DEFAULT_MAX_ORDER):
        return cls(poly={n: coeff}, max_order=max_order)

    @classmethod
    def delta_derivative(cls, n: int, coeff=1, max_order: int = DEFAULT_MAX_ORDER):
        return cls(delta={n: coeff}, max_order=max_order)

    @classmethod
    def zero(cls, max_order: int = DEFAULT_MAX_ORDER):
        return cls(max_order=max_order)

    # --- structure --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.poly and not self.delta

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in (*self.poly.values(), *self.delta.values()))

    def _with(self, poly, delta):
        return WeakDistribution(poly, delta, self.max_order)

    def __eq__(self, other):
        if not isinstance(other, WeakDistribution):
            return NotImplemented
        return dict(self.poly) == dict(other.poly) and dict(self.delta) == dict(other.delta)

    def __hash__(self):
        return hash((tuple(self.poly.items()), tuple(self.delta.items())))

    def __add__(self, other):
        if not isinstance(other, WeakDistribution):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, WeakDistribution):
            return NotImplemented
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __rmul__(self, c):
        return scale(c, self)

    def __repr__(self):
        return f"WeakDistribution({self})"

    def __str__(self):
        terms = [f"({c})*x^{n}" for n, c in self.poly.items()]
        terms += [f"({c})*delta^({n})" for n, c in self.delta.items()]
        return " + ".join(terms) if terms else "0"

    # --- serialization ----------------------------------------------------
    def to_json_obj(self) -> dict:
        if not self.is_exact():
            raise ValueError("only exact distributions serialize to JSON")
        return {
            "poly": {str(n): ExactScalar.coerce(c).to_json() for n, c in self.poly.items()},
            "delta": {str(n): ExactScalar.coerce(c).to_json() for n, c in self.delta.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict, max_order: int = DEFAULT_MAX_ORDER):
        poly = {int(n): ExactScalar.from_json(v) for n, v in obj.get("poly", {}).items()}
        delta = {int(n): ExactScalar.from_json(v) for n, v in obj.get("delta", {}).items()}
        return cls(poly, delta, max_order)

    @classmethod
    def from_json(cls, text: str, max_order: int = DEFAULT_MAX_ORDER):
        return cls.from_json_obj(json.loads(text), max_order)


def _accumulate(target: dict, n: int, c) -> None:
    if n in target:
        target[n] = target[n] + c
    else:
        target[n] = c


def add(F: WeakDistribution, G: WeakDistribution) -> WeakDistribution:
    poly = dict(F.poly)
    delta = dict(F.delta)
    for n, c in G.poly.items():
        _accumulate(poly, n, c)
    for n, c in G.delta.items():
        _accumulate(delta, n, c)
    return WeakDistribution(poly, delta, min(F.max_order, G.max_order))


def scale(c, F: WeakDistribution) -> WeakDistribution:
    c = coerce(c)
    return F._with({n: c * v for n, v in F.poly.items()},
                   {n: c * v for n, v in F.delta.items()})


def linear_combination(pairs: Iterable[tuple[object, WeakDistribution]]) -> WeakDistribution:
    out = WeakDistribution()
    for c, F in pairs:
        out = add(out, scale(c, F))
    return out


def apply_x(F: WeakDistribution) -> WeakDistribution:
    """Multiply by ``x``."""
    poly = {n + 1: c for n, c in F.poly.items()}
    delta = {n - 1: -n * c for n, c in F.delta.items() if n > 0}
    return F._with(poly, delta)


def apply_D(F: WeakDistribution) -> WeakDistribution:
    """Weak derivative."""
    poly = {n - 1: n * c for n, c in F.poly.items() if n > 0}
    delta = {n + 1: c for n, c in F.delta.items()}
    return F._with(poly, delta)


# --- ladder atoms and words ------------------------------------------------

ATOMS = ("a", "b", "a†", "b†")
_ALIASES = {"a": "a", "b": "b", "a†": "a†", "b†": "b†",
            "adag": "a†", "bdag": "b†", "a+": "a†", "b+": "b†"}


def apply_atom(atom: str, F: WeakDistribution) -> WeakDistribution:
    atom = _ALIASES[atom]
    if atom == "a":
        return apply_D(F)
    if atom == "a†":
        return scale(-1, apply_D(F))
    return apply_x(F)


@dataclass(frozen=True)
class OperatorWord:
    """Product of ladder atoms, applied right to left."""

    atoms: tuple[str, ...] = ()

    def __post_init__(self):
        try:
            atoms = tuple(_ALIASES[a] for a in self.atoms)
        except KeyError as exc:
            raise ValueError(f"unknown ladder atom {exc.args[0]!r}") from None
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def parse(cls, text: str) -> "OperatorWord":
        return cls(tuple(text.replace(",", " ").split()))

    def __call__(self, F: WeakDistribution) -> WeakDistribution:
        return apply_word(self, F)

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        return OperatorWord(self.atoms + other.atoms)

    def __str__(self):
        return " ".join(self.atoms) or "1"


def apply_word(w: OperatorWord, F: WeakDistribution) -> WeakDistribution:
    for atom in reversed(w.atoms):
        F = apply_atom(atom, F)
    return F


def commutator_residual(F: WeakDistribution) -> WeakDistribution:
    """``(ab - ba)F - F``; identically zero on the class."""
    ab = apply_D(apply_x(F))
    ba = apply_x(apply_D(F))
    return add(add(ab, scale(-1, ba)), scale(-1, F))
