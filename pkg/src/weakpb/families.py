"""Normalized biorthogonal families and the maps between their spans.

    phi_n = x^n / sqrt(n!)            psi_n = (-1)^n delta^(n) / sqrt(n!)

``S_phi`` and ``S_psi`` are only ever applied as coefficient swaps on finite
spans, plus the moment-based extension of ``S_phi`` to test functions whose
series ``sum_n <x^n, f>/n! x^n`` converges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

import mpmath

from .distrib import DEFAULT_MAX_ORDER, WeakDistribution, add, apply_D, apply_atom, apply_x, scale
from .pairing import CapabilityMissing, TestFunction, pair, pair_dist_fn
from .scalar import ExactScalar, coerce, inv_sqrt_factorial, is_zero, sqrt_factorial, to_mpc

BASES = ("phi", "psi")


class FamilyBasisError(ValueError):
    """A vector or distribution is not in the span the operation needs."""


def phi(n: int) -> WeakDistribution:
    if n < 0:
        raise ValueError("family index must be non-negative")
    return WeakDistribution.monomial(n, inv_sqrt_factorial(n))


def psi(n: int) -> WeakDistribution:
    if n < 0:
        raise ValueError("family index must be non-negative")
    return WeakDistribution.delta_derivative(n, (-1) ** n * inv_sqrt_factorial(n))


@dataclass(frozen=True, eq=False)
class FamilyIndexVector:
    """Finite combination ``sum_k coeffs[k] * phi_k`` (or ``psi_k``)."""

    basis: str
    coeffs: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in BASES:
            raise FamilyBasisError(f"unknown basis tag {self.basis!r}")
        coeffs = {int(k): coerce(c) for k, c in sorted(dict(self.coeffs).items())}
        if any(k < 0 for k in coeffs):
            raise ValueError("family index must be non-negative")
        object.__setattr__(self, "coeffs", {k: c for k, c in coeffs.items() if not is_zero(c)})

    def __eq__(self, other):
        if not isinstance(other, FamilyIndexVector):
            return NotImplemented
        return self.basis == other.basis and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.basis, tuple(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{self.basis}_{k}" for k, c in self.coeffs.items())

    def to_distribution(self, max_order: int = DEFAULT_MAX_ORDER) -> WeakDistribution:
        if self.basis == "phi":
            return WeakDistribution(
                poly={k: c * inv_sqrt_factorial(k) for k, c in self.coeffs.items()},
                max_order=max_order)
        return WeakDistribution(
            delta={k: c * ((-1) ** k * inv_sqrt_factorial(k)) for k, c in self.coeffs.items()},
            max_order=max_order)

    @classmethod
    def from_distribution(cls, F: WeakDistribution, basis: str) -> "FamilyIndexVector":
        if basis == "phi":
            if F.delta:
                raise FamilyBasisError("distribution has delta terms; not in the phi span")
            return cls("phi", {n: c * sqrt_factorial(n) for n, c in F.poly.items()})
        if basis == "psi":
            if F.poly:
                raise FamilyBasisError("distribution has polynomial terms; not in the psi span")
            return cls("psi", {n: c * ((-1) ** n * sqrt_factorial(n)) for n, c in F.delta.items()})
        raise FamilyBasisError(f"unknown basis tag {basis!r}")


def ladder(atom: str, v: FamilyIndexVector) -> FamilyIndexVector:
    """Apply one ladder atom in the family-coefficient representation."""
    return FamilyIndexVector.from_distribution(apply_atom(atom, v.to_distribution()), v.basis)


def apply_N(F: WeakDistribution) -> WeakDistribution:
    """``N = ba = x D``."""
    return apply_x(apply_D(F))


def apply_Ndag(F: WeakDistribution) -> WeakDistribution:
    """``N† = a† b† = -D x``."""
    return scale(-1, apply_D(apply_x(F)))


def s_phi_span(v: FamilyIndexVector) -> FamilyIndexVector:
    if v.basis != "psi":
        raise FamilyBasisError("S_phi acts on psi-span vectors")
    return FamilyIndexVector("phi", v.coeffs)


def s_psi_span(v: FamilyIndexVector) -> FamilyIndexVector:
    if v.basis != "phi":
        raise FamilyBasisError("S_psi acts on phi-span vectors")
    return FamilyIndexVector("psi", v.coeffs)


def s_phi(G: WeakDistribution) -> WeakDistribution:
    """``S_phi`` on a psi-span element given as a distribution."""
    return s_phi_span(FamilyIndexVector.from_distribution(G, "psi")).to_distribution(G.max_order)


def s_psi(F: WeakDistribution) -> WeakDistribution:
    return s_psi_span(FamilyIndexVector.from_distribution(F, "phi")).to_distribution(F.max_order)


def _a(F):
    return apply_atom("a", F)


def _b(F):
    return apply_atom("b", F)


def _adag(F):
    return apply_atom("a†", F)


def _bdag(F):
    return apply_atom("b†", F)


def _diff(F, G):
    return add(F, scale(-1, G))


def intertwine_residuals(v: FamilyIndexVector) -> dict[str, WeakDistribution]:
    """Residuals of every intertwining identity that applies to ``v``.

    For ``F`` in the phi span the checked identities are
    ``S_phi S_psi F = F``, ``N† S_psi F = S_psi N F``,
    ``a F = S_phi b† S_psi F``, ``b F = S_phi a† S_psi F`` and the
    unconjugated forms ``S_psi a F = b† S_psi F``, ``S_psi b F = a† S_psi F``.
    The psi span gets the mirrored set.
    """
    X = v.to_distribution()
    if v.basis == "phi":
        F = X
        return {
            "S_phi S_psi F - F": _diff(s_phi(s_psi(F)), F),
            "N† S_psi F - S_psi N F": _diff(apply_Ndag(s_psi(F)), s_psi(apply_N(F))),
            "a F - S_phi b† S_psi F": _diff(_a(F), s_phi(_bdag(s_psi(F)))),
            "b F - S_phi a† S_psi F": _diff(_b(F), s_phi(_adag(s_psi(F)))),
            "S_psi a F - b† S_psi F": _diff(s_psi(_a(F)), _bdag(s_psi(F))),
            "S_psi b F - a† S_psi F": _diff(s_psi(_b(F)), _adag(s_psi(F))),
        }
    G = X
    return {
        "S_psi S_phi G - G": _diff(s_psi(s_phi(G)), G),
        "N S_phi G - S_phi N† G": _diff(apply_N(s_phi(G)), s_phi(apply_Ndag(G))),
        "a† G - S_psi b S_phi G": _diff(_adag(G), s_psi(_b(s_phi(G)))),
        "b† G - S_psi a S_phi G": _diff(_bdag(G), s_psi(_a(s_phi(G)))),
        "S_phi a† G - b S_phi G": _diff(s_phi(_adag(G)), _b(s_phi(G))),
        "S_phi b† G - a S_phi G": _diff(s_phi(_bdag(G)), _a(s_phi(G))),
    }


# --- moment-based extension of S_phi ----------------------------------------

@dataclass(frozen=True)
class SeriesExtension:
    """Prefix ``sum_{n<=N} alpha_n x^n`` of ``S_phi F`` with decay diagnostics."""

    alphas: tuple
    poly: WeakDistribution
    ratios: tuple  # |alpha_{n+1} / alpha_n| over consecutive nonzero pairs

    @property
    def N(self) -> int:
        return len(self.alphas) - 1

    def magnitudes(self) -> list:
        return [abs(to_mpc(a)) for a in self.alphas]

    def radius_estimate(self, window: int = 8):
        """Radius of convergence estimated from the tail ratios (inf if no tail)."""
        tail = [r for r in self.ratios[-window:]]
        if not tail:
            return mpmath.inf
        worst = max(tail)
        return mpmath.inf if worst == 0 else 1 / worst

    def converges_at(self, R, window: int = 8) -> bool:
        """Ratio test at ``|x| = R`` on the tail: every ratio times ``R`` below 1
        and the ratios non-increasing."""
        if not self.ratios:
            return True
        tail = list(self.ratios[-window:])
        monotone = all(b <= a for a, b in zip(tail, tail[1:]))
        return monotone and all(r * R < 1 for r in tail)


def s_phi_extend(source: Union[TestFunction, WeakDistribution], N: int) -> SeriesExtension:
    """Truncated ``S_phi source = sum_n <phi_n, source> phi_n``.

    For a test function the coefficient of ``x^n`` is ``moment(n)/n!``.
    """
    if isinstance(source, TestFunction) and not source.has_moments:
        raise CapabilityMissing("moments", "S_phi extension", source.label)
    alphas = []
    poly = WeakDistribution.zero(max(N, DEFAULT_MAX_ORDER))
    for n in range(N + 1):
        if isinstance(source, TestFunction):
            c = pair_dist_fn(phi(n), source).value
        else:
            c = pair(phi(n), source).value
        term = scale(c, phi(n))
        poly = add(poly, term)
        alphas.append(term.poly.get(n, ExactScalar(0)))
    mags = [abs(to_mpc(a)) for a in alphas]
    ratios = tuple(mags[n + 1] / mags[n] for n in range(N) if mags[n] != 0 and mags[n + 1] != 0)
    return SeriesExtension(tuple(alphas), poly, ratios)


# --- CLI spec strings ----------------------------------------------------------

_RAT = r"\d+(?:/\d+)?"


def parse_exact(text: str) -> ExactScalar:
    """Parse ``3``, ``-1/2``, ``2i``, ``1/2+3i`` into an exact scalar."""
    t = text.replace(" ", "")
    m = re.fullmatch(rf"([+-]?)({_RAT})?i", t)
    if m:
        im = Fraction(m.group(2) or 1)
        return ExactScalar(0, -im if m.group(1) == "-" else im)
    m = re.fullmatch(rf"([+-]?{_RAT})(?:([+-])({_RAT})?i)?", t)
    if not m:
        raise ValueError(f"not an exact complex rational: {text!r}")
    im = Fraction(m.group(3) or 1) if m.group(2) else Fraction(0)
    return ExactScalar(Fraction(m.group(1)), -im if m.group(2) == "-" else im)


def _parse_coeff_map(body: str) -> dict[int, ExactScalar]:
    body = body.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"span literal must be braced: {body!r}")
    out = {}
    for item in filter(None, (p.strip() for p in body[1:-1].split(","))):
        k, _, val = item.partition(":")
        out[int(k)] = parse_exact(val)
    return out


def resolve_distribution(spec: str) -> WeakDistribution:
    """``phi:n``, ``psi:n``, ``x:n``, ``delta:n`` or ``span:phi|psi:{k:c,...}``."""
    spec = spec.strip()
    m = re.fullmatch(r"(phi|psi|x|delta):(\d+)", spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"phi": phi, "psi": psi,
                "x": WeakDistribution.monomial,
                "delta": WeakDistribution.delta_derivative}[kind](n)
    m = re.fullmatch(r"span:(phi|psi):(\{.*\})", spec)
    if m:
        return FamilyIndexVector(m.group(1), _parse_coeff_map(m.group(2))).to_distribution()
    raise ValueError(f"unresolved distribution spec {spec!r}")
