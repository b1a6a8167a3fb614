"""Exact identity suites driven by ``wpb check``.

Each check returns a :class:`CheckResult`.  Module functions are looked up
through their modules at call time so a patched operator is what gets tested.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import distrib, families, pairing
from .scalar import ExactScalar

SCOPES = ("distrib", "pairing", "families", "all")


@dataclass(frozen=True)
class CheckResult:
    tag: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{self.tag}: {'pass' if self.passed else 'FAIL'}({self.detail})"


def random_rational(rng: random.Random, bound: int = 20) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_exact(rng: random.Random, complex_: bool = True) -> ExactScalar:
    im = random_rational(rng) if complex_ and rng.random() < 0.5 else 0
    return ExactScalar(random_rational(rng), im)


def random_member(rng: random.Random, max_order: int = 50, max_terms: int = 6):
    """Random class member with complex-rational coefficients."""
    poly = {rng.randint(0, max_order): random_exact(rng) for _ in range(rng.randint(0, max_terms))}
    delta = {rng.randint(0, max_order): random_exact(rng) for _ in range(rng.randint(0, max_terms))}
    return distrib.WeakDistribution(poly, delta)


def random_span(rng: random.Random, basis: str, max_index: int = 25, max_terms: int = 6):
    coeffs = {rng.randint(0, max_index): random_exact(rng) for _ in range(rng.randint(0, max_terms))}
    return families.FamilyIndexVector(basis, coeffs)


# --- distrib ------------------------------------------------------------------

def check_commutator(n_random: int = 1000, seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    basis = [distrib.WeakDistribution.monomial(n) for n in range(51)]
    basis += [distrib.WeakDistribution.delta_derivative(n) for n in range(51)]
    samples = basis + [random_member(rng) for _ in range(n_random)]
    bad = [F for F in samples if not distrib.commutator_residual(F).is_zero()]
    return CheckResult("commutator", not bad,
                       f"{len(samples)} members, order<=50" + (f", first failure {bad[0]}" if bad else ""))


def check_x_on_delta() -> CheckResult:
    ok = all(distrib.apply_x(distrib.WeakDistribution.delta_derivative(n))
             == distrib.WeakDistribution.delta_derivative(n - 1, -n) if n else
             distrib.apply_x(distrib.WeakDistribution.delta_derivative(0)).is_zero()
             for n in range(51))
    return CheckResult("x_delta_rule", ok, "x delta^(n) = -n delta^(n-1), n<=50")


def check_vacua() -> CheckResult:
    ok = (distrib.apply_D(families.phi(0)).is_zero()
          and distrib.apply_atom("b†", families.psi(0)).is_zero())
    return CheckResult("vacua", ok, "a phi_0 = 0, b† psi_0 = 0")


# --- pairing ------------------------------------------------------------------

def check_biorthonormality(n_max: int = 30) -> CheckResult:
    one, zero = ExactScalar(1), ExactScalar(0)
    bad = [(n, m) for n in range(n_max + 1) for m in range(n_max + 1)
           if pairing.pair(families.phi(n), families.psi(m)).value != (one if n == m else zero)]
    return CheckResult("biorthonormality", not bad,
                       f"n,m<={n_max}" + (f", failures at {bad[:3]}" if bad else ""))


def check_hermitian(n_random: int = 200, seed: int = 1) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(n_random):
        F = random_span(rng, "phi").to_distribution()
        G = random_span(rng, "psi").to_distribution()
        try:
            lhs = pairing.pair(F, G).value
            rhs = pairing.pair(G, F).value.conjugate()
        except ArithmeticError:
            continue
        bad += lhs != rhs
    return CheckResult("hermitian_symmetry", bad == 0, f"{n_random} random span pairs")


def check_sesquilinear(n_random: int = 200, seed: int = 2) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(n_random):
        F = random_span(rng, "phi").to_distribution()
        G = random_span(rng, "psi").to_distribution()
        c = random_exact(rng)
        try:
            base = pairing.pair(F, G).value
            bad += pairing.pair(distrib.scale(c, F), G).value != c.conjugate() * base
            bad += pairing.pair(F, distrib.scale(c, G)).value != c * base
        except ArithmeticError:
            continue
    return CheckResult("sesquilinearity", bad == 0, f"{n_random} random instances")


# --- families -----------------------------------------------------------------

def check_ladder(k_max: int = 40) -> list[CheckResult]:
    FIV = families.FamilyIndexVector
    sq = ExactScalar.sqrt
    raise_ok = all(families.ladder("b", FIV("phi", {k: 1})) == FIV("phi", {k + 1: sq(k + 1)})
                   and families.ladder("a†", FIV("psi", {k: 1})) == FIV("psi", {k + 1: sq(k + 1)})
                   for k in range(k_max + 1))
    lower_ok = all(families.ladder("a", FIV("phi", {k: 1})) == FIV("phi", {k - 1: sq(k)} if k else {})
                   and families.ladder("b†", FIV("psi", {k: 1})) == FIV("psi", {k - 1: sq(k)} if k else {})
                   for k in range(k_max + 1))
    eig_ok = all(families.apply_N(families.phi(k)) == distrib.scale(k, families.phi(k))
                 and families.apply_Ndag(families.psi(k)) == distrib.scale(k, families.psi(k))
                 for k in range(k_max + 1))
    return [CheckResult("raising", raise_ok, f"k<={k_max}"),
            CheckResult("lowering", lower_ok, f"k<={k_max}"),
            CheckResult("number_eigenvalues", eig_ok, f"k<={k_max}")]


def check_intertwining(n_random: int = 200, seed: int = 3) -> list[CheckResult]:
    rng = random.Random(seed)
    failures: dict[str, int] = {}
    for i in range(n_random):
        v = random_span(rng, "phi" if i % 2 == 0 else "psi")
        for name, res in families.intertwine_residuals(v).items():
            failures.setdefault(name, 0)
            failures[name] += not res.is_zero()
    return [CheckResult(f"intertwining[{name}]", n == 0, f"{n_random // 2} spans, residual {'0' if n == 0 else 'nonzero'}")
            for name, n in failures.items()]


def check_span_roundtrip(n_random: int = 200, seed: int = 4) -> CheckResult:
    rng = random.Random(seed)
    ok = True
    for _ in range(n_random):
        v = random_span(rng, "phi")
        w = random_span(rng, "psi")
        ok &= families.s_phi_span(families.s_psi_span(v)) == v
        ok &= families.s_psi_span(families.s_phi_span(w)) == w
    return CheckResult("span_maps_inverse", ok, f"{n_random} spans each way")


def run_checks(scope: str = "all") -> list[CheckResult]:
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    out: list[CheckResult] = []
    if scope in ("distrib", "all"):
        out += [check_commutator(), check_x_on_delta(), check_vacua()]
    if scope in ("pairing", "all"):
        out += [check_biorthonormality(), check_hermitian(), check_sesquilinear()]
    if scope in ("families", "all"):
        out += check_ladder() + check_intertwining() + [check_span_roundtrip()]
    return out
