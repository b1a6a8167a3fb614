import random
from fractions import Fraction

import pytest

from weakpb.checks import random_span
from weakpb.distrib import WeakDistribution, scale
from weakpb.families import (FamilyBasisError, FamilyIndexVector, apply_N, apply_Ndag,
                             intertwine_residuals, ladder, parse_exact, phi, psi,
                             resolve_distribution, s_phi_extend, s_phi_span, s_psi_span)
from weakpb.pairing import CapabilityMissing, make_exp, make_gaussian, make_indicator, make_zero
from weakpb.scalar import ExactScalar

FIV = FamilyIndexVector
sq = ExactScalar.sqrt


def test_family_members():
    assert phi(0) == WeakDistribution.monomial(0)
    assert psi(0) == WeakDistribution.delta_derivative(0)
    assert phi(2) == WeakDistribution.monomial(2, ExactScalar(Fraction(1, 2), 0, 2))
    # phi_2 = b^2 phi_0 / sqrt(2!)
    from weakpb.distrib import apply_x
    assert phi(2) == scale(sq(Fraction(1, 2)), apply_x(apply_x(phi(0))))


@pytest.mark.parametrize("k", range(41))
def test_ladder_relations(k):
    assert ladder("b", FIV("phi", {k: 1})) == FIV("phi", {k + 1: sq(k + 1)})
    assert ladder("a†", FIV("psi", {k: 1})) == FIV("psi", {k + 1: sq(k + 1)})
    lowered = {k - 1: sq(k)} if k else {}
    assert ladder("a", FIV("phi", {k: 1})) == FIV("phi", lowered)
    assert ladder("b†", FIV("psi", {k: 1})) == FIV("psi", lowered)


@pytest.mark.parametrize("k", range(41))
def test_number_eigenvalues(k):
    assert apply_N(phi(k)) == scale(k, phi(k))
    assert apply_Ndag(psi(k)) == scale(k, psi(k))


def test_N_on_delta():
    assert apply_N(psi(0)) == scale(-1, psi(0))


def test_conversion_roundtrip():
    rng = random.Random(5)
    for _ in range(50):
        for basis in ("phi", "psi"):
            v = random_span(rng, basis)
            assert FIV.from_distribution(v.to_distribution(), basis) == v


def test_span_maps():
    v = FIV("psi", {0: 1, 3: 2})
    assert s_phi_span(v) == FIV("phi", {0: 1, 3: 2})
    with pytest.raises(FamilyBasisError):
        s_phi_span(FIV("phi", {0: 1}))
    with pytest.raises(FamilyBasisError):
        s_psi_span(v)
    rng = random.Random(9)
    for _ in range(50):
        w = random_span(rng, "psi")
        assert s_psi_span(s_phi_span(w)) == w


def test_intertwining_examples():
    res = intertwine_residuals(FIV("phi", {0: 1, 2: ExactScalar(0, 1)}))
    assert res["a F - S_phi b† S_psi F"].is_zero()
    assert all(r.is_zero() for r in res.values())
    res = intertwine_residuals(FIV("psi", {4: 1}))
    assert "a† G - S_psi b S_phi G" in res
    assert all(r.is_zero() for r in res.values())
    for basis in ("phi", "psi"):
        assert all(r.is_zero() for r in intertwine_residuals(FIV(basis, {})).values())


def test_intertwining_random_spans():
    rng = random.Random(11)
    for i in range(200):
        v = random_span(rng, "phi" if i % 2 else "psi")
        assert all(r.is_zero() for r in intertwine_residuals(v).values())


def test_intertwining_detects_fault():
    # a non-intertwining perturbation must leave a residual
    from weakpb import families
    G = psi(2)
    assert not (families.apply_N(families.s_phi(G)) - families.s_phi(G)).is_zero()


def test_indicator_extension():
    import math
    ext = s_phi_extend(make_indicator(0, 1), 30)
    for n, a in enumerate(ext.alphas):
        assert a == ExactScalar(Fraction(1, math.factorial(n) * (n + 1)))
    for R in (1, 2, 5, 10):
        assert ext.converges_at(R)
    assert ext.radius_estimate() > 10


def test_extension_of_psi_span_member():
    ext = s_phi_extend(psi(2), 6)
    assert ext.poly == phi(2)


def test_extension_zero_and_capability():
    ext = s_phi_extend(make_zero(), 10)
    assert ext.poly.is_zero()
    assert ext.converges_at(1e6)
    with pytest.raises(CapabilityMissing):
        s_phi_extend(make_exp(1), 5)


def test_extension_of_gaussian_is_nonterminating():
    ext = s_phi_extend(make_gaussian(1), 20)
    assert len(ext.poly.poly) == 11


@pytest.mark.parametrize("text,value", [
    ("3", ExactScalar(3)), ("-1/2", ExactScalar(Fraction(-1, 2))), ("2i", ExactScalar(0, 2)),
    ("1/2+3i", ExactScalar(Fraction(1, 2), 3)), ("-i", ExactScalar(0, -1)), ("1-i", ExactScalar(1, -1)),
])
def test_parse_exact(text, value):
    assert parse_exact(text) == value


def test_resolve_distribution():
    assert resolve_distribution("phi:3") == phi(3)
    assert resolve_distribution("span:psi:{0:1,3:2}") == FIV("psi", {0: 1, 3: 2}).to_distribution()
    with pytest.raises(ValueError):
        resolve_distribution("chi:2")
