import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given

from weakpb.distrib import WeakDistribution, scale
from weakpb.families import phi, psi
from weakpb.pairing import (CapabilityMissing, UndefinedPairing, make_exp, make_gaussian,
                            make_indicator, make_poly_gaussian, pair, pair_dist_fn,
                            pair_fn_dist, quad_moment, resolve_test_function)
from weakpb.scalar import ExactScalar, to_mpc

from conftest import exact_scalars

X = WeakDistribution.monomial
DELTA = WeakDistribution.delta_derivative


def test_biorthonormal_exact():
    one, zero = ExactScalar(1), ExactScalar(0)
    for n in range(31):
        for m in range(31):
            v = pair(phi(n), psi(m))
            assert v.exact
            assert v.value == (one if n == m else zero)


def test_case_table():
    assert pair(X(2), DELTA(1)).value == ExactScalar(0)
    assert pair(X(1), DELTA(2)).value == ExactScalar(0)
    assert pair(X(3), DELTA(3)).value == ExactScalar(-6)


def test_undefined_pairings():
    with pytest.raises(UndefinedPairing):
        pair(X(1), X(1))
    with pytest.raises(UndefinedPairing):
        pair(DELTA(0), DELTA(2))
    # a mixed argument only meets same-type terms against the zero distribution
    assert pair(X(0) + DELTA(3), WeakDistribution()).value == ExactScalar(0)
    with pytest.raises(UndefinedPairing):
        pair(X(0) + DELTA(3), X(3) + DELTA(1))


@given(exact_scalars, exact_scalars)
def test_sesquilinearity(c, d):
    F = WeakDistribution({2: 1, 5: d})
    G = WeakDistribution(delta={2: 3, 5: 1})
    base = pair(F, G).value
    assert pair(scale(c, F), G).value == c.conjugate() * base
    assert pair(F, scale(c, G)).value == c * base


@given(exact_scalars, exact_scalars)
def test_hermitian_symmetry(c, d):
    F = WeakDistribution({1: c, 4: d})
    G = WeakDistribution(delta={1: d, 4: 1})
    assert pair(F, G).value == pair(G, F).value.conjugate()


def test_pair_dist_fn_delta_is_point_value():
    f = make_gaussian(3)
    assert pair_dist_fn(DELTA(0), f).value == ExactScalar(1)
    g = make_poly_gaussian([2, 0, 1], 1)
    assert pair_dist_fn(DELTA(0), g).value == ExactScalar(2)


def test_psi2_against_gaussian_finite_difference():
    f = make_gaussian(Fraction(1, 2))
    v = pair_dist_fn(psi(2), f)
    assert v.value == ExactScalar(Fraction(-1, 2), 0, 2)  # -1/sqrt(2)
    with mpmath.workdps(30):
        h = mpmath.mpf("1e-6")
        fd = (f.eval(h) - 2 * f.eval(0) + f.eval(-h)) / h ** 2
    assert abs(complex(v.value) - float(fd) / math.sqrt(2)) < 1e-9


def test_moment_x2_gaussian():
    f = make_gaussian(1)
    with mpmath.workdps(34):
        v = pair_dist_fn(X(2), f).value
        assert abs(v - mpmath.sqrt(mpmath.pi) / 2) < mpmath.mpf(10) ** -30
        assert abs(v - quad_moment(f, 2)) < 1e-25
    assert abs(complex(v) - 0.8862269) < 1e-7


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(1), Fraction(2)])
def test_gaussian_moments_vs_quadrature(alpha):
    f = make_gaussian(alpha)
    with mpmath.workdps(34):
        for n in range(21):
            assert abs(to_mpc(f.moment(n)) - quad_moment(f, n)) < 1e-10


def test_poly_gaussian_moments_vs_quadrature():
    f = make_poly_gaussian([1, -2, 0, Fraction(1, 3)], Fraction(1, 2))
    with mpmath.workdps(34):
        for n in range(8):
            m = f.moment(n)
            assert abs(m - quad_moment(f, n)) < 1e-10
            # Taylor coefficient against numerical differentiation
            assert abs(mpmath.mpf(f.taylor(n).numerator) / f.taylor(n).denominator
                       - mpmath.diff(f.eval, 0, n) / mpmath.factorial(n)) < 1e-10


def test_indicator_provider():
    f = make_indicator(0, 1)
    assert f.moment(0) == 1
    assert f.moment(3) == Fraction(1, 4)
    with pytest.raises(CapabilityMissing) as exc:
        f.taylor(0)
    assert exc.value.capability == "taylor"
    with pytest.raises(ValueError):
        make_indicator(1, 1)
    with mpmath.workdps(30):
        assert abs(quad_moment(f, 3) - mpmath.mpf(1) / 4) < 1e-20


def test_capability_missing_names_term():
    with pytest.raises(CapabilityMissing, match="delta\\^\\(2\\)"):
        pair_dist_fn(DELTA(2), make_indicator(0, 1))
    with pytest.raises(CapabilityMissing, match="x\\^3"):
        pair_dist_fn(X(3), make_exp(1))


def test_fn_dist_is_conjugate():
    f = make_gaussian(1)
    F = WeakDistribution(delta={2: ExactScalar(1, 3)})
    assert pair_fn_dist(f, F).value == pair_dist_fn(F, f).value.conjugate()
    G = WeakDistribution({0: ExactScalar(0, 1)})
    with mpmath.workdps(30):
        assert abs(pair_fn_dist(f, G).value - pair_dist_fn(G, f).value.conjugate()) < 1e-25


def test_exact_flag():
    assert pair_dist_fn(psi(4), make_exp(2)).exact
    assert not pair_dist_fn(X(2), make_gaussian(1)).exact
    assert pair_dist_fn(X(2), make_indicator(0, 1)).exact


@pytest.mark.parametrize("spec,label", [
    ("gaussian:alpha=1/2", "gaussian:alpha=1/2"),
    ("indicator:0,1", "indicator:0,1"),
    ("exp:c=1", "exp:c=1"),
])
def test_registry(spec, label):
    assert resolve_test_function(spec).label == label


def test_registry_polygauss():
    f = resolve_test_function("polygauss:1+x^2,alpha=1")
    assert f.taylor(0) == 1 and f.taylor(2) == 0  # (1 + x^2)(1 - x^2 + ...) has no x^2 term
    assert f.taylor(4) == Fraction(1, 2) - 1
    with pytest.raises(ValueError):
        resolve_test_function("bessel:1")
