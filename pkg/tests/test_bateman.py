import math
import random

import numpy as np
import pytest

from weakpb.bateman import (VACUUM_BATTERY, BatemanParams, FockOperator, ParameterError,
                            SafeSubspace, build_bosonic, build_pb, ccr_residuals, commutator,
                            diagonal_sum_state, fock_index, hamiltonian_bosonic, hamiltonian_pb,
                            hamiltonian_residual, joint_kernel_scan, non_normality,
                            not_adjoint_gap, params_from, pb_residuals, sigma_min,
                            vacuum_battery, weak_vacuum_residual)

P = BatemanParams(1, 0.5, 1)


def random_params(n, seed=3):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        m, g, k = rng.uniform(0.3, 3), rng.uniform(0.05, 2), rng.uniform(0.3, 3)
        if k / m - g * g / (4 * m * m) > 0.05:
            out.append(BatemanParams(m, g, k))
    return out


def test_params():
    assert P.omega2 == pytest.approx(15 / 16)
    with pytest.raises(ParameterError):
        BatemanParams(1, 3, 1)
    with pytest.raises(ParameterError):
        BatemanParams(1, 2, 1)  # omega^2 = 0
    with pytest.raises(ParameterError):
        BatemanParams(-1, 0.1, 1)
    assert params_from("1", "1/2", "1") == P


def test_fock_dimension_and_band():
    for T in (2, 5, 9):
        a1, a2 = build_bosonic(T)
        assert a1.matrix.shape == (math.comb(T + 2, 2),) * 2
        assert a1.band_ok() and a2.dag.band_ok()
    H = hamiltonian_bosonic(P, 8)
    assert H.degree == 2 and H.band_ok()
    with pytest.raises(ValueError):
        FockOperator(np.zeros((3, 3)), 1, 4)


@pytest.mark.parametrize("T", [2, 4, 8, 12, 16])
def test_ccr(T):
    assert max(ccr_residuals(T).values()) < 1e-12


def test_ccr_fails_outside_safe_subspace():
    a1, _ = build_bosonic(6)
    C = commutator(a1, a1.dag) - FockOperator.identity(6)
    assert SafeSubspace(6, 0).residual(C) > 1  # top states see the cutoff


def test_bosonic_entries():
    T = 6
    a1, a2 = build_bosonic(T)
    idx = fock_index(T)
    for n in range(T + 1):
        v = np.zeros(len(idx))
        v[idx[(0, n)]] = 1
        assert np.allclose(a1.matrix @ v, 0)
    v = np.zeros(len(idx))
    v[idx[(1, 1)]] = 1
    out = a2.dag.matrix @ v
    assert out[idx[(1, 2)]] == pytest.approx(math.sqrt(2))
    assert np.count_nonzero(out) == 1


@pytest.mark.parametrize("T", [3, 8, 12])
def test_pb_relations(T):
    assert max(pb_residuals(P, T).values()) < 1e-12


def test_B_is_not_A_dagger():
    gaps = not_adjoint_gap(P, 8)
    assert gaps["B1-A1†"] > 0.9 and gaps["B2-A2†"] > 0.9


@pytest.mark.parametrize("N", [0, 1, 3, 5])
def test_A1_on_diagonal_sum(N):
    T = 2 * N + 1
    A1 = build_pb(P, max(T, 3))[0]
    out = A1.matrix @ diagonal_sum_state(max(T, 3), N)
    idx = fock_index(max(T, 3))
    expected = np.zeros_like(out)
    expected[idx[(N, N + 1)]] = -math.sqrt((N + 1) / 2)
    assert np.allclose(out, expected, atol=1e-13)
    v = diagonal_sum_state(max(T, 3), N, normalized=True)
    assert np.linalg.norm(A1.matrix @ v) == pytest.approx(1 / math.sqrt(2), abs=1e-13)


@pytest.mark.parametrize("params", [P] + random_params(5))
def test_hamiltonian_forms_agree(params):
    assert hamiltonian_residual(params, 8) < 1e-12


def test_hamiltonian_decoupled_limit():
    params = BatemanParams(1, 0, 1)
    H = hamiltonian_pb(params, 8)
    safe = SafeSubspace(8, 2)
    diag = np.array([params.omega * (n1 - n2) for n1, n2 in sorted(fock_index(8), key=fock_index(8).get)])
    assert safe.residual(H - FockOperator(np.diag(diag).astype(complex), 0, 8)) < 1e-12


def test_hamiltonian_is_hermitian():
    # the a-operator form is manifestly self-adjoint: (i a1 a2)† = -i a1† a2†
    H = hamiltonian_bosonic(P, 10)
    assert np.max(np.abs(H.matrix - H.matrix.conj().T)) < 1e-14
    assert non_normality(P, 10) < 1e-12


@pytest.mark.xfail(strict=True, reason="H is Hermitian on the Fock space, hence normal")
def test_hamiltonian_non_normal_claim():
    assert non_normality(P, 10) > 0


def test_kernel_scan():
    table = joint_kernel_scan(P, [4, 6, 8, 10, 12])
    for row in table:
        assert row["sigma_min_A"] > 0.1
        assert row["sigma_min_Bdag"] > 0.1
        assert row["sigma_min_A1_only"] < row["sigma_min_A"]
    # decreasing with T: an empirical output, not a theorem
    sig = [row["sigma_min_A"] for row in table]
    assert all(b < a for a, b in zip(sig, sig[1:]))


def test_sigma_min_oracle_small_T():
    # brute force: min eigenvalue of A1†A1 + A2†A2 on safe states
    A1, A2, _, _ = build_pb(P, 4)
    M = sum(op.on_safe(3).conj().T @ op.on_safe(3) for op in (A1, A2))
    assert sigma_min((A1, A2), 3) == pytest.approx(math.sqrt(np.linalg.eigvalsh(M).min()), rel=1e-10)


@pytest.mark.parametrize("which", ["phi00", "psi00"])
def test_vacuum_battery(which):
    rows = vacuum_battery(P, which)
    assert len(rows) == 12 == len(VACUUM_BATTERY)
    assert all(max(r["residual_1"], r["residual_2"]) < 1e-8 for r in rows)


def test_vacuum_specific_functions():
    assert max(abs(v) for v in weak_vacuum_residual(P, "phi00", "1").values()) < 1e-10
    assert max(abs(v) for v in weak_vacuum_residual(P, "phi00", "x1**2*x2").values()) < 1e-8


def test_perturbed_vacuum_fails():
    rows = vacuum_battery(P, "phi00", offset=0.1)
    assert any(max(r["residual_1"], r["residual_2"]) > 1e-3 for r in rows)
    rows = vacuum_battery(P, "psi00", offset=0.1, battery=VACUUM_BATTERY[:3])
    assert any(max(r["residual_1"], r["residual_2"]) > 1e-3 for r in rows)


def test_vacuum_input_validation():
    with pytest.raises(ValueError):
        weak_vacuum_residual(P, "phi00", "x1**9")
    with pytest.raises(ValueError):
        weak_vacuum_residual(P, "chi00", "1")
