"""Operator algebra, dissipator, superoperator and time evolution."""

import math

import numpy as np
import pytest

from thermalpair import (
    ModelParams,
    PositivityError,
    build_kossakowski_closed,
    build_superoperator,
    canonical_state,
    choi_matrix,
    dissipator_apply,
    evolve,
    evolve_traj,
    pauli_op,
    singlet_density,
    tau,
    unvec,
    validate_density_matrix,
    vec,
)
from thermalpair.dynamics import SIGMA, hamiltonian

from util import random_density, random_params

E3 = np.array([0.0, 0.0, 1.0])
P_L0 = ModelParams(omega=1.0, beta=1.0, ell=0.0)
K_L0 = build_kossakowski_closed(P_L0)
M_L0 = build_superoperator(K_L0, P_L0)


def ket(index):
    v = np.zeros(4, dtype=complex)
    v[index] = 1.0
    return v


# ------------------------------------------------------------- pauli algebra

def test_pauli_op_values():
    np.testing.assert_array_equal(pauli_op(1, 3), np.kron(SIGMA[2], np.eye(2)))
    np.testing.assert_array_equal(pauli_op(2, 1), np.kron(np.eye(2), SIGMA[0]))


def test_pauli_ops_commute_across_atoms():
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            a, b = pauli_op(1, i), pauli_op(2, j)
            np.testing.assert_allclose(a @ b - b @ a, 0, atol=1e-16)


def test_pauli_op_rejects_bad_indices():
    with pytest.raises(ValueError):
        pauli_op(3, 1)
    with pytest.raises(ValueError):
        pauli_op(1, 0)


# ---------------------------------------------------------------- dissipator

def test_singlet_is_dark_state_at_zero_separation():
    for beta in (0.3, 1.0, math.inf):
        K = build_kossakowski_closed(ModelParams(omega=1.0, beta=beta, ell=0.0))
        drho = dissipator_apply(K, singlet_density())
        assert np.abs(drho).max() < 1e-14


def test_dissipator_is_traceless_and_hermiticity_preserving():
    rng = np.random.default_rng(21)
    for _ in range(50):
        K = build_kossakowski_closed(random_params(rng))
        rho = random_density(rng)
        drho = dissipator_apply(K, rho)
        assert abs(np.trace(drho)) < 1e-13
        np.testing.assert_allclose(drho, drho.conj().T, atol=1e-13)


def test_thermal_excitation_from_double_ground():
    # from |--><--| single quanta flow into |+-> and |-+> at finite T; the
    # doubly excited population grows only at second order in time
    rho_gg = np.outer(ket(3), ket(3).conj())
    drho = dissipator_apply(K_L0, rho_gg)
    assert drho[1, 1].real > 0.0
    assert drho[2, 2].real > 0.0
    assert abs(drho[0, 0]) < 1e-15
    rho_t = evolve(M_L0, rho_gg, 0.5)
    assert rho_t[0, 0].real > 0.0


def test_dissipator_rejects_wrong_shape():
    with pytest.raises(ValueError):
        dissipator_apply(K_L0, np.eye(3, dtype=complex))


# -------------------------------------------------------------- superoperator

def test_superoperator_matches_dissipator():
    rng = np.random.default_rng(22)
    for _ in range(100):
        rho = random_density(rng)
        lhs = unvec(M_L0 @ vec(rho))
        rhs = dissipator_apply(K_L0, rho)
        assert np.abs(lhs - rhs).max() < 1e-13


def test_superoperator_spectrum():
    rng = np.random.default_rng(23)
    for _ in range(20):
        p = random_params(rng)
        M = build_superoperator(build_kossakowski_closed(p), p)
        ev = np.linalg.eigvals(M)
        assert np.abs(ev).min() < 1e-10 * max(np.abs(ev).max(), 1.0)  # stationary state
        assert ev.real.max() <= 1e-12 * max(np.abs(ev).max(), 1.0)   # contraction


def test_superoperator_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(24)
    # left action on the trace functional vanishes
    assert np.abs(vec(np.eye(4)).conj() @ M_L0).max() < 1e-13
    for _ in range(20):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = h + h.conj().T
        image = unvec(M_L0 @ vec(h))
        np.testing.assert_allclose(image, image.conj().T, atol=1e-12)


def test_superoperator_with_hamiltonian():
    p = ModelParams(omega=1.3, beta=0.7, ell=0.4)
    K = build_kossakowski_closed(p)
    M = build_superoperator(K, p, include_hs=True)
    h = hamiltonian(p)
    rng = np.random.default_rng(25)
    for _ in range(20):
        rho = random_density(rng)
        expected = dissipator_apply(K, rho) - 1j * (h @ rho - rho @ h)
        assert np.abs(unvec(M @ vec(rho)) - expected).max() < 1e-13
    ev = np.linalg.eigvals(M)
    assert ev.real.max() <= 1e-12 * np.abs(ev).max()


def test_superoperator_requires_params_for_hamiltonian():
    with pytest.raises(ValueError):
        build_superoperator(K_L0, include_hs=True)


# -------------------------------------------------------------------- evolve

def test_evolve_identity_at_zero_time():
    rho0 = canonical_state(E3).density()
    np.testing.assert_array_equal(evolve(M_L0, rho0, 0.0), rho0)


def test_evolve_semigroup_law():
    rng = np.random.default_rng(26)
    for _ in range(10):
        rho0 = random_density(rng)
        t1, t2 = rng.uniform(0.1, 5.0, size=2)
        via_steps = evolve(M_L0, evolve(M_L0, rho0, t1), t2)
        direct = evolve(M_L0, rho0, t1 + t2)
        assert np.abs(via_steps - direct).max() < 1e-10


def test_evolve_keeps_singlet_stationary():
    for t in (0.5, 5.0, 50.0):
        rho_t = evolve(M_L0, singlet_density(), t)
        assert np.abs(rho_t - singlet_density()).max() < 1e-12


def test_evolve_rejects_negative_time():
    with pytest.raises(ValueError):
        evolve(M_L0, singlet_density(), -1.0)


def test_evolve_flags_positivity_violation():
    # reversed generator drives a pure product state out of the state space
    with pytest.raises(PositivityError):
        evolve(-M_L0, canonical_state(E3).density(), 5.0)


def test_positivity_preserved_forward():
    rng = np.random.default_rng(27)
    for _ in range(20):
        p = random_params(rng)
        M = build_superoperator(build_kossakowski_closed(p), p)
        rho0 = random_density(rng)
        t = float(rng.uniform(0.0, 50.0 / p.omega))
        rho_t = evolve(M, rho0, t)
        assert np.linalg.eigvalsh(rho_t).min() >= -1e-10
        assert abs(np.trace(rho_t).real - 1.0) < 1e-12


# ---------------------------------------------------------------- trajectory

def test_evolve_traj_trivial_grid():
    rho0 = canonical_state(E3).density()
    traj = evolve_traj(M_L0, rho0, [0.0])
    assert len(traj.states) == 1
    np.testing.assert_array_equal(traj.states[0], rho0)


def test_evolve_traj_agrees_with_rk_and_conserves():
    rng = np.random.default_rng(28)
    rho0 = random_density(rng)
    times = np.linspace(0.0, 40.0, 21)
    traj = evolve_traj(M_L0, rho0, times)  # raises if expm/RK45 disagree > 1e-8
    tau0 = tau(rho0)
    for rho in traj.states:
        assert abs(np.trace(rho).real - 1.0) < 1e-12
        assert abs(tau(rho) - tau0) < 1e-9  # collective generator conserves tau


def test_evolve_traj_rejects_bad_grid():
    rho0 = singlet_density()
    with pytest.raises(ValueError):
        evolve_traj(M_L0, rho0, [0.0, 1.0, 0.5])
    with pytest.raises(ValueError):
        evolve_traj(M_L0, rho0, [-1.0, 1.0])


# -------------------------------------------------------- CP witness (Choi)

def test_choi_matrix_is_positive():
    rng = np.random.default_rng(29)
    for _ in range(10):
        p = random_params(rng)
        M = build_superoperator(build_kossakowski_closed(p), p)
        choi = choi_matrix(M, 0.1 / p.omega)
        np.testing.assert_allclose(choi, choi.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(choi).min() >= -1e-10


# ----------------------------------------------------------------- tau, misc

def test_tau_reference_values():
    assert tau(singlet_density()) == pytest.approx(-3.0, abs=1e-14)
    rho_mp = np.outer(np.kron([0, 1], [1, 0]), np.kron([0, 1], [1, 0]))
    assert tau(rho_mp.astype(complex)) == pytest.approx(-1.0, abs=1e-14)
    assert tau(np.eye(4, dtype=complex) / 4.0) == pytest.approx(0.0, abs=1e-14)


def test_validate_density_matrix_rejects_bad_states():
    with pytest.raises(ValueError):
        validate_density_matrix(np.eye(4, dtype=complex))  # trace 4
    bad = np.eye(4, dtype=complex) / 4.0
    bad[0, 1] = 0.5
    with pytest.raises(ValueError):
        validate_density_matrix(bad)  # not Hermitian
    neg = np.diag([0.7, 0.5, -0.1, -0.1]).astype(complex)
    with pytest.raises(ValueError):
        validate_density_matrix(neg)
