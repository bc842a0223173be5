import math

import numpy as np
import pytest

from flatqed.boundstate import omega0_for_detuning, small_atom
from flatqed.interactions import (InteractionMatrix, bessel_chain_amplitudes,
                                  effective_hamiltonian, interaction_matrix,
                                  kappa_couplings, spin_dynamics)
from flatqed.lattice import build_chain, build_double_comb, build_sawtooth


def test_two_atoms_one_cavity():
    """All-to-all coupling through a single cavity: K12 = g^2/(omega0 - omega_c)."""
    omega_c, omega0, g = 0.3, 1.5, 2e-3
    model = build_chain(1, onsite=omega_c)
    ems = [small_atom(model, omega0, g, 0, "a") for _ in range(2)]
    K = interaction_matrix(model, ems)
    exact = g * g / (omega0 - omega_c)
    assert abs(K.K[0, 1] - exact) / abs(exact) < 1e-12
    assert abs(K.K[0, 0] - exact) / abs(exact) < 1e-12  # Lamb-shift diagonal


def test_hermiticity_and_reciprocity():
    model = build_sawtooth(40)
    om0 = omega0_for_detuning(model, 0.02)
    ems = [small_atom(model, om0, 1e-3, c, "a") for c in (18, 20, 25)]
    K = interaction_matrix(model, ems)
    assert K.hermiticity_residual() < 1e-12


def test_chain_interaction_range_law():
    """K(d) ~ (-1)^d e^{-d/lambda}: ratio of consecutive couplings."""
    model = build_chain(600)
    delta = 0.01
    om0 = omega0_for_detuning(model, delta, "lower_edge")
    ems = [small_atom(model, om0, 1e-3, 300 + d, "a") for d in (0, 6, 7)]
    K = interaction_matrix(model, ems)
    ratio = (K.K[0, 2] / K.K[0, 1]).real
    lam = math.sqrt(1.0 / delta)
    assert ratio == pytest.approx(-math.exp(-1.0 / lam), rel=2e-2)


def test_doublecomb_cross_cell_suppressed():
    model = build_double_comb(20)
    om0 = 1e-3   # just above the FB at 0, inside the gap
    e_a = small_atom(model, om0, 1e-3, 5, "a")
    e_b = small_atom(model, om0, 1e-3, 5, "b")
    e_far = small_atom(model, om0, 1e-3, 10, "a")
    K = interaction_matrix(model, [e_a, e_b, e_far])
    assert abs(K.K[0, 2]) < 1e-10 * abs(K.K[0, 1])


def test_fb_interaction_detuning_scaling():
    """Near an isolated FB, K * delta is detuning-independent to ~1% over a
    decade (pure 1/(omega0 - omega_FB) prefactor)."""
    model = build_sawtooth(60)
    vals = []
    for delta in (1e-3, 1e-2):
        om0 = omega0_for_detuning(model, delta)
        ems = [small_atom(model, om0, 1e-3, c, "a") for c in (30, 31)]
        K = interaction_matrix(model, ems)
        vals.append(abs(K.K[0, 1]) * delta)
    assert vals[0] == pytest.approx(vals[1], rel=1e-2)


def test_exact_pole_variant_close_to_leading_order():
    model = build_sawtooth(40)
    om0 = omega0_for_detuning(model, 0.05)
    ems = [small_atom(model, om0, 1e-3, c, "a") for c in (18, 21)]
    K0 = interaction_matrix(model, ems)
    K1 = interaction_matrix(model, ems, exact_pole=True)
    assert not K0.exact_pole and K1.exact_pole
    assert abs(K1.K[0, 1] - K0.K[0, 1]) / abs(K0.K[0, 1]) < 1e-3


def test_interaction_matrix_validates_emitters():
    model = build_sawtooth(20)
    e1 = small_atom(model, -1.9, 1e-3, 5, "a")
    e2 = small_atom(model, -1.8, 1e-3, 8, "a")
    with pytest.raises(ValueError):
        interaction_matrix(model, [e1, e2])
    e3 = small_atom(model, -1.9, 2e-3, 8, "a")
    with pytest.raises(ValueError):
        interaction_matrix(model, [e1, e3])
    with pytest.raises(ValueError):
        interaction_matrix(model, [])


def test_effective_hamiltonian_hermitizes():
    K = InteractionMatrix(emitters=(), K=np.array([[0.1, 1 + 1j], [0.9 - 0.9j, 0.1]]))
    H = effective_hamiltonian(K)
    assert np.max(np.abs(H - H.conj().T)) < 1e-15
    assert H[0, 1] == pytest.approx(0.95 + 0.95j)


def test_spin_dynamics_initial_condition_and_norm():
    H = np.array([[0.0, 0.3], [0.3, 0.1]])
    tr = spin_dynamics(H, 0, np.array([0.0, 1.0, 2.0]))
    assert np.allclose(tr.amplitudes[0], [1.0, 0.0])
    assert tr.norm_residual < 1e-10
    assert np.allclose(tr.populations.sum(axis=1), 1.0, atol=1e-10)


def test_spin_dynamics_rejects_nonhermitian():
    with pytest.raises(ValueError):
        spin_dynamics(np.array([[0.0, 1.0], [0.0, 0.0]]), 0, np.array([0.0]))


def test_bessel_oracle_nn_chain():
    """Translation-invariant NN chain: c_n(t) = i^n J_n(-2 kappa1 t)."""
    N, kappa1 = 64, 0.7
    H = np.zeros((N, N))
    for n in range(N):
        H[n, (n + 1) % N] += kappa1
        H[(n + 1) % N, n] += kappa1
    t_grid = np.linspace(0.0, 5.0 / kappa1, 5)
    tr = spin_dynamics(H, 0, t_grid)
    n_idx = np.arange(N)
    dist = np.minimum(n_idx, N - n_idx)     # i^n J_n is even in n
    for i, t in enumerate(t_grid):
        exact = bessel_chain_amplitudes(dist, t, kappa1)
        assert np.max(np.abs(tr.amplitudes[i] - exact)) < 1e-6


def test_rk4_oracle_with_nnn_coupling():
    """kappa2 != 0 has no Bessel form; compare the eigendecomposition
    evolution against small-step RK4 integration of i c' = H c."""
    rng = np.random.default_rng(5)
    N = 16
    kappa1, kappa2 = 0.8, 0.2
    H = np.zeros((N, N))
    for n in range(N):
        H[n, (n + 1) % N] += kappa1
        H[(n + 1) % N, n] += kappa1
        H[n, (n + 2) % N] += kappa2
        H[(n + 2) % N, n] += kappa2
    t_end = 3.0
    tr = spin_dynamics(H, 0, np.array([t_end]))

    c = np.zeros(N, dtype=complex)
    c[0] = 1.0
    steps = 6000
    dt = t_end / steps
    rhs = lambda v: -1j * (H @ v)
    for _ in range(steps):
        k1 = rhs(c)
        k2 = rhs(c + 0.5 * dt * k1)
        k3 = rhs(c + 0.5 * dt * k2)
        k4 = rhs(c + dt * k3)
        c = c + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    assert np.max(np.abs(tr.amplitudes[0] - c)) < 1e-8
    _ = rng  # seeded for future randomized variants


def test_kappa_couplings_formula():
    g, delta_fb, Delta = 1e-3, 0.05, 4.0
    k1, k2 = kappa_couplings(g, delta_fb, Delta)
    assert k1 == pytest.approx(g ** 2 / delta_fb * 8.0 / 36.0)
    assert k2 == pytest.approx(k1 / 8.0)
