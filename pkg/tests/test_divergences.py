"""Divergence family: classical reductions, duality, corner operator, limits."""

import math

import numpy as np
import pytest

import isotypic.divergences as dv
import isotypic.matcore as mc


def _classical_renyi(p, q, alpha):
    return math.log2(float(np.sum(p ** alpha * q ** (1 - alpha)))) / (alpha - 1)


def test_relative_entropy_commuting_reduces_to_kl():
    p = np.array([0.7, 0.3])
    q = np.array([0.4, 0.6])
    val = dv.quantum_relative_entropy(np.diag(p), np.diag(q)).value
    want = float(np.sum(p * np.log2(p / q)))
    assert abs(val - want) < 1e-12


def test_relative_entropy_support():
    rho = np.diag([1.0, 0.0]).astype(complex)
    sigma = np.diag([0.0, 1.0]).astype(complex)
    assert dv.quantum_relative_entropy(rho, sigma).value == float("inf")
    assert dv.quantum_relative_entropy(rho, np.diag([0.5, 0.5])).value == 1.0
    tau = mc.random_density(3, 0)
    assert abs(dv.quantum_relative_entropy(tau, tau).value) < 1e-10


def test_alpha_z_commuting_reduces_to_classical_renyi():
    p = np.array([0.6, 0.3, 0.1])
    q = np.array([0.2, 0.3, 0.5])
    for alpha in (0.3, 0.7, 1.5, 2.0):
        for z in (0.5, 1.0, alpha):
            val = dv.alpha_z(np.diag(p), np.diag(q), alpha, z).value
            assert abs(val - _classical_renyi(p, q, alpha)) < 1e-10, (alpha, z)


def test_alpha_z_excluded_parameters():
    rho = mc.random_density(2, 0)
    sigma = mc.random_density(2, 1)
    with pytest.raises(ValueError):
        dv.alpha_z(rho, sigma, 1.0, 1.0)
    with pytest.raises(ValueError):
        dv.alpha_z(rho, sigma, 0.5, 0.0)
    with pytest.raises(ValueError):
        dv.reverse_sandwiched(rho, sigma, 1.5)


def test_sandwiched_is_alpha_alpha_slice():
    rho = mc.random_density(3, 2)
    sigma = mc.random_density(3, 3)
    for alpha in (0.4, 0.8, 1.3):
        assert dv.sandwiched(rho, sigma, alpha).value == \
            dv.alpha_z(rho, sigma, alpha, alpha).value


def test_duality_identity_random_pairs():
    rng = np.random.default_rng(12)
    for d in (2, 3):
        rho = mc.random_density(d, int(rng.integers(1 << 30)))
        sigma = mc.random_density(d, int(rng.integers(1 << 30)))
        for a in (0.1, 0.3, 0.5, 0.7, 0.9):
            lhs = (a - 1) * dv.reverse_sandwiched(rho, sigma, a).value
            rhs = a * dv.sandwiched(sigma, rho, 1 - a).value
            assert abs(lhs + rhs) < 1e-9


def test_alpha_greater_one_infinite_off_support():
    rho = np.diag([1.0, 0.0]).astype(complex)
    sigma = np.diag([0.0, 1.0]).astype(complex)
    out = dv.alpha_z(rho, sigma, 2.0, 1.0)
    assert out.value == float("inf") and not out.support_flag


def test_corner_operator_of_diagonal_is_itself():
    sigma = np.diag([0.5, 0.3, 0.2]).astype(complex)
    assert np.allclose(dv.corner_operator(sigma), sigma.real, atol=1e-14)


def test_corner_operator_telescopes_to_minors():
    sigma = mc.random_density(4, 8)
    corner = np.diag(dv.corner_operator(sigma)).real
    prod = 1.0
    for j in range(1, 5):
        prod *= corner[j - 1]
        assert abs(prod - mc.leading_principal_minor(sigma, j).real) < 1e-12


def test_corner_operator_singular_minor_zeroes_tail():
    sigma = np.diag([0.0, 1.0]).astype(complex)
    corner = np.diag(dv.corner_operator(sigma)).real
    assert corner[0] == 0.0 and corner[1] == 0.0


def test_phi_closed_commuting_is_kl_of_spectra():
    rho = np.diag([0.7, 0.3]).astype(complex)
    sigma = np.diag([0.4, 0.6]).astype(complex)
    # eigenbasis of rho sorts descending, aligning 0.7 with 0.4
    want = 0.7 * math.log2(0.7 / 0.4) + 0.3 * math.log2(0.3 / 0.6)
    assert abs(dv.phi_closed(rho, sigma).value - want) < 1e-12


def test_phi_closed_equals_limit_of_reverse_sandwiched():
    rng = np.random.default_rng(3)
    for _ in range(5):
        s1 = float(rng.uniform(0.65, 0.95))
        V = mc.haar_unitary(2, int(rng.integers(1 << 30)))
        rho = V @ np.diag([s1, 1 - s1]).astype(complex) @ V.conj().T
        sigma = mc.random_density(2, int(rng.integers(1 << 30)))
        est = dv.numeric_limit_alpha1(rho, sigma, lambda a: 1 - a)
        assert abs(est.value - dv.phi_closed(rho, sigma).value) < 1e-3


def test_numeric_limit_z_one_path_gives_relative_entropy():
    rho = mc.random_density(2, 4)
    sigma = mc.random_density(2, 5)
    est = dv.numeric_limit_alpha1(rho, sigma, lambda a: 1.0)
    want = dv.quantum_relative_entropy(rho, sigma).value
    assert abs(est.value - want) < 1e-6


def test_phi_closed_identical_states_is_zero():
    rho = mc.random_density(3, 6)
    assert abs(dv.phi_closed(rho, rho).value) < 1e-9
