"""Matrix primitives: validators, eigensystems, Haar sampling, tensor apply."""

import numpy as np
import pytest

import isotypic.matcore as mc


def test_haar_unitary_is_unitary_and_deterministic():
    for d in (2, 3, 5):
        U = mc.haar_unitary(d, 0)
        assert np.allclose(U @ U.conj().T, np.eye(d), atol=1e-12)
        assert np.allclose(U, mc.haar_unitary(d, 0))
    assert not np.allclose(mc.haar_unitary(3, 0), mc.haar_unitary(3, 1))


def test_random_density_is_state():
    for d in (2, 3, 4):
        rho = mc.random_density(d, 7)
        assert np.allclose(rho, rho.conj().T)
        assert abs(np.trace(rho).real - 1.0) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-14


def test_hermitian_eig_descending_and_reconstructs():
    rho = mc.random_density(4, 3)
    w, V = mc.hermitian_eig(rho)
    assert np.all(np.diff(w) <= 1e-14)
    assert np.allclose((V * w) @ V.conj().T, rho, atol=1e-12)


def test_check_density_rejects():
    with pytest.raises(ValueError):
        mc.check_density(np.array([[0.5, 0.1], [0.3, 0.5]]))  # not Hermitian
    with pytest.raises(ValueError):
        mc.check_density(np.diag([0.7, 0.7]))  # trace 1.4
    with pytest.raises(ValueError):
        mc.check_density(np.diag([1.5, -0.5]))  # not PSD


def test_check_unitary():
    mc.check_unitary(mc.haar_unitary(3, 1))
    with pytest.raises(ValueError):
        mc.check_unitary(np.diag([1.0, 2.0]))


def test_leading_principal_minor():
    sigma = np.array([[0.7, 0.2], [0.2, 0.3]], dtype=complex)
    assert abs(mc.leading_principal_minor(sigma, 1) - 0.7) < 1e-15
    assert abs(mc.leading_principal_minor(sigma, 2)
               - (0.7 * 0.3 - 0.04)) < 1e-15


def test_tensor_power_apply_matches_kron():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    direct = np.kron(np.kron(A, A), A) @ v
    assert np.allclose(mc.tensor_power_apply(A, 3, v), direct, atol=1e-12)

    B = rng.standard_normal((3, 3))
    w = rng.standard_normal(9)
    assert np.allclose(mc.tensor_power_apply(B, 2, w),
                       np.kron(B, B) @ w, atol=1e-12)
