"""Exact finite-n traces, frame rounding, and the rate-series fit."""

import math

import numpy as np
import pytest

import isotypic.combinat as cb
import isotypic.matcore as mc
import isotypic.oracle as orc
import isotypic.rates as rt
from isotypic.divergences import phi_closed


def _minor_product(lam, sigma):
    out = float(cb.dim_irrep(lam))
    ext = list(lam) + [0]
    for j in range(1, len(lam) + 1):
        out *= mc.leading_principal_minor(sigma, j).real ** (ext[j - 1] - ext[j])
    return out


def test_trace_state_matches_minor_product():
    rng = np.random.default_rng(1)
    for d, n in ((2, 5), (3, 4)):
        sigma = mc.random_density(d, int(rng.integers(1 << 30)))
        for lam in cb.partitions(n, max_rows=d):
            got = orc.trace_state(lam, lam, sigma)
            assert abs(got - _minor_product(lam, sigma)) < 1e-12 * max(
                1.0, abs(got))


def test_trace_state_methods_agree():
    sigma = mc.random_density(2, 9)
    for lam in [(4, 2), (5, 1), (3, 3)]:
        a = orc.trace_state(lam, lam, sigma, method="schur")
        b = orc.trace_state(lam, lam, sigma, method="projector")
        assert abs(a - b) < 1e-12


def test_trace_conjugated_routes_agree_and_distinct_frames_vanish():
    A = mc.haar_unitary(2, 3)
    f, g = (4, 2), (3, 3)
    a = orc.trace_conjugated(f, (4, 2), g, A, method="schur")
    b = orc.trace_conjugated(f, (4, 2), g, A, method="projector")
    assert abs(a - b) < 1e-12
    assert orc.trace_conjugated(f, (4, 2), g, A, lam_right=(5, 1)) == 0.0


def test_trace_conjugated_cyclic_in_conjugation():
    # tr{P A^(x n) P' A^(dag x n)} is invariant under A -> A^dag here
    A = mc.haar_unitary(2, 11)
    val_a = orc.trace_conjugated((3, 2), (3, 2), (4, 1), A)
    val_b = orc.trace_conjugated((4, 1), (3, 2), (3, 2), A.conj().T)
    assert abs(val_a - val_b) < 1e-12


def test_frame_rounding_feasible_and_majorizing():
    rng = np.random.default_rng(4)
    for _ in range(50):
        s = np.sort(rng.dirichlet([2, 1]))[::-1]
        p = 0.6 * s + 0.4 * np.array([0.5, 0.5])
        for n in range(2, 12):
            f, lam = orc.frame_rounding(p, s, n)
            assert sum(f) == n and sum(lam) == n
            assert cb.majorizes(np.array(lam) / n, np.array(sorted(f, reverse=True)) / n)


def test_fit_rate_limit_recovers_model():
    n = np.arange(4, 21)
    r = 0.37 + 1.3 * np.log2(n) / n - 0.8 / n
    r_inf, resid = orc.fit_rate_limit(n, r)
    assert abs(r_inf - 0.37) < 1e-12
    assert resid < 1e-12


def test_rate_series_identical_commuting_pair_converges_to_zero():
    rho = np.diag([0.7, 0.3]).astype(complex)
    series = orc.rate_series("phi", range(4, 21), rho=rho, sigma=rho)
    assert abs(series.r_inf) <= 0.02
    assert all(t > 0 for t in series.t_values)


def test_rate_series_theta_matches_growth_exponent():
    rng = np.random.default_rng(13)
    U = mc.haar_unitary(2, 7)
    s = np.array([0.7, 0.3])
    q_tilde = rt.theta_minimizer_location(s, U)
    q = 0.5 * q_tilde + 0.5 * np.array([0.5, 0.5])
    closed = -rt.theta_growth(q, s, U).value
    series = orc.rate_series("theta", range(4, 9), q=q, s=s, A=U)
    assert abs(series.r_inf - closed) <= 0.1


def test_rate_series_theta1_matches_coupling_form():
    A = np.array([[0.9, 0.4], [0.3, 0.8]], dtype=complex)
    p = np.array([0.65, 0.35])
    q = np.array([0.55, 0.45])
    closed = rt.theta1(A, p, q).value
    series = orc.rate_series("theta1", range(4, 9), p=p, q=q, A=A)
    assert abs(series.r_inf - closed) <= 0.1


def test_rate_series_theta2_unitary_is_flat_zero():
    U = mc.haar_unitary(2, 21)
    series = orc.rate_series("theta2", range(2, 11), q=[0.5, 0.5], A=U)
    assert series.n_values == [2, 4, 6, 8, 10]
    assert series.skipped == [3, 5, 7, 9]
    assert abs(series.r_inf) < 1e-10


def test_rate_series_phi_tracks_closed_form():
    rng = np.random.default_rng(6)
    V = mc.haar_unitary(2, 1)
    rho = V @ np.diag([0.8, 0.2]).astype(complex) @ V.conj().T
    W = mc.haar_unitary(2, 2)
    sigma = W @ np.diag([0.7, 0.3]).astype(complex) @ W.conj().T
    series = orc.rate_series("phi", range(4, 11), rho=rho, sigma=sigma)
    assert abs(series.r_inf - phi_closed(rho, sigma).value) <= 0.05
    # raw rates are kept alongside the detrended fit input
    assert len(series.r_values) == len(series.r_detrended) == len(series.n_values)


def test_rate_series_rejects_unknown_quantity():
    with pytest.raises(ValueError):
        orc.rate_series("nope", [2, 3])
