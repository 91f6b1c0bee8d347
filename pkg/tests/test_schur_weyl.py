"""Projector blocks, special vectors, and their algebraic identities."""

import itertools
import math

import numpy as np
import pytest

import isotypic.combinat as cb
import isotypic.matcore as mc
import isotypic.schur_weyl as sw


def test_projector_f_lambda_validates_and_has_expected_trace():
    # trace of the (f, lam) projector is dim F_lam times the Kostka number
    for d, n in ((2, 4), (2, 5), (3, 4)):
        for f in sw.types_for(n, d):
            for lam in sw.frames_for(n, d):
                P = sw.projector_f_lambda(f, lam, d=d).validate()
                fs = tuple(sorted(f, reverse=True))
                expected = cb.dim_irrep(lam) * cb.kostka(lam, fs)
                assert abs(P.trace() - expected) < 1e-8, (f, lam)


def test_type_projectors_resolve_identity():
    for d, n in ((2, 4), (3, 3)):
        total = sum(sw.projector_f_full(f, d).matrix
                    for f in sw.types_for(n, d))
        assert np.allclose(total, np.eye(d ** n), atol=1e-12)


def test_central_projectors_commute_with_permutations():
    n, d = 4, 2
    P = sw.projector_lambda(n, d, (3, 1)).matrix
    for tau in [(1, 0, 2, 3), (1, 2, 3, 0)]:
        B = np.zeros_like(P)
        codes = sw.strings_to_codes(sw._digits(n, d), d)
        for c, x in enumerate(sw._digits(n, d)):
            y = sw.permute_string(tau, tuple(x))
            B[sw.strings_to_codes(np.array([y]), d)[0], c] = 1.0
        assert np.allclose(B @ P, P @ B, atol=1e-12)


def test_central_projectors_orthogonal_and_complete():
    n, d = 5, 2
    frames = sw.frames_for(n, d)
    mats = [sw.projector_lambda(n, d, lam).matrix for lam in frames]
    total = sum(mats)
    assert np.allclose(total, np.eye(d ** n), atol=1e-10)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            assert np.abs(mats[i] @ mats[j]).max() < 1e-10


def test_antisym_vector_unit_norm_and_minor_identity():
    # <v_k, sigma^(x k) v_k> equals the k-th leading principal minor
    rng = np.random.default_rng(2)
    for d in (2, 3, 4):
        sigma = mc.random_density(d, int(rng.integers(1 << 30)))
        for k in range(1, d + 1):
            v = sw.antisym_vector(k, d).validate()
            u = mc.tensor_power_apply(sigma, k, v.amplitudes)
            got = float(np.real(np.vdot(v.amplitudes, u)))
            want = mc.leading_principal_minor(sigma, k).real
            assert abs(got - want) < 1e-12, (d, k)
    with pytest.raises(ValueError):
        sw.antisym_vector(3, 2)


def test_sym_type_vector_unit_norm_and_support():
    v = sw.sym_type_vector((2, 1), 2).validate()
    # supported exactly on the type class, with equal amplitudes
    codes = sw.strings_to_codes(np.array(cb.enumerate_type_class((2, 1))), 2)
    amp = v.amplitudes
    assert np.allclose(sorted(codes), np.nonzero(amp)[0])
    assert np.allclose(amp[codes], 1 / math.sqrt(3))


def test_highest_weight_vector_lies_in_its_component():
    for d, f, lam in ((2, (3, 1), (3, 1)), (2, (2, 2), (3, 1)),
                      (3, (2, 1, 1), (2, 1, 1))):
        n = sum(f)
        if cb.kostka(lam, tuple(sorted(f, reverse=True))) == 0:
            continue
        v = sw.highest_weight_vector(f, lam, d=d)
        P = sw.projector_f_lambda(f, lam, d=d)
        codes = sw.strings_to_codes(P.basis, d)
        restricted = v.amplitudes[codes]
        assert np.linalg.norm(P.matrix @ restricted - restricted) < 1e-10
        assert abs(np.linalg.norm(v.amplitudes) - 1.0) < 1e-10


def test_dimension_cap_raises():
    with pytest.raises(ValueError):
        sw.projector_lambda(9, 2, (5, 4))
    assert sw.default_cap(2) == 8
    assert sw.default_cap(3) == 6
