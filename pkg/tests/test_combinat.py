"""Partitions, entropies, Kostka numbers, characters, majorization."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import isotypic.combinat as cb


def test_check_distribution_rejects_bad_input():
    with pytest.raises(ValueError):
        cb.check_distribution([0.5, -0.2, 0.7])
    with pytest.raises(ValueError):
        cb.check_distribution([0.5, 0.6])
    out = cb.check_distribution([0.5, 0.5 + 1e-12])
    assert abs(out.sum() - 1.0) < 1e-15


def test_entropy_known_values():
    assert cb.entropy([0.5, 0.5]) == 1.0
    assert cb.entropy([1.0, 0.0]) == 0.0
    assert abs(cb.entropy([0.25] * 4) - 2.0) < 1e-15


def test_kl_known_values_and_support():
    assert cb.kl([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert cb.kl([1.0, 0.0], [0.5, 0.5]) == 1.0
    assert cb.kl([0.5, 0.5], [1.0, 0.0]) == float("inf")
    # unnormalized reference is allowed and shifts by -log2 of its mass
    assert abs(cb.kl([0.5, 0.5], [0.25, 0.25]) - 1.0) < 1e-15


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=5),
       st.lists(st.floats(0.01, 1.0), min_size=2, max_size=5))
def test_kl_nonnegative_property(pw, qw):
    n = min(len(pw), len(qw))
    p = np.array(pw[:n]) / sum(pw[:n])
    q = np.array(qw[:n]) / sum(qw[:n])
    assert cb.kl(p, q) >= -1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6))
def test_entropy_bounds_property(w):
    p = np.array(w) / sum(w)
    h = cb.entropy(p)
    assert -1e-12 <= h <= math.log2(len(p)) + 1e-12


def test_partitions_counts():
    # partition numbers 1, 2, 3, 5, 7, 11, 15, 22
    for n, count in [(1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11),
                     (7, 15), (8, 22)]:
        assert len(cb.partitions(n)) == count
    assert cb.partitions(4, max_rows=2) == [(4,), (3, 1), (2, 2)]


def test_type_class_size_and_enumeration():
    assert cb.type_class_size((2, 1)) == 3
    strings = cb.enumerate_type_class((2, 1))
    assert strings == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert len(cb.enumerate_type_class((2, 2, 1))) == math.factorial(5) // 4


def test_dim_irrep_hook_lengths():
    assert cb.dim_irrep((1, 1, 1)) == 1
    assert cb.dim_irrep((3,)) == 1
    assert cb.dim_irrep((2, 1)) == 2
    assert cb.dim_irrep((3, 2)) == 5
    assert cb.dim_irrep((2, 2, 1)) == 5
    # sum of squares equals n!
    for n in range(2, 8):
        assert sum(cb.dim_irrep(lam) ** 2 for lam in cb.partitions(n)) \
            == math.factorial(n)


def test_conjugate_partition():
    assert cb.conjugate_partition((3, 2)) == (2, 2, 1)
    assert cb.conjugate_partition((4,)) == (1, 1, 1, 1)
    for lam in cb.partitions(6):
        assert cb.conjugate_partition(cb.conjugate_partition(lam)) == lam


def test_kostka_values():
    assert cb.kostka((2, 1), (1, 1, 1)) == 2
    assert cb.kostka((2, 1), (2, 1)) == 1
    assert cb.kostka((1, 1, 1), (2, 1)) == 0
    assert cb.kostka((3,), (1, 1, 1)) == 1
    # column sums: sum over lam of dim(lam) * K(lam, f) = |T_f|
    for f in [(2, 2), (3, 1), (2, 1, 1)]:
        n = sum(f)
        total = sum(cb.dim_irrep(lam) * cb.kostka(lam, f)
                    for lam in cb.partitions(n))
        assert total == cb.type_class_size(f)


def test_character_orthogonality():
    for n in range(2, 7):
        classes = cb.conjugacy_classes(n)
        parts = cb.partitions(n)
        for lam in parts:
            for mu in parts:
                inner = sum(size * cb.character(lam, ct) * cb.character(mu, ct)
                            for ct, size in classes)
                assert inner == (math.factorial(n) if lam == mu else 0)


def test_character_known_values():
    # sign representation on a transposition
    assert cb.character((1, 1, 1), (2, 1)) == -1
    # standard representation of S_3
    assert cb.character((2, 1), (1, 1, 1)) == 2
    assert cb.character((2, 1), (3,)) == -1
    assert cb.character((2, 1), (2, 1)) == 0


def test_perm_cycle_type():
    assert cb.perm_cycle_type((1, 2, 0)) == (3,)
    assert cb.perm_cycle_type((0, 1, 2)) == (1, 1, 1)
    assert cb.perm_cycle_type((1, 0, 3, 2)) == (2, 2)


def test_conjugacy_class_sizes_sum():
    for n in range(2, 8):
        assert sum(size for _, size in cb.conjugacy_classes(n)) \
            == math.factorial(n)


def test_majorizes():
    assert cb.majorizes([0.7, 0.3], [0.6, 0.4])
    assert not cb.majorizes([0.6, 0.4], [0.7, 0.3])
    assert cb.majorizes([0.5, 0.5], [0.5, 0.5])


def test_s_hat_reweighting():
    out = cb.s_hat([0.7, 0.3])
    assert np.allclose(out, [0.4, 0.6])
    assert abs(out.sum() - 1.0) < 1e-12
    out = cb.s_hat([0.5, 0.3, 0.2])
    assert np.allclose(out, [0.2, 0.2, 0.6])
    with pytest.raises(ValueError):
        cb.s_hat([0.3, 0.7])
