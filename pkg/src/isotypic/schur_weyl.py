"""Permutation action, isotypic projectors, and special vectors on (C^d)^(x n).

The permutation tau acts on index strings by (tau . x)_i = x_{tau^{-1}(i)};
its linear extension B(tau) is a permutation matrix satisfying the
composition law B(tau) B(ups) = B(tau o ups).

Projectors are built block-wise per type class: every operand of interest
commutes with the type projector P_f, so the full d^n space is only ever
materialized for small cross-checks.  The central projector P_lam is
assembled from conjugacy-class sums with exact integer character
coefficients.
"""

import itertools
import math
from dataclasses import dataclass
from functools import cache

import numpy as np

from .combinat import (
    character,
    check_frame,
    dim_irrep,
    enumerate_type_class,
    partitions,
    perm_cycle_type,
    strip_frame,
    type_class_size,
)

PROJECTOR_TOL = 1e-10

#: default caps on n keyed by d; beyond d=3 the class-sum tables get large
DEFAULT_N_CAP = {1: 12, 2: 8, 3: 6}


def default_cap(d):
    return DEFAULT_N_CAP.get(d, 5)


def _check_cap(n, d, n_cap=None):
    cap = default_cap(d) if n_cap is None else n_cap
    if n > cap:
        raise ValueError(f"n = {n} exceeds the cap {cap} for d = {d}")


@dataclass
class ProjectorBlock:
    """An operator stored restricted to a permutation-closed basis block."""

    n: int
    d: int
    basis: np.ndarray  # (B, n) int array of index strings
    matrix: np.ndarray

    def trace(self):
        return float(np.trace(self.matrix).real)

    def validate(self, tol=PROJECTOR_TOL):
        M = self.matrix
        if np.abs(M - M.conj().T).max() > tol:
            raise ValueError("projector block is not Hermitian")
        if np.abs(M @ M - M).max() > tol:
            raise ValueError("projector block is not idempotent")
        tr = np.trace(M).real
        if abs(tr - round(tr)) > 1e-8:
            raise ValueError(f"projector trace {tr} is not an integer")
        return self


@dataclass
class SpecialVector:
    """A unit vector on (C^d)^(x n), stored dense over all d^n strings."""

    n: int
    d: int
    amplitudes: np.ndarray

    def validate(self, tol=1e-12):
        if abs(np.linalg.norm(self.amplitudes) - 1.0) > 100 * tol:
            raise ValueError("special vector is not unit norm")
        return self


# ---------------------------------------------------------------------------
# string codes and the permutation action

def _powers(n, d):
    # big-endian digit weights so lexicographic string order = code order
    return d ** np.arange(n - 1, -1, -1, dtype=np.int64)


@cache
def _digits(n, d):
    """Array of shape (d^n, n): the string for every code, lex order."""
    codes = np.arange(d**n, dtype=np.int64)
    out = np.empty((d**n, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = codes % d
        codes //= d
    return out


def strings_to_codes(S, d):
    S = np.asarray(S, dtype=np.int64)
    return S @ _powers(S.shape[1], d)


def permute_string(tau, x):
    """Apply tau to a single index string: result_i = x_{tau^{-1}(i)}."""
    n = len(tau)
    out = [0] * n
    for j in range(n):
        out[tau[j]] = x[j]
    return tuple(out)


def compose(tau, ups):
    """(tau o ups)(i) = tau(ups(i))."""
    return tuple(tau[ups[i]] for i in range(len(tau)))


def permute_vector(tau, v, d):
    """Apply B(tau) to a dense vector over all d^n index strings."""
    v = np.asarray(v)
    n = len(tau)
    if v.shape != (d**n,):
        raise ValueError("vector length does not match d^n")
    D = _digits(n, d)
    w = _powers(n, d)
    tau = np.asarray(tau, dtype=np.int64)
    newcodes = D @ w[tau]
    out = np.empty_like(v)
    out[newcodes] = v
    return out


# ---------------------------------------------------------------------------
# conjugacy-class sums on a basis block

@cache
def _perm_groups(n):
    """All permutations of [n] grouped by cycle type."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    groups = {}
    for idx in range(perms.shape[0]):
        ct = perm_cycle_type(tuple(perms[idx]))
        groups.setdefault(ct, []).append(idx)
    groups = {ct: np.array(ix, dtype=np.int64) for ct, ix in groups.items()}
    return perms, groups


def _block_basis(n, d, f):
    """Basis strings of a type class (or the full space for f = None)."""
    if f is None:
        return _digits(n, d)
    f = tuple(f) + (0,) * (d - len(f))
    return np.array(enumerate_type_class(f), dtype=np.int64).reshape(-1, n)


@cache
def _class_sums(n, d, f):
    """Per-conjugacy-class sums of B(tau) restricted to a basis block.

    Returns (basis, {cycle_type: sum matrix}).  The basis block must be
    closed under the permutation action; type classes and the full basis are.
    """
    basis = _block_basis(n, d, f)
    B = basis.shape[0]
    w = _powers(n, d)
    codes = basis @ w
    perms, groups = _perm_groups(n)
    # newcodes[b, t] = code of (tau_t . basis[b]); uses sum_j x_j w[tau(j)]
    newcodes = basis @ w[perms].T
    if f is None:
        pos = newcodes
    else:
        pos = np.searchsorted(codes, newcodes)
    cols = np.arange(B, dtype=np.int64)
    sums = {}
    for ct, idxs in groups.items():
        M = np.zeros((B, B))
        sub = pos[:, idxs]
        np.add.at(M, (sub.ravel(), np.repeat(cols, idxs.shape[0])), 1.0)
        sums[ct] = M
    return basis, sums


# ---------------------------------------------------------------------------
# projectors

def projector_f(f, d=None, n_cap=None):
    """Diagonal projector onto the span of the type class T_f, on its block."""
    f = tuple(int(x) for x in f)
    if d is None:
        d = len(f)
    n = sum(f)
    _check_cap(n, d, n_cap)
    basis = _block_basis(n, d, f)
    return ProjectorBlock(n, d, basis, np.eye(basis.shape[0]))


def projector_f_full(f, d=None, n_cap=None):
    """P_f as a diagonal 0/1 matrix on the full d^n basis."""
    f = tuple(int(x) for x in f)
    if d is None:
        d = len(f)
    n = sum(f)
    _check_cap(n, d, n_cap)
    D = _digits(n, d)
    diag = np.ones(D.shape[0], dtype=bool)
    for i in range(d):
        diag &= (D == i).sum(axis=1) == (f[i] if i < len(f) else 0)
    return ProjectorBlock(n, d, D, np.diag(diag.astype(float)))


def projector_lambda(n, d, lam, f=None, n_cap=None):
    """Central projector (dim F_lam / n!) sum_tau chi_lam(tau) B(tau).

    Assembled from conjugacy-class sums; restricted to the type class T_f
    when f is given, else on the full d^n basis.
    """
    _check_cap(n, d, n_cap)
    lam = strip_frame(check_frame(lam))
    if sum(lam) != n:
        raise ValueError("frame box count must equal n")
    key = None if f is None else tuple(int(x) for x in f)
    basis, sums = _class_sums(n, d, key)
    B = basis.shape[0]
    M = np.zeros((B, B))
    for ct, S in sums.items():
        chi = character(lam, ct)
        if chi:
            M += chi * S
    M *= dim_irrep(lam) / math.factorial(n)
    return ProjectorBlock(n, d, basis, M)


def projector_f_lambda(f, lam, d=None, n_cap=None):
    """P_{f,lam} = P_f P_lam restricted to the T_f block."""
    f = tuple(int(x) for x in f)
    if d is None:
        d = len(f)
    n = sum(f)
    # P_f is the identity on its own block, so the restriction is just P_lam
    return projector_lambda(n, d, lam, f=f, n_cap=n_cap)


def frames_for(n, d):
    """All Young frames with n boxes and at most d rows."""
    return partitions(n, max_rows=d)


def types_for(n, d):
    """All frequencies f over [d] with total n, lexicographic."""
    out = []
    for combo in itertools.product(range(n + 1), repeat=d):
        if sum(combo) == n:
            out.append(combo)
    return out


# ---------------------------------------------------------------------------
# special vectors

def antisym_vector(k, d=None):
    """Unit-norm antisymmetrizer v_k of e_1 x ... x e_k, embedded in (C^d)^k.

    Amplitude sgn(tau)/sqrt(k!) on each permutation string of (1..k).
    """
    if d is None:
        d = k
    if k > d:
        raise ValueError("antisymmetric vector vanishes for k > d")
    amp = np.zeros(d**k)
    w = _powers(k, d)
    norm = 1.0 / math.sqrt(math.factorial(k))
    for tau in itertools.permutations(range(k)):
        amp[np.asarray(tau, dtype=np.int64) @ w] = _perm_sign(tau) * norm
    return SpecialVector(k, d, amp)


def _perm_sign(tau):
    return 1 if sum(len(c) - 1 for c in _cycles(tau)) % 2 == 0 else -1


def _cycles(tau):
    seen = [False] * len(tau)
    cycles = []
    for i in range(len(tau)):
        if seen[i]:
            continue
        c = []
        j = i
        while not seen[j]:
            seen[j] = True
            c.append(j)
            j = tau[j]
        cycles.append(c)
    return cycles


def sym_type_vector(g, d=None):
    """Unit uniform superposition over the type class T_g."""
    g = tuple(int(x) for x in g)
    if d is None:
        d = len(g)
    n = sum(g)
    size = type_class_size(g)
    amp = np.zeros(d**n)
    basis = _block_basis(n, d, g)
    amp[strings_to_codes(basis, d)] = 1.0 / math.sqrt(size)
    return SpecialVector(n, d, amp)


def highest_weight_vector(f, lam, d=None):
    """A unit vector spanning a copy of F_lam inside V_f.

    For f = lam (any d): the product of antisymmetrizers
    v = x_k v_k^(x (lam_k - lam_{k+1})), taken with k descending.  For d = 2
    and f != lam: v = v_2^(x lam_2) x v_{f - lam_2}, defined when both
    f(i) >= lam_2.
    """
    f = tuple(int(x) for x in f)
    lam = strip_frame(check_frame(lam))
    if d is None:
        d = len(f)
    n = sum(f)
    if sum(lam) != n:
        raise ValueError("frame and frequency must have the same box count")
    lam_ext = lam + (0,) * (d + 1 - len(lam))
    if strip_frame(f) == lam:
        amp = np.ones(1)
        for k in range(d, 0, -1):
            mult = lam_ext[k - 1] - lam_ext[k]
            for _ in range(mult):
                amp = np.kron(amp, antisym_vector(k, d).amplitudes)
        return SpecialVector(n, d, amp)
    if d != 2:
        raise ValueError("f != lam is only constructed for d = 2")
    lam2 = lam_ext[1]
    g = tuple(x - lam2 for x in f)
    if any(x < 0 for x in g):
        raise ValueError("needs f(i) >= lam_2 for both symbols")
    amp = np.ones(1)
    v2 = antisym_vector(2, 2).amplitudes
    for _ in range(lam2):
        amp = np.kron(amp, v2)
    if sum(g):
        amp = np.kron(amp, sym_type_vector(g, 2).amplitudes)
    return SpecialVector(n, d, amp)


# ---------------------------------------------------------------------------
# Young symmetrizer

def young_symmetrizer_apply(tableau, v, d):
    """Apply the Young symmetrizer E_T = sum_{t in R_T, u in C_T} sgn(u) B(t o u).

    The tableau is a list of rows of 0-based positions in [n]; rows give the
    symmetrized subsets, columns the antisymmetrized ones.  The column
    antisymmetrizer acts first, so basis strings carrying a repeated value in
    some column are annihilated.
    """
    rows = [list(r) for r in tableau]
    n = sum(len(r) for r in rows)
    v = np.asarray(v, dtype=complex)
    if v.shape != (d**n,):
        raise ValueError("vector length does not match d^n")
    ncols = max(len(r) for r in rows)
    cols = [[r[j] for r in rows if j < len(r)] for j in range(ncols)]
    acc = np.zeros_like(v)
    for ups_parts in itertools.product(*[itertools.permutations(c) for c in cols]):
        ups = list(range(n))
        sign = 1
        for c, img in zip(cols, ups_parts):
            for src, dst in zip(c, img):
                ups[src] = dst
            sign *= _perm_sign([c.index(x) for x in img])
        acc += sign * permute_vector(ups, v, d)
    out = np.zeros_like(v)
    for taus in itertools.product(*[itertools.permutations(r) for r in rows]):
        tau = list(range(n))
        for r, img in zip(rows, taus):
            for src, dst in zip(r, img):
                tau[src] = dst
        out += permute_vector(tau, acc, d)
    return out
