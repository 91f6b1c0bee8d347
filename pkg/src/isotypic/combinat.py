"""Partitions, types, entropies, Kostka numbers, characters, majorization.

Index strings are tuples over 0-based symbols {0, ..., d-1}.  Partitions
(Young frames) and frequencies are tuples of nonnegative integers; trailing
zeros are allowed and ignored where appropriate.  All entropic quantities are
in bits.
"""

import itertools
import math
from functools import cache

import numpy as np

ENUMERATION_CAP = 10**6


# ---------------------------------------------------------------------------
# distributions

def check_distribution(p, tol=1e-12):
    """Validate and normalize a probability vector.

    Entries in [-1e-14, 0) are clamped to 0; a total within 1e-10 of 1 is
    renormalized.  Anything worse raises.
    """
    p = np.asarray(p, dtype=float).copy()
    if p.min() < -1e-14:
        raise ValueError("distribution has a negative entry")
    p[p < 0] = 0.0
    s = p.sum()
    if abs(s - 1.0) > 1e-10:
        raise ValueError(f"distribution sums to {s}, not 1")
    return p / s


def entropy(p):
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = check_distribution(p)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def kl(p, q):
    """Relative entropy D(p||q) in bits.

    q may be an unnormalized nonnegative vector (needed when comparing against
    entrywise-modulus matrix columns).  Returns +inf when supp(p) is not
    contained in supp(q).
    """
    p = check_distribution(p)
    q = np.asarray(q, dtype=float)
    if q.min() < -1e-14:
        raise ValueError("second argument has a negative entry")
    q = np.clip(q, 0.0, None)
    mask = p > 0
    if np.any(q[mask] == 0):
        return float("inf")
    return float((p[mask] * np.log2(p[mask] / q[mask])).sum())


# ---------------------------------------------------------------------------
# partitions and types

def check_frame(lam):
    """Validate a weakly decreasing tuple of nonnegative integers."""
    lam = tuple(int(x) for x in lam)
    if any(x < 0 for x in lam):
        raise ValueError("frame rows must be nonnegative")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError("frame rows must be weakly decreasing")
    return lam


def strip_frame(lam):
    """Drop trailing zero rows."""
    lam = tuple(lam)
    while lam and lam[-1] == 0:
        lam = lam[:-1]
    return lam


def partitions(n, max_rows=None, max_part=None):
    """All partitions of n with the given row and part bounds, descending lex."""
    if max_part is None:
        max_part = n
    if max_rows is None:
        max_rows = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        if max_rows == 0:
            break
        for rest in partitions(n - first, max_rows - 1, first):
            out.append((first,) + rest)
    return out


def type_class_size(f):
    """Multinomial coefficient n! / prod f(i)!."""
    f = tuple(int(x) for x in f)
    if any(x < 0 for x in f):
        raise ValueError("frequencies must be nonnegative")
    n = sum(f)
    size = math.factorial(n)
    for x in f:
        size //= math.factorial(x)
    return size


def enumerate_type_class(f, cap=ENUMERATION_CAP):
    """All strings with symbol counts f, in lexicographic order."""
    f = tuple(int(x) for x in f)
    if type_class_size(f) > cap:
        raise ValueError(f"type class size {type_class_size(f)} exceeds cap {cap}")
    symbols = [i for i, c in enumerate(f) for _ in range(c)]
    return _multiset_permutations(tuple(symbols))


def _multiset_permutations(symbols):
    """Lexicographic multiset permutations of a sorted symbol tuple."""
    if not symbols:
        return [()]
    out = []
    seen = set()
    for i, s in enumerate(symbols):
        if s in seen:
            continue
        seen.add(s)
        rest = symbols[:i] + symbols[i + 1:]
        out.extend((s,) + tail for tail in _multiset_permutations(rest))
    return out


@cache
def dim_irrep(lam):
    """Dimension of the S_n irrep labeled by lam, by the hook-length formula."""
    lam = strip_frame(check_frame(lam))
    n = sum(lam)
    if n == 0:
        return 1
    conj = conjugate_partition(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j) + (conj[j] - i) - 1
    return math.factorial(n) // hooks


def conjugate_partition(lam):
    lam = strip_frame(check_frame(lam))
    if not lam:
        return ()
    return tuple(sum(1 for row in lam if row > j) for j in range(lam[0]))


@cache
def kostka(lam, f):
    """Number of semistandard Young tableaux of shape lam and content f.

    Direct backtracking over the symbols in order: placing all copies of each
    symbol as a horizontal strip keeps columns strict automatically.
    """
    lam = strip_frame(check_frame(lam))
    f = tuple(int(x) for x in f)
    if sum(lam) != sum(f):
        raise ValueError("shape and content must have the same box count")
    return _kostka_rec(lam, f)


@cache
def _kostka_rec(shape, content):
    # strip symbols placed so far from the back of content
    content = tuple(content)
    while content and content[-1] == 0:
        content = content[:-1]
    if not content:
        return 1 if all(x == 0 for x in shape) else 0
    count = int(content[-1])
    total = 0
    # remove a horizontal strip of `count` boxes for the largest symbol
    for smaller in _horizontal_strip_removals(shape, count):
        total += _kostka_rec(smaller, content[:-1])
    return total


def _horizontal_strip_removals(shape, count):
    """All shapes obtained by removing a horizontal strip of given size."""
    shape = tuple(shape)
    rows = len(shape)
    out = []

    def rec(i, remaining, acc):
        if i == rows:
            if remaining == 0:
                out.append(tuple(acc))
            return
        below = shape[i + 1] if i + 1 < rows else 0
        # removing r boxes from row i; horizontal strip: new row i >= old row i+1
        for r in range(min(shape[i] - below, remaining) + 1):
            new = shape[i] - r
            if acc and new > acc[-1]:
                continue
            rec(i + 1, remaining - r, acc + [new])

    rec(0, count, [])
    return out


# ---------------------------------------------------------------------------
# symmetric group characters

@cache
def character(lam, cycle_type):
    """Character of the S_n irrep lam on the class with the given cycle type.

    Murnaghan-Nakayama recursion over border-strip removals; exact integers.
    """
    lam = strip_frame(check_frame(lam))
    mu = strip_frame(check_frame(cycle_type))
    if sum(lam) != sum(mu):
        raise ValueError("partition and cycle type must have the same size")
    return _mn(lam, mu)


@cache
def _mn(shape, rho):
    if not rho:
        return 1 if not shape else 0
    r = rho[0]
    rest = rho[1:]
    total = 0
    m = len(shape)
    for a in range(m):
        for b in range(a, m):
            # remove a border strip spanning rows a..b
            new = list(shape)
            for i in range(a, b):
                new[i] = shape[i + 1] - 1
            new[b] = shape[a] - r + (b - a)
            if new[b] < 0:
                continue
            if b + 1 < m and new[b] < shape[b + 1]:
                continue
            if any(new[i] < new[i + 1] for i in range(a, min(b + 1, m - 1))):
                continue
            if a > 0 and new[a] > shape[a - 1]:
                continue
            total += (-1) ** (b - a) * _mn(strip_frame(tuple(new)), rest)
    return total


def perm_cycle_type(tau):
    """Cycle type of a permutation given as a tuple mapping i -> tau(i)."""
    n = len(tau)
    seen = [False] * n
    lengths = []
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = tau[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


@cache
def conjugacy_classes(n):
    """List of (cycle_type, class_size) for S_n."""
    out = []
    for mu in partitions(n):
        z = 1
        for length, mult in _part_multiplicities(mu).items():
            z *= length**mult * math.factorial(mult)
        out.append((mu, math.factorial(n) // z))
    return out


def _part_multiplicities(mu):
    counts = {}
    for x in mu:
        counts[x] = counts.get(x, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# majorization and the s-hat construction

def majorizes(g, f, tol=1e-12):
    """Partial-sum dominance sum_{i<=k} g_i >= sum_{i<=k} f_i for all k.

    No sorting is applied; the caller sorts if needed.
    """
    g = np.asarray(g, dtype=float)
    f = np.asarray(f, dtype=float)
    if g.shape != f.shape:
        raise ValueError("majorization needs equal lengths")
    return bool(np.all(np.cumsum(g) >= np.cumsum(f) - tol))


def s_hat(s):
    """The reweighting s_hat(k) = (s(k) - s(k+1)) * k, with s(d+1) = 0.

    Requires s sorted descending; the output is again a distribution.
    """
    s = check_distribution(s)
    if np.any(np.diff(s) > 1e-12):
        raise ValueError("s must be sorted descending")
    d = len(s)
    ext = np.append(s, 0.0)
    k = np.arange(1, d + 1, dtype=float)
    out = (ext[:-1] - ext[1:]) * k
    return np.clip(out, 0.0, None)
