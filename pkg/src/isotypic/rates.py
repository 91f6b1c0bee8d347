"""Convex-optimization layer: I-projections, growth exponents, closed forms.

Distributions over ordered k-tuples are kept sparse (dict keyed by tuples of
0-based symbols).  All divergences are in bits.  Growth exponents
g = lim (1/n) log2 of a trace are the primitive quantity; each rate is -g.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import matcore as mc
from .combinat import check_distribution, entropy, kl, majorizes, s_hat

KKT_TOL = 1e-8


@dataclass
class TupleDistribution:
    """Sparse distribution over ordered k-tuples of [d] symbols (0-based)."""

    k: int
    d: int
    probs: dict

    def total(self):
        return float(sum(self.probs.values()))

    def marginal(self, i):
        """Mass of tuples containing symbol i (each at most once here)."""
        return float(sum(v for x, v in self.probs.items() if i in x))


@dataclass
class MarginalConstraint:
    """Constraint set P(q, k): mass of tuples containing i equals k*q(i)."""

    d: int
    k: int
    q: np.ndarray

    def feasible(self, tol=1e-12):
        q = np.asarray(self.q, dtype=float)
        return bool(np.all(self.k * q <= 1 + tol)) and abs(q.sum() - 1) <= 1e-10


@dataclass
class RateValue:
    """A rate/exponent with minimizer artifacts and solver diagnostics."""

    value: float
    artifacts: dict = field(default_factory=dict)
    iterations: int = 0
    gap: float = float("nan")


def _tuples(d, k):
    return list(itertools.permutations(range(d), k))


def p_k_distribution(A, k):
    """|<e_x, A^(x k) v_k>|^2 = |det A[x, 1:k]|^2 / k! on repetition-free tuples."""
    A = mc.check_square(A)
    d = A.shape[0]
    if k > d:
        raise ValueError("k must not exceed the dimension")
    fact = math.factorial(k)
    probs = {}
    for x in _tuples(d, k):
        probs[x] = abs(np.linalg.det(A[np.ix_(x, range(k))])) ** 2 / fact
    return TupleDistribution(k, d, probs)


def cauchy_binet_check(U, k, j):
    """Mass of tuples containing j under p_k(U) vs the first k row entries."""
    U = mc.check_unitary(U)
    lhs = p_k_distribution(U, k).marginal(j)
    rhs = float(np.sum(np.abs(U[j, :k]) ** 2))
    return lhs, rhs, abs(lhs - rhs)


# ---------------------------------------------------------------------------
# I-projection

def _exp_family(references, shats, theta):
    """Tilted distributions p_k(x) ~ r_k(x) prod_{i in x} e^theta_i.

    Returns per-branch normalized dicts and log partition values (nats).
    """
    out, logZ = [], []
    for ref in references:
        logits = {x: math.log(v) + sum(theta[i] for i in x)
                  for x, v in ref.probs.items() if v > 0}
        m = max(logits.values())
        weights = {x: math.exp(l - m) for x, l in logits.items()}
        Z = sum(weights.values())
        out.append({x: w / Z for x, w in weights.items()})
        logZ.append(m + math.log(Z))
    return out, logZ


def i_projection(reference, constraint):
    """min D(p || reference) over p in P(q, k), with the tilting multipliers.

    Exponential-family dual: the optimum is reference tilted by per-symbol
    factors; the d dual variables are found by BFGS on the convex dual.
    Returns (value in bits, argmin TupleDistribution, info dict).
    """
    k, d = reference.k, reference.d
    q = check_distribution(constraint.q)
    if not constraint.feasible():
        return float("inf"), None, {"reason": "infeasible marginals"}
    support = {x for x, v in reference.probs.items() if v > 0}
    for i in range(d):
        if k * q[i] > 1e-12 and not any(i in x for x in support):
            return float("inf"), None, {"reason": "empty support intersection"}
    # symbols forced out by a zero marginal shrink the support
    dead = {i for i in range(d) if k * q[i] <= 1e-12}
    ref = TupleDistribution(k, d, {
        x: v for x, v in reference.probs.items()
        if v > 0 and not dead & set(x)})
    if not ref.probs:
        return float("inf"), None, {"reason": "empty support intersection"}
    target = k * q

    def dual(theta):
        tilted, logZ = _exp_family([ref], [1.0], theta)
        val = logZ[0] - float(np.dot(target, theta))
        marg = np.zeros(d)
        for x, v in tilted[0].items():
            for i in x:
                marg[i] += v
        return val, marg - target

    # far-from-feasible multipliers overflow the dual transiently; harmless
    with np.errstate(over="ignore", invalid="ignore"):
        res = optimize.minimize(dual, np.zeros(d), jac=True, method="BFGS",
                                options={"gtol": 1e-12, "maxiter": 2000})
    tilted, _ = _exp_family([ref], [1.0], res.x)
    argmin = TupleDistribution(k, d, tilted[0])
    value = float(sum(v * math.log2(v / ref.probs[x])
                      for x, v in argmin.probs.items() if v > 0))
    residual = float(np.max(np.abs(res.jac)))
    info = {"multipliers": res.x, "residual": residual,
            "iterations": int(res.nit)}
    if residual > 100 * KKT_TOL:
        return float("inf"), argmin, {**info, "reason": "dual diverged"}
    return value, argmin, info


# ---------------------------------------------------------------------------
# Theta for general d

def theta_minimizer_location(s, U):
    """q-tilde(i) = sum_k s-hat(k) (1/k) sum_{l <= k} |u_{il}|^2."""
    U = mc.check_unitary(U)
    s = check_distribution(s)
    sh = s_hat(s)
    d = len(s)
    W = np.abs(np.asarray(U, complex)) ** 2
    out = np.zeros(d)
    for k in range(1, d + 1):
        if sh[k - 1] <= 0:
            continue
        out += sh[k - 1] * W[:, :k].sum(axis=1) / k
    return check_distribution(out)


def theta_growth(q, s, A):
    """Growth exponent H(s) - min sum_k (s-hat(k)/k) D(p^{(k)} || p_k(A)).

    The minimum runs over per-branch distributions p^{(k)} in P(W(delta_k), k)
    whose marginals mix back to q.  At the joint optimum every branch is the
    reference tilted by one common set of per-symbol factors, so the problem
    reduces to d dual variables solved on the convex dual.
    """
    A = mc.check_square(A)
    q = check_distribution(q)
    s = check_distribution(s)
    sh = s_hat(s)
    d = len(q)
    ks = [k for k in range(1, d + 1) if sh[k - 1] > 0]
    refs = [p_k_distribution(A, k) for k in ks]
    weights = np.array([sh[k - 1] / k for k in ks])

    def dual(theta):
        tilted, logZ = _exp_family(refs, weights, theta)
        val = float(np.dot(weights, logZ) - np.dot(q, theta))
        marg = np.zeros(d)
        for w, t in zip(weights, tilted):
            for x, v in t.items():
                for i in x:
                    marg[i] += w * v
        return val, marg - q

    # far-from-feasible multipliers overflow the dual transiently; harmless
    with np.errstate(over="ignore", invalid="ignore"):
        res = optimize.minimize(dual, np.zeros(d), jac=True, method="BFGS",
                                options={"gtol": 1e-12, "maxiter": 5000})
    tilted, _ = _exp_family(refs, weights, res.x)
    residual = float(np.max(np.abs(res.jac)))
    if residual > 100 * KKT_TOL:
        return RateValue(float("-inf"),
                         {"reason": "no feasible mixture", "residual": residual},
                         iterations=int(res.nit), gap=residual)
    penalty = 0.0
    q_ks, inner = [], []
    for w, ref, t, k in zip(weights, refs, tilted, ks):
        div = sum(v * math.log2(v / ref.probs[x]) for x, v in t.items() if v > 0)
        penalty += w * div
        marg = np.zeros(d)
        for x, v in t.items():
            for i in x:
                marg[i] += v
        q_ks.append(marg / k)
        inner.append(TupleDistribution(k, d, t))
    value = entropy(s) - penalty
    return RateValue(float(value),
                     {"W_columns": q_ks, "inner": inner,
                      "multipliers": res.x, "ks": ks},
                     iterations=int(res.nit), gap=residual)


def norm_estimate_check(s, U, q_ks, p_ks, tol=1e-8):
    """sum_k s-hat(k) ||p(.|k) - p_k||_1 >= ||q - q-tilde||_1 for valid inputs.

    q is the s-hat mixture of the per-branch marginals q_k; each p(.|k) must
    lie in P(q_k, k) for the reference p_k(U).
    """
    U = mc.check_unitary(U)
    s = check_distribution(s)
    sh = s_hat(s)
    d = len(s)
    ks = [k for k in range(1, d + 1) if sh[k - 1] > 0]
    if len(q_ks) != len(ks) or len(p_ks) != len(ks):
        raise ValueError("need one q_k and one p(.|k) per active branch")
    q = np.zeros(d)
    lhs = 0.0
    for k, qk, pk in zip(ks, q_ks, p_ks):
        qk = check_distribution(qk)
        ref = p_k_distribution(U, k)
        for i in range(d):
            if abs(pk.marginal(i) - k * qk[i]) > 1e-8:
                raise ValueError(f"p(.|k={k}) violates its marginal constraint")
        q += sh[k - 1] * qk
        keys = set(ref.probs) | set(pk.probs)
        lhs += sh[k - 1] * sum(abs(pk.probs.get(x, 0.0) - ref.probs.get(x, 0.0))
                               for x in keys)
    rhs = float(np.abs(q - theta_minimizer_location(s, U)).sum())
    return lhs, rhs, bool(lhs >= rhs - tol)


# ---------------------------------------------------------------------------
# d = 2 closed forms

def dbar(p, X):
    """min over W with W(p) = p of sum_j p(j) D(W(delta_j) || |X_{.j}|).

    The stochastic matrices fixing p form the one-parameter family
    W_a = [[1-a, a p1/p2], [a, 1 - a p1/p2]]; the objective is convex in a
    and solved by bounded scalar minimization.
    """
    p = check_distribution(p)
    Xm = np.abs(np.asarray(X, complex))
    if len(p) != 2 or Xm.shape != (2, 2):
        raise ValueError("dbar is a d = 2 quantity")
    if p[1] <= 0:
        return RateValue(kl([1.0, 0.0], Xm[:, 0]), {"a": 0.0})
    amax = min(1.0, p[1] / p[0]) if p[0] > 0 else 1.0

    def objective(a):
        cols = np.array([[1 - a, a * p[0] / p[1]],
                         [a, 1 - a * p[0] / p[1]]])
        val = sum(p[j] * kl(cols[:, j], Xm[:, j]) for j in range(2))
        # cap +inf so the bounded minimizer can step away from dead columns
        return min(val, 1e30)

    res = optimize.minimize_scalar(objective, bounds=(0.0, amax),
                                   method="bounded",
                                   options={"xatol": 1e-12})
    ends = [(objective(a), a) for a in (0.0, amax)]
    best = min(ends + [(float(res.fun), float(res.x))])
    return RateValue(float(best[0]), {"a": best[1]},
                     iterations=int(getattr(res, "nfev", 0)))


def theta1(A, p, q):
    """Rate of the type-block mass of A^dag^(x n) applied to a type vector.

    Each term of the underlying sum is an amplitude, so the coupling
    divergence runs against the entrywise MODULUS of A^dag and enters twice:
    value = H(p) + H(q) + 2 min D(r || |A^dag|) over couplings r with
    marginals q (row) and p (column).  Verified against the finite-n oracle;
    the coupling set is the one-parameter 2x2 family.
    """
    A = mc.check_square(A)
    p = check_distribution(p)
    q = check_distribution(q)
    if A.shape[0] != 2:
        raise ValueError("theta1 is a d = 2 quantity")
    M = np.abs(np.asarray(A, complex).conj().T)
    lo = max(0.0, p[0] + q[0] - 1.0)
    hi = min(p[0], q[0])
    if lo > hi + 1e-12:
        return RateValue(float("inf"), {"reason": "no coupling"})

    def coupling(t):
        return np.array([[t, q[0] - t], [p[0] - t, 1 - p[0] - q[0] + t]])

    def objective(t):
        return min(kl(coupling(t).reshape(-1), M.reshape(-1)), 1e30)

    if hi - lo < 1e-14:
        t_star, val = lo, objective(lo)
    else:
        res = optimize.minimize_scalar(objective, bounds=(lo, hi),
                                       method="bounded",
                                       options={"xatol": 1e-13})
        cands = [(objective(t), t) for t in (lo, hi)] + [(float(res.fun), float(res.x))]
        val, t_star = min(cands)
    if val >= 1e29:
        return RateValue(float("inf"), {"reason": "support mismatch"})
    return RateValue(float(entropy(p) + entropy(q) + 2 * val),
                     {"coupling": coupling(t_star), "t": t_star})


def theta2(A, q):
    """(1/2) min D(p || p_2A) over p in P(q, 2); +inf unless q = (1/2, 1/2).

    p_2A(i, j) = |<e_i x e_j, A^dag^(x 2) v_2>|^2 lives on the two ordered
    pairs without repetition, where the marginal constraint is vacuous.
    """
    A = mc.check_square(A)
    q = check_distribution(q)
    if A.shape[0] != 2:
        raise ValueError("theta2 is a d = 2 quantity")
    if abs(q[0] - 0.5) > 1e-10:
        return RateValue(float("inf"), {"reason": "P(q,2) empty for q != 1/2"})
    B = A.conj().T
    # <e_i x e_j, B^(x2) v_2> = (B[i,0] B[j,1] - B[i,1] B[j,0]) / sqrt(2)
    m01 = abs(B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]) ** 2 / 2
    m10 = abs(B[1, 0] * B[0, 1] - B[1, 1] * B[0, 0]) ** 2 / 2
    total = m01 + m10
    if total <= 0:
        return RateValue(float("inf"), {"reason": "degenerate reference"})
    # free minimization of D over the pair: optimum is proportional to the
    # (possibly unnormalized) reference masses
    val = -math.log2(total)
    argmin = TupleDistribution(2, 2, {(0, 1): m01 / total, (1, 0): m10 / total})
    return RateValue(0.5 * val, {"argmin": argmin, "masses": (m01, m10)})


def delta_a_closed(p, s, sigma, A):
    """Rate -H(s) - s2 log2 det X + (s1 - s2) dbar(rescaled p || X), X = A^dag sigma A.

    +inf when s fails to majorize sorted p.  The degenerate spectrum
    s1 = s2 skips the dbar term (zero weight).
    """
    p = check_distribution(p)
    s = check_distribution(s)
    sigma = mc.check_psd(sigma)
    A = mc.check_square(A)
    if len(p) != 2:
        raise ValueError("delta_a_closed is a d = 2 quantity")
    if not majorizes(s, np.sort(p)[::-1], tol=1e-12):
        return RateValue(float("inf"), {"reason": "majorization violated"})
    X = A.conj().T @ sigma @ A
    det = np.linalg.det(X).real
    if det <= 0:
        return RateValue(float("inf"), {"reason": "singular conjugated state"})
    base = -entropy(s) - s[1] * math.log2(det)
    gap = s[0] - s[1]
    if gap <= 1e-14:
        return RateValue(float(base), {"X": X})
    ptil = np.array([(p[0] - s[1]) / gap, (p[1] - s[1]) / gap])
    ptil = np.clip(ptil, 0.0, None)
    inner = dbar(ptil, X)
    return RateValue(float(base + gap * inner.value),
                     {"X": X, "p_rescaled": ptil, "dbar": inner})
