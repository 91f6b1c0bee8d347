"""Quantum divergence family: D, the alpha-z family, and the corner operator.

All values are in bits.  Singular arguments follow the support convention:
matrix powers are taken on the support with 0^t = 0 for t > 0, and a quantity
is +inf exactly when its defining trace diverges under that convention.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .combinat import kl

SUPPORT_TOL = 1e-12


@dataclass
class DivergenceValue:
    """A divergence in bits together with a support-inclusion flag."""

    value: float
    support_flag: bool

    def __float__(self):
        return float(self.value)


@dataclass
class LimitEstimate:
    """Richardson-extrapolated limit with an error estimate."""

    value: float
    error: float
    converged: bool


def _support_projector(w, V, tol=SUPPORT_TOL):
    mask = w > 100 * tol * max(w.max(), 1.0)
    return V[:, mask] @ V[:, mask].conj().T, mask


def _supported(rho, sigma):
    """Whether supp(rho) is contained in supp(sigma)."""
    wr, Vr = mc.hermitian_eig(rho)
    ws, Vs = mc.hermitian_eig(sigma)
    _, mask_s = _support_projector(ws, Vs)
    ker = Vs[:, ~mask_s]
    if ker.shape[1] == 0:
        return True
    leak = np.linalg.norm(ker.conj().T @ rho @ ker)
    return leak <= 1e-10


def _matrix_power(H, t):
    """H^t for Hermitian PSD H, on the support, with 0^t = 0 for t > 0."""
    w, V = mc.hermitian_eig(H)
    w = np.clip(w.real, 0.0, None)
    out = np.zeros_like(w)
    nz = w > 100 * SUPPORT_TOL * max(w.max(), 1.0)
    out[nz] = w[nz] ** t
    return (V * out) @ V.conj().T


def _scaled_power_logmax(H, t):
    """log2 of the eigenvalue factored out of the scaled power, 0 if t = 0."""
    if t == 0:
        return 0.0
    w = np.clip(np.linalg.eigvalsh(np.asarray(H, complex)), 0.0, None)
    return math.log2(w.max()) if w.max() > 0 else 0.0


def _matrix_power_scaled(H, t):
    """(H / lambda_max)^t on the support; top eigenvalue normalized to 1."""
    w, V = mc.hermitian_eig(H)
    w = np.clip(w.real, 0.0, None)
    if t == 0 or w.max() <= 0:
        return np.eye(H.shape[0], dtype=complex) if t == 0 else np.asarray(H, complex) * 0
    wn = w / w.max()
    out = np.zeros_like(wn)
    nz = wn > 0
    with np.errstate(under="ignore"):
        out[nz] = wn[nz] ** t
    return (V * out) @ V.conj().T


def quantum_relative_entropy(rho, sigma):
    """D(rho||sigma) = tr{rho (log2 rho - log2 sigma)} on supp(rho)."""
    rho = mc.check_density(rho)
    sigma = mc.check_density(sigma)
    if not _supported(rho, sigma):
        return DivergenceValue(float("inf"), False)
    wr, Vr = mc.hermitian_eig(rho)
    ws, Vs = mc.hermitian_eig(sigma)
    wr = np.clip(wr.real, 0.0, None)
    t1 = float(sum(x * math.log2(x) for x in wr if x > SUPPORT_TOL))
    log_sig = np.zeros_like(ws)
    nz = ws > SUPPORT_TOL
    log_sig[nz] = np.log2(ws[nz])
    # on supp(sigma) only; the support check above makes the rest irrelevant
    L = (Vs * log_sig) @ Vs.conj().T
    t2 = float(np.trace(rho @ L).real)
    return DivergenceValue(t1 - t2, True)


def alpha_z(rho, sigma, alpha, z):
    """alpha-z relative entropy (1/(alpha-1)) log2 tr{(rho^{a/z} sigma^{(1-a)/z})^z}.

    The trace is evaluated through the positive Hermitian form
    sigma^{(1-a)/2z} rho^{a/z} sigma^{(1-a)/2z}, which has the same spectrum.
    """
    rho = mc.check_density(rho)
    sigma = mc.check_density(sigma)
    if alpha == 1:
        raise ValueError("alpha = 1 is excluded; use the numerical limit")
    if z <= 0:
        raise ValueError("z must be positive")
    supported = _supported(rho, sigma)
    if alpha > 1 and not supported:
        return DivergenceValue(float("inf"), False)
    a_exp = alpha / z
    b_exp = (1 - alpha) / (2 * z)
    # exponents like alpha/z blow up along the z -> 0 paths, grading the
    # spectrum of the Hermitian form across hundreds of orders of magnitude;
    # tr{X^z} with small z needs every eigenvalue, so recover the log
    # spectrum exactly from top eigenvalues of the exterior powers of X
    log_eigs = _form_log_spectrum(rho, sigma, a_exp, b_exp)
    finite = [le for le in log_eigs if le is not None]
    if not finite:
        return DivergenceValue(float("inf"), supported)
    top = max(finite)
    with np.errstate(under="ignore"):
        log_tr = z * top + math.log2(
            float(sum(2.0 ** (z * (le - top)) for le in finite)))
    return DivergenceValue(log_tr / (alpha - 1), supported)


def _compound(A, k):
    """k-th exterior power: entries are k x k minors of A."""
    from itertools import combinations
    idx = list(combinations(range(A.shape[0]), k))
    out = np.empty((len(idx), len(idx)), dtype=complex)
    for i, I in enumerate(idx):
        for j, J in enumerate(idx):
            out[i, j] = np.linalg.det(A[np.ix_(I, J)])
    return out


def _form_log_spectrum(rho, sigma, a_exp, b_exp):
    """log2 eigenvalues of sigma^b rho^a sigma^b, None for exact zeros.

    Works through Y_k = (wedge^k sigma)^b (wedge^k rho)^a (wedge^k sigma)^b:
    the top eigenvalue of Y_k is the product of the k largest eigenvalues of
    the form, and stays representable after scaling out the top eigenvalue of
    each power even when a_exp or b_exp is huge.
    """
    d = rho.shape[0]
    log_prods = [0.0]
    for k in range(1, d + 1):
        ck_r = _compound(np.asarray(rho, complex), k)
        ck_s = _compound(np.asarray(sigma, complex), k)
        lr = _scaled_power_logmax(ck_r, a_exp)
        ls = _scaled_power_logmax(ck_s, b_exp)
        half = _matrix_power_scaled(ck_s, b_exp)
        core = half @ _matrix_power_scaled(ck_r, a_exp) @ half
        wmax = float(np.linalg.eigvalsh((core + core.conj().T) / 2).max())
        if wmax <= 0:
            log_prods.append(None)
        else:
            log_prods.append(a_exp * lr + 2 * b_exp * ls + math.log2(wmax))
    out = []
    for k in range(1, d + 1):
        if log_prods[k] is None or log_prods[k - 1] is None:
            out.append(None)
        else:
            out.append(log_prods[k] - log_prods[k - 1])
    return out


def sandwiched(rho, sigma, alpha):
    """Sandwiched Renyi divergence D-tilde_alpha = D_{alpha,alpha}."""
    if alpha == 1:
        raise ValueError("alpha = 1 is excluded; use the numerical limit")
    return alpha_z(rho, sigma, alpha, alpha)


def reverse_sandwiched(rho, sigma, alpha):
    """Reverse sandwiched Renyi divergence D-hat_alpha = D_{alpha,1-alpha}."""
    if alpha in (0, 1):
        raise ValueError("alpha in {0, 1} is excluded")
    if alpha > 1:
        raise ValueError("z = 1 - alpha must stay positive")
    return alpha_z(rho, sigma, alpha, 1 - alpha)


def corner_operator(sigma, d=None):
    """Diagonal matrix of leading-principal-minor ratios of a PSD matrix.

    Entry i is det(sigma_{1:i,1:i}) / det(sigma_{1:i-1,1:i-1}) with the empty
    minor equal to 1, so the partial products telescope back to the minors.
    A singular leading minor makes the later entries 0, which propagates to
    +inf in the divergences that consume the result.
    """
    sigma = mc.check_psd(sigma)
    if d is None:
        d = sigma.shape[0]
    minors = [1.0] + [mc.leading_principal_minor(sigma, k).real
                      for k in range(1, d + 1)]
    out = np.zeros(d)
    for i in range(d):
        if minors[i] > SUPPORT_TOL:
            out[i] = max(minors[i + 1], 0.0) / minors[i]
    return np.diag(out)


def phi_closed(rho, sigma):
    """Closed form for the alpha -> 1 limit of the reverse sandwiched family.

    Equals D(diag(spec rho) || corner(U sigma U^dag)) with U the descending
    eigenbasis of rho.
    """
    rho = mc.check_density(rho)
    sigma = mc.check_density(sigma)
    w, V = mc.hermitian_eig(rho)
    sigma_rot = V.conj().T @ sigma @ V
    corner = np.diag(corner_operator(sigma_rot)).real
    full_rank = np.linalg.eigvalsh(sigma).min() > SUPPORT_TOL
    value = kl(np.clip(w.real, 0.0, None), corner)
    return DivergenceValue(value, full_rank)


def numeric_limit_alpha1(rho, sigma, path, eps_list=(1e-2, 1e-3, 1e-4)):
    """Richardson extrapolation of D_{alpha,z(alpha)} as alpha -> 1.

    path: callable z(alpha), sampled at alpha = 1 -/+ eps; a side is skipped
    when its z is nonpositive (the z = 1 - alpha path only exists below 1).
    Symmetric two-sided samples cancel the odd error term, so the step ratio
    entering the extrapolation is squared in that case.
    """
    vals = []
    symmetric = True
    for eps in eps_list:
        sides = []
        for a in (1 - eps, 1 + eps):
            zz = path(a)
            if zz > 0:
                sides.append(alpha_z(rho, sigma, a, zz).value)
        if not sides:
            raise ValueError("path z(alpha) is nonpositive on both sides")
        if len(sides) == 1:
            symmetric = False
        vals.append(sum(sides) / len(sides))
    ratio = (eps_list[0] / eps_list[1]) ** (2 if symmetric else 1)
    seq = list(vals)
    estimates = []
    while len(seq) > 1:
        seq = [(ratio * seq[i + 1] - seq[i]) / (ratio - 1)
               for i in range(len(seq) - 1)]
        estimates.append(seq[-1])
    value = estimates[-1]
    error = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 \
        else abs(value - vals[-1])
    converged = error < 10 * abs(vals[-1] - vals[-2]) + 1e-9
    return LimitEstimate(float(value), float(error), bool(converged))
