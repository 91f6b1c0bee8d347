"""Exact finite-n traces and empirical rate series.

Every asymptotic rate in the package is anchored to the exact quantities
computed here.  Two independent routes are available for the central traces:
the explicit block projector (conjugacy-class sums) and a Schur-averaging
shortcut through an explicit highest-weight vector, valid whenever the
isotypic component has multiplicity one (always for d = 2, and for f = lam
in general).  The two routes are cross-checked in the test suite.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import matcore as mc
from .combinat import (
    check_distribution,
    dim_irrep,
    kostka,
    majorizes,
    strip_frame,
    type_class_size,
)
from .schur_weyl import (
    _block_basis,
    default_cap,
    highest_weight_vector,
    projector_f_lambda,
    strings_to_codes,
    sym_type_vector,
)


class InfeasibleError(ValueError):
    """Raised when no frame rounding satisfies the majorization constraint."""


# ---------------------------------------------------------------------------
# exact traces

def _sigma_weight(S_col, S_row, sigma):
    """Weight matrix T[y, x] = prod_i sigma[x_i, y_i] over two string blocks."""
    T = np.ones((S_row.shape[0], S_col.shape[0]), dtype=complex)
    for i in range(S_col.shape[1]):
        T *= sigma[S_col[None, :, i], S_row[:, None, i]]
    return T


def trace_state(f, lam, sigma, d=None, method="auto"):
    """tr{P_{f,lam} sigma^(x n)}, exact at finite n.

    method: "projector" builds the block projector explicitly; "schur" uses
    dim F_lam * <w, sigma^(x n) w> with w an explicit highest-weight vector
    (multiplicity-one cases only); "auto" picks the projector route below the
    n cap and the schur route above it.
    """
    f = tuple(int(x) for x in f)
    lam = strip_frame(lam)
    sigma = np.asarray(sigma, dtype=complex)
    if d is None:
        d = sigma.shape[0]
    n = sum(f)
    if sum(lam) != n:
        raise ValueError("frame and frequency must have the same box count")
    if kostka(lam, tuple(sorted(f, reverse=True))) == 0:
        return 0.0
    if method == "auto":
        method = "projector" if n <= default_cap(d) else "schur"
    if method == "projector":
        P = projector_f_lambda(f, lam, d=d)
        T = _sigma_weight(P.basis, P.basis, sigma)
        return float(np.sum(P.matrix * T).real)
    if method == "schur":
        if kostka(lam, tuple(sorted(f, reverse=True))) != 1:
            raise ValueError("schur route needs a multiplicity-one component")
        w = highest_weight_vector(f, lam, d=d)
        val = np.vdot(w.amplitudes, mc.tensor_power_apply(sigma, n, w.amplitudes))
        return float(dim_irrep(lam) * val.real)
    raise ValueError(f"unknown method {method!r}")


def trace_conjugated(f, lam, g, A, d=None, lam_right=None, method="auto"):
    """tr{P_{f,lam} A^(x n) P_{g,lam'} A^(dag x n)}, exact at finite n.

    lam_right defaults to lam; distinct frames give exactly 0 (the central
    projectors are orthogonal), which is also verified numerically in tests.
    """
    f = tuple(int(x) for x in f)
    g = tuple(int(x) for x in g)
    lam = strip_frame(lam)
    lam_right = lam if lam_right is None else strip_frame(lam_right)
    A = np.asarray(A, dtype=complex)
    if d is None:
        d = A.shape[0]
    n = sum(f)
    if sum(g) != n:
        raise ValueError("both frequencies must have the same total")
    if lam != lam_right:
        return 0.0
    fs = tuple(sorted(f, reverse=True))
    gs = tuple(sorted(g, reverse=True))
    if kostka(lam, fs) == 0 or kostka(lam, gs) == 0:
        return 0.0
    if method == "auto":
        method = "schur" if kostka(lam, fs) == 1 else "projector"
    if method == "schur":
        # A^dag^(x n) commutes with the permutation action, so it keeps
        # u = A^dag^(x n) w inside the lam-isotypic component; the g-block
        # projector then acts as plain restriction to the type class
        w = highest_weight_vector(f, lam, d=d)
        u_full = mc.tensor_power_apply(A.conj().T, n, w.amplitudes)
        u = u_full[strings_to_codes(_block_basis(n, d, g), d)]
        return float(dim_irrep(lam) * np.sum(np.abs(u) ** 2))
    Pg = projector_f_lambda(g, lam, d=d)
    Pf = projector_f_lambda(f, lam, d=d)
    # cross-block kernel K[x, u] = prod_i A[x_i, u_i], x in T_f, u in T_g
    K = np.ones((Pf.basis.shape[0], Pg.basis.shape[0]), dtype=complex)
    for i in range(n):
        K *= A[Pf.basis[:, None, i], Pg.basis[None, :, i]]
    M = Pf.matrix @ K @ Pg.matrix @ K.conj().T
    return float(np.trace(M).real)


def overlap_vf(f, sigma, d=None):
    """<v_f, sigma^(x n) v_f> for the uniform type-class vector v_f."""
    f = tuple(int(x) for x in f)
    sigma = np.asarray(sigma, dtype=complex)
    if d is None:
        d = sigma.shape[0]
    S = _block_basis(sum(f), d, f)
    T = _sigma_weight(S, S, sigma)
    return float(T.sum().real) / type_class_size(f)


# ---------------------------------------------------------------------------
# frame rounding

def largest_remainder(vec, n):
    """Round n * vec to integers summing to n, largest remainders first."""
    vec = np.asarray(vec, dtype=float)
    scaled = n * vec
    base = np.floor(scaled).astype(int)
    deficit = n - base.sum()
    order = np.argsort(-(scaled - base), kind="stable")
    out = base.copy()
    out[order[:deficit]] += 1
    return out


def frame_rounding(p, s, n):
    """Integer frames (f, lam) tracking (p, s) with lam majorizing sorted f.

    Largest-remainder rounding of n*p and n*s followed by a repair pass that
    moves single boxes of lam across the violated prefix, preferring the
    most under- and over-rounded rows and breaking ties toward lower row
    index.  Raises InfeasibleError when s does not majorize sorted p (the
    rate is +inf in that case).
    """
    p = check_distribution(p)
    s = check_distribution(s)
    d = len(s)
    if not majorizes(s, np.sort(p)[::-1], tol=1e-9):
        raise InfeasibleError("s does not majorize the sorted target type")
    f = largest_remainder(p, n)
    lam = np.sort(largest_remainder(s, n))[::-1]
    fsort = np.sort(f)[::-1]
    target = n * s
    for _ in range(d * n + 1):
        cums = np.cumsum(lam) - np.cumsum(fsort)
        bad = np.nonzero(cums < 0)[0]
        if bad.size == 0:
            break
        k = bad[0]
        # add a box at j <= k, remove at m > k, keeping lam a partition
        j_opts = [j for j in range(k + 1) if j == 0 or lam[j - 1] > lam[j]]
        m_opts = [m for m in range(k + 1, d)
                  if lam[m] > 0 and (m == d - 1 or lam[m] > lam[m + 1])]
        if not m_opts:
            raise InfeasibleError("no repair move available")
        j = max(j_opts, key=lambda i: (target[i] - lam[i], -i))
        m = max(m_opts, key=lambda i: (lam[i] - target[i], -i))
        lam[j] += 1
        lam[m] -= 1
    else:
        raise InfeasibleError("repair did not converge")
    lam = tuple(int(x) for x in lam)
    f = tuple(int(x) for x in f)
    assert kostka(strip_frame(lam), tuple(sorted(f, reverse=True))) > 0
    return f, lam


# ---------------------------------------------------------------------------
# rate series

@dataclass
class RateSeries:
    """Finite-n exact values t_n with rates r_n = -(1/n) log2 t_n and a fit.

    r_detrended holds the rates after interpolating log2 t_n across the
    integer frames bracketing the continuous target n * s.  Frame rounding
    injects an oscillation of order 1/n into r_n that the smooth fit model
    cannot absorb at small n; the interpolation removes it using only exact
    finite-n evaluations, without changing the limit.  The fit runs on
    r_detrended; r_values keeps the raw rounded-frame rates.
    """

    quantity: str
    n_values: list
    t_values: list
    r_values: list
    r_inf: float
    fit_residual: float
    r_detrended: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def growth_values(self):
        return [-r for r in self.r_values]

    @property
    def growth_inf(self):
        return -self.r_inf


def fit_rate_limit(n_values, r_values):
    """Least-squares fit r_n ~ r_inf + a log2(n)/n + b/n."""
    n = np.asarray(n_values, dtype=float)
    r = np.asarray(r_values, dtype=float)
    if n.size == 0:
        return float("nan"), float("nan")
    if n.size < 3:
        return float(r[-1]), float("nan")
    X = np.stack([np.ones_like(n), np.log2(n) / n, 1.0 / n], axis=1)
    coef, *_ = np.linalg.lstsq(X, r, rcond=None)
    resid = r - X @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid**2)))


def _lagrange_value(pts, ys, t):
    """Value at t of the interpolating polynomial through (pts, ys)."""
    val = 0.0
    for i, pi in enumerate(pts):
        L = 1.0
        for pj in pts:
            if pj != pi:
                L *= (t - pj) / (pi - pj)
        val += L * ys[i]
    return val


def _stencil(target, lo, hi, width=3):
    """Up to `width` consecutive integers inside [lo, hi] around target."""
    if hi < lo:
        return []
    base = int(math.floor(target)) - (width - 1) // 2
    base = max(min(base, hi - width + 1), lo)
    return list(range(base, min(base + width, hi + 1)))


def _smooth_1d(target, lo, hi, log_t):
    """Interpolated log2 t at a continuous frame parameter; None on failure."""
    pts = _stencil(target, lo, hi)
    if not pts:
        return None
    ys = []
    for pt in pts:
        t = log_t(pt)
        if t is None:
            return None
        ys.append(t)
    if len(pts) == 1:
        return ys[0]
    # domain bounds can push the stencil off the target; short extrapolation
    # is more accurate there than evaluating at a clamped point
    tt = min(max(target, pts[0] - 1.5), pts[-1] + 1.5)
    return _lagrange_value(pts, ys, tt)


def _log_pos(t):
    return math.log2(t) if t > 0 else None


def rate_series(quantity, n_list, *, rho=None, sigma=None, A=None,
                p=None, s=None, q=None):
    """Exact finite-n series for one of the asymptotic rate definitions.

    quantity: "phi" | "lambda" | "delta" | "theta" | "theta1" | "theta2".
    Arguments depend on the quantity; see the per-branch comments.
    """
    ns, ts, smooth, skipped = [], [], [], []
    if quantity == "phi":
        # frame follows spec(rho); trace taken against sigma rotated into
        # the eigenbasis of rho
        w, V = mc.hermitian_eig(rho)
        sigma_eff = V.conj().T @ np.asarray(sigma, complex) @ V
        s_eff = check_distribution(w)
        d = len(s_eff)
        for n in n_list:
            f, lam = frame_rounding(s_eff, s_eff, n)
            method = "schur" if d == 2 else "auto"
            ts.append(trace_state(lam, lam, sigma_eff, method=method))
            if d == 2:
                smooth.append(_smooth_1d(
                    n * s_eff[0], (n + 1) // 2, n,
                    lambda l1: _log_pos(trace_state(
                        (l1, n - l1), (l1, n - l1), sigma_eff, method="schur"))))
            else:
                smooth.append(None)
            ns.append(n)
    elif quantity == "lambda":
        # frame type follows the pinch of rho in the eigenbasis of sigma
        wsig, Vsig = mc.hermitian_eig(sigma)
        sigma_eff = np.diag(wsig.astype(complex))
        p_eff = check_distribution(np.real(np.diag(Vsig.conj().T @ np.asarray(rho, complex) @ Vsig)))
        s_eff = check_distribution(np.linalg.eigvalsh(rho)[::-1])
        for n in n_list:
            try:
                f, lam = frame_rounding(p_eff, s_eff, n)
            except InfeasibleError:
                skipped.append(n)
                continue
            method = "schur" if len(s_eff) == 2 else "auto"
            ts.append(trace_state(f, lam, sigma_eff, method=method))
            smooth.append(_smooth_type_frame(
                n, p_eff, s_eff,
                lambda f2, lam2: trace_state(f2, lam2, sigma_eff, method="schur")))
            ns.append(n)
    elif quantity == "delta":
        X = np.asarray(A, complex).conj().T @ np.asarray(sigma, complex) @ np.asarray(A, complex)
        p = check_distribution(p)
        s = check_distribution(s)
        for n in n_list:
            try:
                f, lam = frame_rounding(p, s, n)
            except InfeasibleError:
                skipped.append(n)
                continue
            method = "schur" if len(s) == 2 else "auto"
            ts.append(trace_state(f, lam, X, method=method))
            smooth.append(_smooth_type_frame(
                n, p, s,
                lambda f2, lam2: trace_state(f2, lam2, X, method="schur")))
            ns.append(n)
    elif quantity == "theta":
        q = check_distribution(q)
        s = check_distribution(s)
        for n in n_list:
            try:
                g, lam = frame_rounding(q, s, n)
            except InfeasibleError:
                skipped.append(n)
                continue
            ts.append(trace_conjugated(lam, lam, g, A))
            smooth.append(_smooth_type_frame(
                n, q, s,
                lambda g2, lam2: trace_conjugated(lam2, lam2, g2, A)))
            ns.append(n)
    elif quantity == "theta1":
        A = np.asarray(A, complex)
        d = A.shape[0]
        p = check_distribution(p)
        q = check_distribution(q)

        def t_theta1(f, g, n):
            vf = sym_type_vector(f, d)
            u = mc.tensor_power_apply(A.conj().T, n, vf.amplitudes)
            codes = strings_to_codes(_block_basis(n, d, g), d)
            return float(np.sum(np.abs(u[codes]) ** 2))

        for n in n_list:
            f = tuple(int(x) for x in largest_remainder(p, n))
            g = tuple(int(x) for x in largest_remainder(q, n))
            ts.append(t_theta1(f, g, n))
            if d == 2:
                smooth.append(_smooth_1d(
                    n * p[0], 0, n,
                    lambda f1: _smooth_1d(
                        n * q[0], 0, n,
                        lambda g1: _log_pos(
                            t_theta1((f1, n - f1), (g1, n - g1), n)))))
            else:
                smooth.append(None)
            ns.append(n)
    elif quantity == "theta2":
        A = np.asarray(A, complex)
        d = A.shape[0]
        q = check_distribution(q)
        from .schur_weyl import antisym_vector
        v2 = antisym_vector(2, d).amplitudes

        def t_theta2(g, n):
            amp = np.ones(1)
            for _ in range(n // 2):
                amp = np.kron(amp, v2)
            u = mc.tensor_power_apply(A.conj().T, n, amp)
            codes = strings_to_codes(_block_basis(n, d, g), d)
            return float(np.sum(np.abs(u[codes]) ** 2))

        for n in n_list:
            if n % 2:
                skipped.append(n)
                continue
            g = tuple(int(x) for x in largest_remainder(q, n))
            ts.append(t_theta2(g, n))
            if d == 2:
                smooth.append(_smooth_1d(
                    n * q[0], 0, n,
                    lambda g1: _log_pos(t_theta2((g1, n - g1), n))))
            else:
                smooth.append(None)
            ns.append(n)
    else:
        raise ValueError(f"unknown quantity {quantity!r}")

    r_values, r_detrended = [], []
    kept_n, kept_t = [], []
    for n, t, sm in zip(ns, ts, smooth):
        if t <= 0:
            skipped.append(n)
            continue
        kept_n.append(n)
        kept_t.append(t)
        r = -math.log2(t) / n
        r_values.append(r)
        r_detrended.append(r if sm is None else -sm / n)
    # n < 4 is dominated by lattice effects the fit model cannot absorb;
    # keep those points in the series but leave them out of the fit
    fit_idx = [i for i, n in enumerate(kept_n) if n >= 4]
    if len(fit_idx) < 3:
        fit_idx = list(range(len(kept_n)))
    r_inf, resid = fit_rate_limit([kept_n[i] for i in fit_idx],
                                  [r_detrended[i] for i in fit_idx])
    return RateSeries(quantity, kept_n, kept_t, r_values, r_inf, resid,
                      r_detrended=r_detrended, skipped=sorted(skipped))


def _smooth_type_frame(n, p, s, trace_fn):
    """Interpolated log2 t at continuous type n*p and frame n*s (d = 2 only).

    The valid lattice l1 >= max(f1, n - f1) is not a product domain, so a
    tensor stencil degenerates near the boundary.  Instead fit a quadratic
    surface by least squares over the valid points in a window around the
    target and evaluate it at the continuous (n*p[0], n*s[0]).
    """
    if len(p) != 2 or len(s) != 2:
        return None
    tf, tl = n * p[0], n * s[0]
    rows, ys = [], []
    for f1 in range(max(0, int(tf) - 2), min(n, int(tf) + 2) + 1):
        for l1 in range(max(int(tl) - 2, f1, n - f1), min(n, int(tl) + 2) + 1):
            y = _log_pos(trace_fn((f1, n - f1), (l1, n - l1)))
            if y is None:
                continue
            df, dl = f1 - tf, l1 - tl
            rows.append([1.0, df, dl, df * df, df * dl, dl * dl])
            ys.append(y)
    if len(rows) < 6:
        return None
    coef, *_ = np.linalg.lstsq(np.asarray(rows), np.asarray(ys), rcond=None)
    return float(coef[0])
