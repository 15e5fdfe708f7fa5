"""Matern-5/2 kernel, scale-matrix construction, empirical kernel fitting,
and inverse-Wishart sampling in the delta-stable parameterization.

The inverse-Wishart here is parameterized so that every principal
submatrix of a draw keeps the same delta: standard degrees of freedom are
nu = delta + p - 1 for a p x p block.  Under this mapping the mean is
Psi / (delta - 2), finite for delta >= 3 with finite second moments for
delta >= 5.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from . import _accel
from .model import MaternKernel, NumericError, ValidationError

SQRT5 = np.sqrt(5.0)

# diagonal jitter ladder, relative to sigma2_s
JITTER_START = 1e-8
JITTER_MAX = 1e-4
JITTER_STEP = 10.0


def matern52(r, sigma2, rho):
    """Matern-5/2 covariance sigma2*(1 + t + t^2/3)*exp(-t), t = sqrt(5)r/rho."""
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < 0):
        raise ValidationError("matern52: r must be >= 0")
    if sigma2 <= 0 or rho <= 0:
        raise ValidationError("matern52: sigma2 and rho must be > 0")
    t = (SQRT5 / rho) * r
    out = sigma2 * (1.0 + t + t * t / 3.0) * np.exp(-t)
    return float(out) if out.ndim == 0 else out


def chol_spd_jittered(M, scale):
    """Cholesky with an escalating diagonal jitter ladder.

    Returns (L, jitter_used, M_jittered).  Raises NumericError once the
    jitter would exceed JITTER_MAX * scale.
    """
    jitter = JITTER_START * scale
    while True:
        Mj = M + jitter * np.eye(M.shape[0])
        try:
            return np.linalg.cholesky(Mj), jitter, Mj
        except np.linalg.LinAlgError:
            jitter *= JITTER_STEP
            if jitter > JITTER_MAX * scale * (1 + 1e-12):
                raise NumericError(
                    "cholesky failed at maximum jitter (degenerate grid?)"
                ) from None


@dataclass
class ScaleMatrix:
    """SPD scale matrix with its Cholesky factor cached."""

    Psi: np.ndarray
    chol: np.ndarray
    jitter: float = 0.0


def build_psi(grid, kernel):
    """Matern-5/2 Gram matrix over the grid, jittered until Cholesky holds."""
    D = grid.pairwise_distances()
    gram = _accel.matern52_gram(D, kernel.sigma2_s, kernel.rho)
    gram = (gram + gram.T) / 2.0
    L, jitter, Mj = chol_spd_jittered(gram, kernel.sigma2_s)
    return ScaleMatrix(Psi=Mj, chol=L, jitter=jitter)


def _profile_sigma2(K1, S):
    """Closed-form slab of the Frobenius objective: <K1,S>_F / <K1,K1>_F."""
    return float(np.sum(K1 * S) / np.sum(K1 * K1))


def _fit_objective(rho, D, S):
    K1 = _accel.matern52_gram(D, 1.0, rho)
    s2 = _profile_sigma2(K1, S)
    if s2 <= 0:
        # negative profile optimum: residual covariance anti-correlated
        # with the kernel; clamp and charge the full misfit
        s2 = np.finfo(float).tiny
    R = s2 * K1 - S
    return float(np.mean(R * R)), s2


def fit_kernel_empirical(dataset, mua_beta, n_grid=60, refine_tol=1e-10):
    """Fit (sigma2_s, rho) to the residual sample covariance.

    Minimizes the Frobenius mean squared error between
    S = (1/(n-1)) * sum_i r_i r_i^T (r_i the per-image OLS residual) and
    the Matern-5/2 Gram matrix; sigma2_s is profiled out in closed form,
    rho found on a 60-point log grid over [1e-2 * r_max, r_max] and
    polished by golden-section search.
    """
    n = dataset.n
    if n < 2:
        raise ValidationError("fit_kernel_empirical: n >= 2 required")
    resid = dataset.Y - dataset.design() @ np.asarray(mua_beta)
    if not np.any(resid):
        raise ValidationError("fit_kernel_empirical: all-zero residuals")
    S = (resid.T @ resid) / (n - 1)
    D = dataset.grid.pairwise_distances()
    r_max = float(np.max(D))
    if r_max <= 0:
        raise ValidationError("fit_kernel_empirical: degenerate grid")

    log_lo, log_hi = np.log(1e-2 * r_max), np.log(r_max)
    grid = np.exp(np.linspace(log_lo, log_hi, n_grid))
    objs = np.array([_fit_objective(rho, D, S)[0] for rho in grid])
    best = int(np.argmin(objs))

    # golden-section refinement on log(rho) within the bracketing cell
    lo = np.log(grid[max(best - 1, 0)])
    hi = np.log(grid[min(best + 1, n_grid - 1)])
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    dpt = a + invphi * (b - a)
    fc = _fit_objective(np.exp(c), D, S)[0]
    fd = _fit_objective(np.exp(dpt), D, S)[0]
    while b - a > refine_tol:
        if fc < fd:
            b, dpt, fd = dpt, c, fc
            c = b - invphi * (b - a)
            fc = _fit_objective(np.exp(c), D, S)[0]
        else:
            a, c, fc = c, dpt, fd
            dpt = a + invphi * (b - a)
            fd = _fit_objective(np.exp(dpt), D, S)[0]
    rho = float(np.exp((a + b) / 2.0))
    _, s2 = _fit_objective(rho, D, S)
    s2 = max(s2, np.finfo(float).tiny)
    return MaternKernel(sigma2_s=s2, rho=rho)


def sample_iw_dawid(delta, Psi, rng):
    """One inverse-Wishart draw with marginal-consistent dof parameter delta.

    Standard degrees of freedom nu = delta + p - 1; the draw is
    W^{-1} for W ~ Wishart(nu, Psi^{-1}), realized via the Bartlett
    factorization without forming any explicit p x p inverse:
    Sigma = B B^T with B = L_S A^{-T}, S = L_S L_S^T.
    """
    if isinstance(Psi, ScaleMatrix):
        L_S = Psi.chol
        p = L_S.shape[0]
    else:
        S = np.asarray(Psi, dtype=np.float64)
        p = S.shape[0]
        try:
            L_S = np.linalg.cholesky(S)
        except np.linalg.LinAlgError as exc:
            raise NumericError("sample_iw_dawid: scale not SPD") from exc
    delta = int(delta)
    if delta < 1:
        raise ValidationError("sample_iw_dawid: delta >= 1 required")
    nu = delta + p - 1
    # Bartlett lower factor: chi on the diagonal, standard normals below
    dof = nu - np.arange(p)
    A = np.zeros((p, p))
    A[np.diag_indices(p)] = np.sqrt(rng.chisquare(dof))
    if p > 1:
        A[np.tril_indices(p, -1)] = rng.standard_normal(p * (p - 1) // 2)
    Bt = solve_triangular(A, L_S.T, lower=True)  # B^T = A^{-1} L_S^T
    Sigma = Bt.T @ Bt
    return (Sigma + Sigma.T) / 2.0
