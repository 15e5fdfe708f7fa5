"""Mass-univariate comparator: per-site OLS with t-tests, Simes global
combination, and BH / BY / Storey-BH FDR procedures."""

from dataclasses import dataclass

import numpy as np
from scipy.special import stdtr

from .model import ValidationError

SBH_LAMBDA = 0.5
SBH_MIN_M = 20


@dataclass
class MuaResult:
    beta_hat: np.ndarray  # (q+1) x p
    pvals: np.ndarray  # q x p, two-sided
    tvals: np.ndarray  # q x p
    global_pvals: np.ndarray  # length q, Simes over each image's sites
    residual_cov: np.ndarray  # p x p, 1/(n-1) normalization
    dof: int


def ols_per_location(dataset):
    """Independent OLS of Y(., s) on [1, X] at every site.

    Two-sided p-values use the t distribution with n - q - 1 degrees of
    freedom; its CDF comes from the regularized incomplete beta function.
    Rank-deficient designs are rejected, never pseudo-inverted.
    """
    n, q = dataset.n, dataset.q
    dof = n - q - 1
    if dof < 1:
        raise ValidationError(f"ols_per_location: need n > q + 1, got n={n}, q={q}")
    Xt = dataset.design()
    Q, R = np.linalg.qr(Xt)
    diag = np.abs(np.diag(R))
    if np.min(diag) <= np.max(diag) * n * np.finfo(float).eps:
        raise ValidationError("ols_per_location: design matrix is rank deficient")

    beta_hat = np.linalg.solve(R, Q.T @ dataset.Y)  # (q+1) x p
    resid = dataset.Y - Xt @ beta_hat
    s2 = np.sum(resid * resid, axis=0) / dof  # per-site noise variance
    Rinv = np.linalg.solve(R, np.eye(q + 1))
    xtx_inv_diag = np.sum(Rinv * Rinv, axis=1)  # diag of (Xt'Xt)^{-1}
    se = np.sqrt(np.outer(xtx_inv_diag, s2))

    with np.errstate(divide="ignore", invalid="ignore"):
        tvals = np.where(se > 0, beta_hat / se, np.inf * np.sign(beta_hat))
        tvals = np.where(beta_hat == 0, 0.0, tvals)
    tcov = tvals[1:]  # covariate rows only
    pvals = 2.0 * stdtr(dof, -np.abs(tcov))
    pvals = np.clip(pvals, 0.0, 1.0)

    global_pvals = np.array([simes_combine(pvals[j]) for j in range(q)])
    residual_cov = (resid.T @ resid) / (n - 1) if n > 1 else np.zeros((dataset.p,) * 2)
    return MuaResult(
        beta_hat=beta_hat,
        pvals=pvals,
        tvals=tcov,
        global_pvals=global_pvals,
        residual_cov=residual_cov,
        dof=dof,
    )


def simes_combine(pvals):
    """min over ranks of m * p_(i) / i, capped at 1."""
    p = np.sort(np.asarray(pvals, dtype=np.float64).ravel())
    m = p.size
    if m == 0:
        raise ValidationError("simes_combine: empty input")
    # p * (m / i) keeps the i = m term exactly p, so output >= min(p) holds
    # in floating point, not just in exact arithmetic
    ranks = np.arange(1, m + 1, dtype=np.float64)
    return float(min(np.min(p * (m / ranks)), 1.0))


def _step_up(pvals, level):
    """BH step-up at the given per-comparison slope; ties reject together."""
    p = np.asarray(pvals, dtype=np.float64).ravel()
    m = p.size
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    thresh = level * np.arange(1, m + 1) / m
    passed = np.flatnonzero(sorted_p <= thresh)
    if passed.size == 0:
        return np.zeros(m, dtype=bool)
    cutoff = sorted_p[passed[-1]]
    return p <= cutoff


def fdr_bh(pvals, q_level=0.05):
    """Benjamini-Hochberg step-up rejections."""
    return _step_up(pvals, q_level)


def fdr_by(pvals, q_level=0.05):
    """Benjamini-Yekutieli: BH with q divided by the harmonic sum c(m)."""
    m = np.asarray(pvals).size
    c_m = np.sum(1.0 / np.arange(1, m + 1))
    return _step_up(pvals, q_level / c_m)


def fdr_sbh(pvals, q_level=0.05):
    """Storey-BH: BH at level q / pi0_hat, pi0 estimated at lambda = 0.5."""
    p = np.asarray(pvals, dtype=np.float64).ravel()
    m = p.size
    if m < SBH_MIN_M:
        raise ValidationError(f"fdr_sbh: needs m >= {SBH_MIN_M}, got {m}")
    pi0 = min(1.0, np.sum(p > SBH_LAMBDA) / ((1.0 - SBH_LAMBDA) * m))
    if pi0 == 0.0:
        # no mass above lambda: estimated null fraction zero, reject all
        return np.ones(m, dtype=bool)
    return _step_up(p, q_level / pi0)


PROCEDURES = {"bh": fdr_bh, "by": fdr_by, "sbh": fdr_sbh}


@dataclass
class MuaSelection:
    ols: MuaResult
    alpha: float
    global_selected: dict  # procedure -> length-q bool mask
    local_selected: dict  # procedure -> q x p bool mask


def mua_pipeline(dataset, alpha=0.05):
    """Global (Simes-combined, over covariates) and local (per covariate,
    over sites) selections for all three FDR procedures.

    The Storey estimator needs m >= 20 p-values; on the global stage with
    fewer covariates SBH degrades to pi0 = 1, which is exactly BH.
    """
    ols = ols_per_location(dataset)
    q, p = ols.pvals.shape
    global_selected = {}
    local_selected = {}
    for name, proc in PROCEDURES.items():
        if name == "sbh" and q < SBH_MIN_M:
            global_selected[name] = fdr_bh(ols.global_pvals, alpha)
        else:
            global_selected[name] = proc(ols.global_pvals, alpha)
        local = np.zeros((q, p), dtype=bool)
        for j in range(q):
            local[j] = proc(ols.pvals[j], alpha)
        local_selected[name] = local
    return MuaSelection(
        ols=ols,
        alpha=alpha,
        global_selected=global_selected,
        local_selected=local_selected,
    )
