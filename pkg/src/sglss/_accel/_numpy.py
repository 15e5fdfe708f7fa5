"""Pure-numpy implementations of the hot elementwise kernels."""

import numpy as np
from scipy.special import expit

SQRT5 = np.sqrt(5.0)


def matern52_gram(D, sigma2, rho):
    """Matern-5/2 Gram matrix from a pairwise distance matrix."""
    t = (SQRT5 / rho) * D
    return sigma2 * (1.0 + t + t * t / 3.0) * np.exp(-t)


def site_moments_logtheta(bsum, xx, sig_diag, mu0, s20, log_prior_odds):
    """Spike-slab site posterior moments and log Bayes factor.

    bsum[s] = sum_i x_ij * ztilde_ij(s), xx = sum_i x_ij^2,
    sig_diag[s] = Sigma(s,s).  Returns (nu, m, logtheta).
    """
    nu = 1.0 / (xx / sig_diag + 1.0 / s20)
    m = bsum / sig_diag + mu0 / s20
    logtheta = (
        log_prior_odds
        + 0.5 * np.log(s20)
        + 0.5 * mu0 * mu0 / s20
        - 0.5 * np.log(nu)
        - 0.5 * m * m * nu
    )
    return nu, m, logtheta


def tau_from_logtheta(logtheta, u):
    """Bernoulli indicators: P(tau=1) = 1/(1+theta), via stable logistic."""
    return u < expit(-logtheta)


def beta_from_moments(nu, m, eps, sel):
    """Slab draw nu*m + sqrt(nu)*eps where selected, exact zero elsewhere."""
    return np.where(sel, nu * m + np.sqrt(nu) * eps, 0.0)
