"""Numba-compiled implementations of the hot elementwise kernels.

Each function matches the signature and semantics of its counterpart in
_numpy.py; fused loops avoid the intermediate arrays of the vectorized
path.  Results may differ from the numpy path in the last ulp (different
operation order), never in distribution.
"""

import math

import numpy as np
from numba import njit

SQRT5 = math.sqrt(5.0)


@njit(cache=True, fastmath=False)
def matern52_gram(D, sigma2, rho):
    p, m = D.shape
    out = np.empty((p, m))
    c = SQRT5 / rho
    for i in range(p):
        for j in range(m):
            t = c * D[i, j]
            out[i, j] = sigma2 * (1.0 + t + t * t / 3.0) * math.exp(-t)
    return out


@njit(cache=True, fastmath=False)
def site_moments_logtheta(bsum, xx, sig_diag, mu0, s20, log_prior_odds):
    p = bsum.shape[0]
    nu = np.empty(p)
    m = np.empty(p)
    logtheta = np.empty(p)
    for s in range(p):
        nus = 1.0 / (xx / sig_diag[s] + 1.0 / s20[s])
        ms = bsum[s] / sig_diag[s] + mu0[s] / s20[s]
        nu[s] = nus
        m[s] = ms
        logtheta[s] = (
            log_prior_odds
            + 0.5 * math.log(s20[s])
            + 0.5 * mu0[s] * mu0[s] / s20[s]
            - 0.5 * math.log(nus)
            - 0.5 * ms * ms * nus
        )
    return nu, m, logtheta


@njit(cache=True, fastmath=False)
def tau_from_logtheta(logtheta, u):
    p = logtheta.shape[0]
    out = np.empty(p, dtype=np.bool_)
    for s in range(p):
        lt = logtheta[s]
        # stable logistic 1/(1+exp(lt))
        if lt >= 0.0:
            prob = math.exp(-lt) / (1.0 + math.exp(-lt))
        else:
            prob = 1.0 / (1.0 + math.exp(lt))
        out[s] = u[s] < prob
    return out


@njit(cache=True, fastmath=False)
def beta_from_moments(nu, m, eps, sel):
    p = nu.shape[0]
    out = np.zeros(p)
    for s in range(p):
        if sel[s]:
            out[s] = nu[s] * m[s] + math.sqrt(nu[s]) * eps[s]
    return out
