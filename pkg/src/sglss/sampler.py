"""Three-block Gibbs sampler, chain orchestration, posterior summaries,
and convergence diagnostics.

Sweep layout (one iteration): (1) redraw all latent surfaces Z and the
noise variance; (2) for j = 0..q in ascending order redraw the local
indicators, participation rate, and coefficient row of covariate j
against blocked residuals; (3) redraw the spatial covariance.  Every
random draw comes from a Philox stream keyed by (seed, iteration, block),
so chains are reproducible and schedule-independent.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.linalg.lapack import dpotrf, dpotri
from scipy.special import betainc

from . import _accel
from . import rng as rngmod
from .kernels import build_psi, sample_iw_dawid
from .model import ChainState, NumericError, PosteriorSummary, ValidationError, validate
from .mua import ols_per_location

PI_CLAMP = 1e-12  # Beta draws can round to exact 0/1 in floating point


@dataclass
class ChainConfig:
    n_iter: int
    burn_in: int
    seed: int
    thin: int = 1
    init: str = "mua"

    def __post_init__(self):
        if self.n_iter < 1:
            raise ValidationError("n_iter: must be >= 1")
        if not (0 <= self.burn_in < self.n_iter):
            raise ValidationError("burn_in: must satisfy 0 <= burn_in < n_iter")
        if self.thin < 1:
            raise ValidationError("thin: must be >= 1")
        if self.init != "mua":
            raise ValidationError(f"init: unknown policy {self.init!r}")

    @property
    def n_stored(self):
        return (self.n_iter - self.burn_in) // self.thin


class ChainFailure(NumericError):
    """Sweep-level failure; carries the traces accumulated so far."""

    def __init__(self, message, partial_traces):
        super().__init__(message)
        self.partial_traces = partial_traces


def _inv_spd(M):
    """SPD inverse via Cholesky (dpotrf + dpotri), symmetrized."""
    c, info = dpotrf(M, lower=1)
    if info != 0:
        raise NumericError(f"SPD factorization failed (dpotrf info={info})")
    inv, info = dpotri(c, lower=1)
    if info != 0:
        raise NumericError(f"SPD inversion failed (dpotri info={info})")
    return np.tril(inv) + np.tril(inv, -1).T


def init_state(data, hyper, mua_result, psi):
    """Start from per-site OLS: beta and fitted surfaces at the OLS values,
    all indicators on, participation rates at 1/2, covariance at Psi."""
    q = data.q
    beta = np.array(mua_result.beta_hat, dtype=np.float64, copy=True)
    tau = np.ones((q, data.p), dtype=bool)
    pi = np.full(q, 0.5)
    # apply the selection rule once so the state invariant holds even
    # when d > 1/2 makes the initial global indicators zero
    for j in range(1, q + 1):
        if pi[j - 1] < hyper.d:
            beta[j] = 0.0
    fitted = data.design() @ mua_result.beta_hat
    resid = data.Y - fitted
    return ChainState(
        Z=fitted.copy(),
        beta=beta,
        tau=tau,
        pi=pi,
        sigma2_eps=float(np.mean(resid * resid)),
        Sigma=psi.Psi.copy(),
    )


def update_Z(state, data, rng):
    """Redraw every latent surface from its conditional
    MVN(V (Y_i/sigma2_eps + Sigma^{-1} mu_i), V) with
    V = (I/sigma2_eps + Sigma^{-1})^{-1}, factorized once for all i."""
    if state.sigma2_eps <= 0:
        raise ValidationError("sigma2_eps: must be > 0")
    n, p = data.Y.shape
    Si = _inv_spd(state.Sigma)
    Mu = data.design() @ state.beta
    rhs = data.Y / state.sigma2_eps + Mu @ Si  # Si symmetric
    Si[np.diag_indices(p)] += 1.0 / state.sigma2_eps  # Si becomes the precision
    try:
        c, low = cho_factor(Si, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericError("update_Z: precision factorization failed") from exc
    mean = cho_solve((c, low), rhs.T).T
    eps = rng.standard_normal((n, p))
    state.Z = mean + solve_triangular(c, eps.T, lower=True, trans="T").T
    return state.Z


def update_sigma2_eps(state, data, hyper, rng):
    """Conjugate inverse-gamma redraw of the noise variance."""
    n, p = data.Y.shape
    resid = data.Y - state.Z
    shape = hyper.a_eps + 0.5 * n * p
    rate = hyper.b_eps + 0.5 * float(np.sum(resid * resid))
    state.sigma2_eps = rate / float(rng.gamma(shape, 1.0))
    return state.sigma2_eps


def _site_stats(j, state, data, hyper):
    """Blocked-residual site statistics for covariate row j.

    Returns (nu, m, logtheta) over all p sites, where
    ztilde_i(s) = Z_i(s) - sum_{j' != j} x_ij' beta_j'(s),
    nu(s) = [sum_i x_ij^2 / Sigma(s,s) + 1/sigma2_0]^{-1},
    m(s) = sum_i x_ij ztilde_i(s) / Sigma(s,s) + mu0/sigma2_0,
    and logtheta is the log Bayes factor against inclusion.
    """
    Xt = data.design()
    x = Xt[:, j]
    zt = state.Z - Xt @ state.beta + np.outer(x, state.beta[j])
    bsum = x @ zt
    xx = float(x @ x)
    sig_diag = np.ascontiguousarray(np.diag(state.Sigma))
    if j >= 1:
        pi_c = min(max(float(state.pi[j - 1]), PI_CLAMP), 1.0 - PI_CLAMP)
        log_prior_odds = math.log1p(-pi_c) - math.log(pi_c)
    else:
        log_prior_odds = 0.0  # intercept: no selection, odds unused
    return _accel.site_moments_logtheta(
        bsum, xx, sig_diag, hyper.mu0[j], hyper.sigma2_0[j], log_prior_odds
    )


def bayes_factor_theta(j, s, state, data, hyper):
    """log theta_j(s), the log Bayes factor against including covariate j
    at site s, computed against the current blocked residuals."""
    if j < 1:
        raise ValidationError("bayes_factor_theta: j >= 1 required (no intercept)")
    _, _, logtheta = _site_stats(j, state, data, hyper)
    return float(logtheta[s])


def update_tau_pi(j, state, data, hyper, rng):
    """Redraw the indicator row tau_j(.) site-independently from
    Bernoulli(1/(1+theta_j(s))), then pi_j from Beta(a+k, b+p-k) with the
    exact count k; the global indicator I(pi_j >= d) follows implicitly."""
    if j < 1:
        raise ValidationError("update_tau_pi: j >= 1 required")
    p = data.p
    _, _, logtheta = _site_stats(j, state, data, hyper)
    u = rng.random(p)
    tau_row = _accel.tau_from_logtheta(logtheta, u)
    k = int(np.count_nonzero(tau_row))
    pi_j = float(rng.beta(hyper.a_pi + k, hyper.b_pi + p - k))
    state.tau[j - 1] = tau_row
    state.pi[j - 1] = pi_j
    return tau_row, pi_j


def update_beta(j, state, data, hyper, rng):
    """Redraw coefficient row j: exact zero where tau * I(pi >= d) = 0,
    otherwise N(nu*m, nu).  Row 0 (intercept) is always fully drawn."""
    nu, m, _ = _site_stats(j, state, data, hyper)
    eps = rng.standard_normal(data.p)
    if j == 0:
        sel = np.ones(data.p, dtype=bool)
    else:
        sel = state.tau[j - 1].astype(bool) & (state.pi[j - 1] >= hyper.d)
    state.beta[j] = _accel.beta_from_moments(nu, m, eps, sel)
    return state.beta[j]


def update_Sigma(state, data, hyper, psi, rng):
    """Conjugate inverse-Wishart redraw of the spatial covariance with
    scale = scatter of (Z - mu) plus the prior scale matrix."""
    Mu = data.design() @ state.beta
    Rz = state.Z - Mu
    scatter = Rz.T @ Rz
    state.Sigma = sample_iw_dawid(data.n + hyper.delta, scatter + psi.Psi, rng)
    return state.Sigma


def _sweep(state, data, hyper, psi, cseed, it):
    q = data.q
    update_Z(state, data, rngmod.stream(cseed, it, rngmod.BLOCK_Z))
    update_sigma2_eps(
        state, data, hyper, rngmod.stream(cseed, it, rngmod.BLOCK_SIGMA_EPS)
    )
    for j in range(q + 1):
        r = rngmod.stream(cseed, it, rngmod.BLOCK_COVARIATE + j)
        if j >= 1:
            update_tau_pi(j, state, data, hyper, r)
        update_beta(j, state, data, hyper, r)
    update_Sigma(state, data, hyper, psi, rngmod.stream(cseed, it, rngmod.BLOCK_SIGMA))


def run_chain(data, hyper, config, mua=None, psi=None, check_consistency=False):
    """Run one chain and summarize the stored states.

    Stored states are sweeps it with it > burn_in and
    (it - burn_in) % thin == 0.  MPPIs average I(pi_j >= d) (global) and
    I(pi_j >= d) * tau_j(s) (local); posterior means include the exact
    zeros.  Deterministic given config.seed.
    """
    validate(data, hyper)
    if psi is None:
        psi = build_psi(data.grid, hyper.kernel)
    if mua is None:
        mua = ols_per_location(data)
    n, p, q = data.n, data.p, data.q
    state = init_state(data, hyper, mua, psi)

    n_stored = config.n_stored
    sum_gind = np.zeros(q)
    sum_ltau = np.zeros((q, p))
    sum_beta = np.zeros((q + 1, p))
    sum_Z = np.zeros((n, p))
    sum_Sigma = np.zeros((p, p))
    sum_s2e = 0.0
    tr_iter = np.zeros(n_stored, dtype=np.int64)
    tr_s2e = np.zeros(n_stored)
    tr_pi = np.zeros((n_stored, q))
    tr_tausum = np.zeros((n_stored, q), dtype=np.int64)

    stored = 0
    try:
        for it in range(1, config.n_iter + 1):
            _sweep(state, data, hyper, psi, config.seed, it)
            if check_consistency:
                state.check_consistency(hyper.d)
            k = it - config.burn_in
            if k > 0 and k % config.thin == 0:
                gind = (state.pi >= hyper.d).astype(np.float64)
                sum_gind += gind
                sum_ltau += gind[:, None] * state.tau
                sum_beta += state.beta
                sum_Z += state.Z
                sum_Sigma += state.Sigma
                sum_s2e += state.sigma2_eps
                tr_iter[stored] = it
                tr_s2e[stored] = state.sigma2_eps
                tr_pi[stored] = state.pi
                tr_tausum[stored] = state.tau.sum(axis=1)
                stored += 1
    except (NumericError, np.linalg.LinAlgError) as exc:
        partial = {
            "iter": tr_iter[:stored],
            "sigma2_eps": tr_s2e[:stored],
            "pi": tr_pi[:stored],
            "tausum": tr_tausum[:stored],
        }
        raise ChainFailure(str(exc), partial) from exc

    if stored == 0:
        raise ValidationError("run_chain: no stored states (check thin/burn_in)")
    mppi_global = sum_gind / stored
    mppi_local = sum_ltau / stored
    traces = {
        "iter": tr_iter,
        "sigma2_eps": tr_s2e,
        "pi": tr_pi,
        "tausum": tr_tausum,
    }
    return PosteriorSummary(
        mppi_global=mppi_global,
        mppi_local=mppi_local,
        selected_global=mppi_global > 0.5,
        selected_local=mppi_local > 0.5,
        beta_mean=sum_beta / stored,
        Z_mean=sum_Z / stored,
        Sigma_mean=sum_Sigma / stored,
        sigma2_eps_mean=sum_s2e / stored,
        traces=traces,
        n_stored=stored,
    )


def pool_summaries(summaries):
    """Pool per-chain summaries into one (equal-weight over stored states;
    chains store the same count by construction)."""
    if not summaries:
        raise ValidationError("pool_summaries: empty input")
    if len(summaries) == 1:
        return summaries[0]
    counts = np.array([s.n_stored for s in summaries], dtype=np.float64)
    w = counts / counts.sum()

    def avg(field):
        return sum(wi * getattr(s, field) for wi, s in zip(w, summaries))

    mppi_global = avg("mppi_global")
    mppi_local = avg("mppi_local")
    return PosteriorSummary(
        mppi_global=mppi_global,
        mppi_local=mppi_local,
        selected_global=mppi_global > 0.5,
        selected_local=mppi_local > 0.5,
        beta_mean=avg("beta_mean"),
        Z_mean=avg("Z_mean"),
        Sigma_mean=avg("Sigma_mean"),
        sigma2_eps_mean=float(avg("sigma2_eps_mean")),
        traces={"chains": [s.traces for s in summaries]},
        n_stored=int(counts.sum()),
    )


def _spectral_var0(x):
    """Spectral variance at frequency zero: Bartlett-windowed
    autocovariance sum with 4% of the segment length as maximum lag."""
    n = x.size
    xc = x - x.mean()
    g0 = float(xc @ xc) / n
    M = int(math.floor(0.04 * n))
    s = g0
    for k in range(1, M + 1):
        gk = float(xc[:-k] @ xc[k:]) / n
        s += 2.0 * (1.0 - k / (M + 1.0)) * gk
    # the windowed sum can dip nonpositive on adversarial traces; keep a floor
    return max(s, g0 * 1e-12)


def geweke_z(trace, frac_first=0.1, frac_last=0.5):
    """Convergence z-score comparing the first and last segment means,
    scaled by spectral variance estimates at frequency zero."""
    x = np.asarray(trace, dtype=np.float64).ravel()
    if x.size < 50:
        raise ValidationError("geweke_z: trace length >= 50 required")
    if not (0 < frac_first < 1 and 0 < frac_last < 1 and frac_first + frac_last <= 1):
        raise ValidationError("geweke_z: invalid segment fractions")
    nA = int(math.floor(frac_first * x.size))
    nB = int(math.floor(frac_last * x.size))
    A, B = x[:nA], x[x.size - nB :]
    if np.all(A == A[0]) or np.all(B == B[0]):
        raise NumericError("geweke_z: zero-variance trace segment")
    sA, sB = _spectral_var0(A), _spectral_var0(B)
    return float((A.mean() - B.mean()) / math.sqrt(sA / nA + sB / nB))


def sparsity_discount(a_pi, b_pi, d):
    """Expected prior inclusion E[I(pi >= d) tau(s)] =
    (a/(a+b)) * (1 - F_Beta(a+1, b)(d))."""
    if a_pi <= 0 or b_pi <= 0:
        raise ValidationError("sparsity_discount: Beta parameters must be > 0")
    if not (0.0 <= d <= 1.0):
        raise ValidationError("sparsity_discount: d must lie in [0, 1]")
    return float(a_pi / (a_pi + b_pi) * (1.0 - betainc(a_pi + 1.0, b_pi, d)))
