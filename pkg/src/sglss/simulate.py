"""Synthetic image-regression scenarios with ground-truth coefficient
images: smooth random fields with sparsity injected either by random
site zeroing (scenario 1) or by square activation regions (scenario 2).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .kernels import build_psi
from .model import Dataset, LocationGrid, MaternKernel, ValidationError

GRID_SIDE = 30
N_SUBJECTS = 100
N_COVARIATES = 15
N_INFLUENTIAL = 8  # covariates 1..8 carry signal, 9..15 are noise
CONTINUOUS = (1, 2, 3, 4, 5)  # standard normal covariates
DISCRETE = (6, 7, 8)  # Bernoulli(1/2) covariates
# scenario-1 fraction of each support zeroed out, by covariate index
ZERO_FRACTIONS = {2: 0.10, 3: 0.20, 4: 0.30, 5: 0.40, 7: 0.10, 8: 0.20}
TRUE_KERNEL = MaternKernel(sigma2_s=1.0, rho=0.25)
TRUE_SIGMA2_EPS = 1.0


@dataclass
class GroundTruth:
    beta_true: np.ndarray  # (q+1) x p
    support_true: np.ndarray  # q x p bools
    influential_global: np.ndarray  # q bools
    generator_seed: int
    scenario: str  # "s1" or "s2"
    pi_target: float | None
    Z_true: np.ndarray  # n x p
    Sigma_true: np.ndarray  # p x p
    sigma2_eps_true: float

    def __post_init__(self):
        expect_support = self.beta_true[1:] != 0.0
        if not np.array_equal(self.support_true, expect_support):
            raise ValidationError("support_true inconsistent with beta_true")
        if not np.array_equal(
            self.influential_global, np.any(self.support_true, axis=1)
        ):
            raise ValidationError("influential_global inconsistent with support")


def lattice_grid(side=GRID_SIDE):
    """side x side lattice scaled to the unit square, row-major site order.

    Spacing 1/(side-1) puts the generating length scale rho = 1/4 at about
    seven pixels, so latent surfaces are smooth across neighboring sites
    and the white noise variance stays identifiable against the GP part.
    """
    ticks = np.arange(side, dtype=np.float64) / (side - 1)
    ii, jj = np.meshgrid(ticks, ticks, indexing="ij")
    coords = np.column_stack([ii.ravel(), jj.ravel()])
    return LocationGrid(coords=coords)


def sample_gp(mean, Sigma, rng):
    """mean + L eps for L the Cholesky factor of Sigma."""
    Sigma = np.asarray(Sigma, dtype=np.float64)
    try:
        L = np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError as exc:
        raise ValidationError("sample_gp: Sigma not SPD") from exc
    mean = np.broadcast_to(np.asarray(mean, dtype=np.float64), (Sigma.shape[0],))
    return mean + L @ rng.standard_normal(Sigma.shape[0])


def rescale_beta(beta_tilde):
    """Shift-scale a field into a zero-free coefficient image.

    beta(s) = (bt(s) + sign(bt(s')) |bt(s')|) / (2 |bt(s')|) with s' the
    argmax of |bt|; the argmax site maps to +1 or -1 with the sign of the
    extreme value.
    """
    bt = np.asarray(beta_tilde, dtype=np.float64)
    if not np.any(bt):
        raise ValidationError("rescale_beta: all-zero input")
    idx = int(np.argmax(np.abs(bt)))
    extreme = bt[idx]
    return (bt + np.sign(extreme) * abs(extreme)) / (2.0 * abs(extreme))


def _shared_structure(seed, n, q, side):
    """Grid, GP factor, rescaled coefficient fields, and covariates."""
    grid = lattice_grid(side)
    p = grid.p
    psi = build_psi(grid, TRUE_KERNEL)  # jittered factor for drawing
    Sigma_true = psi.Psi - psi.jitter * np.eye(p)  # exact kernel Gram

    beta = np.zeros((q + 1, p))
    for j in range(N_INFLUENTIAL + 1):  # intercept plus covariates 1..8
        r = rngmod.stream(seed, 0, rngmod.SIM_BETA + j)
        draw = psi.chol @ r.standard_normal(p)
        beta[j] = rescale_beta(draw)

    rx = rngmod.stream(seed, 0, rngmod.SIM_X)
    X = np.empty((n, q))
    cont_a = [j - 1 for j in CONTINUOUS]
    X[:, cont_a] = rx.standard_normal((n, len(cont_a)))
    disc = [j - 1 for j in DISCRETE]
    X[:, disc] = (rx.random((n, len(disc))) < 0.5).astype(np.float64)
    rest = [j for j in range(q) if j not in set(cont_a) | set(disc)]
    if rest:
        X[:, rest] = rx.standard_normal((n, len(rest)))
    return grid, psi, Sigma_true, beta, X


def _observe(seed, beta, X, psi):
    """Latent surfaces Z ~ GP(mu_i, Sigma) and noisy images Y."""
    n = X.shape[0]
    p = psi.chol.shape[0]
    Xt = np.column_stack([np.ones(n), X])
    Mu = Xt @ beta
    E = rngmod.stream(seed, 0, rngmod.SIM_Z).standard_normal((n, p))
    Z = Mu + E @ psi.chol.T
    noise = rngmod.stream(seed, 0, rngmod.SIM_NOISE).standard_normal((n, p))
    Y = Z + math.sqrt(TRUE_SIGMA2_EPS) * noise
    return Z, Y


def _finish(seed, scenario, pi_target, grid, Sigma_true, beta, X, psi):
    Z, Y = _observe(seed, beta, X, psi)
    dataset = Dataset(Y=Y, X=X, grid=grid)
    support = beta[1:] != 0.0
    truth = GroundTruth(
        beta_true=beta,
        support_true=support,
        influential_global=np.any(support, axis=1),
        generator_seed=int(seed),
        scenario=scenario,
        pi_target=pi_target,
        Z_true=Z,
        Sigma_true=Sigma_true,
        sigma2_eps_true=TRUE_SIGMA2_EPS,
    )
    return dataset, truth


def gen_scenario1(seed, n=N_SUBJECTS, q=N_COVARIATES, side=GRID_SIDE):
    """Smooth fields with a random fraction of each support zeroed.

    Covariates 2,7 lose 10% of their sites, 3,8 lose 20%, 4 loses 30%,
    5 loses 40%; 1 and 6 stay fully nonzero; 9..15 are identically zero.
    """
    grid, psi, Sigma_true, beta, X = _shared_structure(seed, n, q, side)
    p = grid.p
    for j, frac in ZERO_FRACTIONS.items():
        count = round(frac * p)
        r = rngmod.stream(seed, 0, rngmod.SIM_ZERO_MASK + j)
        sites = r.permutation(p)[:count]  # Fisher-Yates partial shuffle
        beta[j, sites] = 0.0
    return _finish(seed, "s1", None, grid, Sigma_true, beta, X, psi)


def gen_scenario2(pi_target, seed, n=N_SUBJECTS, q=N_COVARIATES, side=GRID_SIDE):
    """Square activation regions: each influential covariate is nonzero on
    one uniformly placed axis-aligned square covering pi_target of sites."""
    grid, psi, Sigma_true, beta, X = _shared_structure(seed, n, q, side)
    p = grid.p
    count = round(pi_target * p)
    s = math.isqrt(count)
    if s * s != count:
        raise ValidationError(
            f"gen_scenario2: pi_target*p rounds to {count}, not a perfect square"
        )
    if s > side:
        raise ValidationError("gen_scenario2: square does not fit the grid")
    for j in range(1, N_INFLUENTIAL + 1):
        r = rngmod.stream(seed, 0, rngmod.SIM_SQUARE + j)
        r0, c0 = r.integers(0, side - s + 1, size=2)
        mask = np.zeros((side, side), dtype=bool)
        mask[r0 : r0 + s, c0 : c0 + s] = True
        beta[j] = np.where(mask.ravel(), beta[j], 0.0)
    return _finish(seed, "s2", pi_target, grid, Sigma_true, beta, X, psi)
