"""Domain types and invariant enforcement shared by all modules.

Conventions: beta row 0 is the intercept with its indicator product fixed
at 1, so tau is q x p and pi has length q (entry j-1 belongs to beta row
j).  The point mass at zero is represented as exact floating-point 0.0 in
beta, which makes the sparsity invariant testable by equality.
"""

from dataclasses import dataclass, field

import numpy as np


class ValidationError(ValueError):
    """Invalid dimensions, non-finite data, or bad hyperparameters."""


class NumericError(RuntimeError):
    """Numeric failure (factorization breakdown, degenerate input)."""


def _as_f64(a, name):
    arr = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: non-finite entries")
    return arr


@dataclass
class LocationGrid:
    """The p observation sites in a K-dimensional domain."""

    coords: np.ndarray  # p x K

    def __post_init__(self):
        self.coords = _as_f64(self.coords, "grid.coords")
        if self.coords.ndim != 2:
            raise ValidationError("grid.coords: expected a p x K matrix")
        p, k = self.coords.shape
        if p < 1 or k < 1:
            raise ValidationError("grid.coords: p >= 1 and K >= 1 required")
        if p > 1 and len(np.unique(self.coords, axis=0)) != p:
            raise ValidationError("grid.coords: duplicate sites")
        self._dist = None

    @property
    def p(self):
        return self.coords.shape[0]

    @property
    def K(self):
        return self.coords.shape[1]

    def pairwise_distances(self):
        """Symmetric zero-diagonal matrix of euclidean distances (cached)."""
        if self._dist is None:
            diff = self.coords[:, None, :] - self.coords[None, :, :]
            d = np.sqrt(np.sum(diff * diff, axis=2))
            np.fill_diagonal(d, 0.0)
            self._dist = (d + d.T) / 2.0
        return self._dist


@dataclass
class Dataset:
    """Observed images Y (n x p) and covariates X (n x q) on a grid."""

    Y: np.ndarray
    X: np.ndarray
    grid: LocationGrid

    def __post_init__(self):
        self.Y = _as_f64(self.Y, "Y")
        self.X = _as_f64(self.X, "X")
        if self.Y.ndim != 2:
            raise ValidationError("Y: expected an n x p matrix")
        if self.X.ndim != 2:
            raise ValidationError("X: expected an n x q matrix")
        if self.Y.shape[1] != self.grid.p:
            raise ValidationError(
                f"Y: {self.Y.shape[1]} columns but grid has p={self.grid.p} sites"
            )
        if self.X.shape[0] != self.Y.shape[0]:
            raise ValidationError(
                f"X: {self.X.shape[0]} rows but Y has n={self.Y.shape[0]} rows"
            )

    @property
    def n(self):
        return self.Y.shape[0]

    @property
    def p(self):
        return self.Y.shape[1]

    @property
    def q(self):
        return self.X.shape[1]

    def design(self):
        """The n x (q+1) design [1, X]."""
        return np.column_stack([np.ones(self.n), self.X])


@dataclass
class MaternKernel:
    """Matern covariance parameters; nu is fixed at 5/2."""

    sigma2_s: float
    rho: float
    nu: float = 2.5

    def __post_init__(self):
        if not (np.isfinite(self.sigma2_s) and self.sigma2_s > 0):
            raise ValidationError("kernel.sigma2_s: must be finite and > 0")
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise ValidationError("kernel.rho: must be finite and > 0")
        if self.nu != 2.5:
            raise ValidationError("kernel.nu: only nu = 5/2 is supported")


@dataclass
class Hyperparams:
    """Fixed prior constants for one fit."""

    a_eps: float
    b_eps: float
    a_pi: float
    b_pi: float
    d: float
    mu0: np.ndarray  # (q+1) x p slab means
    sigma2_0: np.ndarray  # (q+1) x p slab variances
    delta: int
    kernel: MaternKernel

    def __post_init__(self):
        for name in ("a_eps", "b_eps", "a_pi", "b_pi"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValidationError(f"{name}: must be finite and > 0")
        if not (0.0 <= self.d <= 1.0):
            raise ValidationError("d: must lie in [0, 1]")
        self.mu0 = _as_f64(self.mu0, "mu0")
        self.sigma2_0 = _as_f64(self.sigma2_0, "sigma2_0")
        if self.mu0.shape != self.sigma2_0.shape:
            raise ValidationError("mu0/sigma2_0: shape mismatch")
        if np.any(self.sigma2_0 <= 0):
            raise ValidationError("sigma2_0: entries must be > 0")
        if int(self.delta) != self.delta or self.delta < 5:
            raise ValidationError("delta: integer >= 5 required")
        self.delta = int(self.delta)

    @classmethod
    def defaults(cls, q, p, kernel, *, d=0.05, delta=5):
        """Reference prior settings: unit Gamma/Beta shapes, zero-mean
        unit-variance slabs, delta = 5."""
        return cls(
            a_eps=1.0,
            b_eps=1.0,
            a_pi=1.0,
            b_pi=1.0,
            d=d,
            mu0=np.zeros((q + 1, p)),
            sigma2_0=np.ones((q + 1, p)),
            delta=delta,
            kernel=kernel,
        )


@dataclass
class ChainState:
    """One Gibbs state."""

    Z: np.ndarray  # n x p
    beta: np.ndarray  # (q+1) x p, row 0 intercept
    tau: np.ndarray  # q x p in {0,1}
    pi: np.ndarray  # length q
    sigma2_eps: float
    Sigma: np.ndarray  # p x p SPD

    def check_consistency(self, d, atol_sym=1e-10):
        """Raise unless every invariant holds (debug sweep)."""
        if self.sigma2_eps <= 0:
            raise ValidationError("sigma2_eps: must be > 0")
        if np.any(self.pi < 0) or np.any(self.pi > 1):
            raise ValidationError("pi: entries must lie in [0, 1]")
        scale = max(1.0, float(np.max(np.abs(self.Sigma))))
        if np.max(np.abs(self.Sigma - self.Sigma.T)) > atol_sym * scale:
            raise ValidationError("Sigma: not symmetric")
        try:
            np.linalg.cholesky(self.Sigma)
        except np.linalg.LinAlgError as exc:
            raise ValidationError("Sigma: not positive definite") from exc
        q = self.tau.shape[0]
        for j in range(1, q + 1):
            bad = (self.beta[j] != 0.0) & (
                (self.tau[j - 1] == 0) | (self.pi[j - 1] < d)
            )
            if np.any(bad):
                raise ValidationError(
                    f"beta[{j}]: nonzero where tau*I(pi>=d) = 0"
                )


@dataclass
class PosteriorSummary:
    """Posterior summaries from the stored (post-burn-in, thinned) states."""

    mppi_global: np.ndarray  # length q, mean of I(pi_j >= d)
    mppi_local: np.ndarray  # q x p, mean of I(pi_j >= d) * tau_j(s)
    selected_global: np.ndarray  # q bools, MPPI > 0.5
    selected_local: np.ndarray  # q x p bools
    beta_mean: np.ndarray  # (q+1) x p
    Z_mean: np.ndarray  # n x p
    Sigma_mean: np.ndarray  # p x p
    sigma2_eps_mean: float
    traces: dict = field(default_factory=dict)  # iter, sigma2_eps, pi, tausum
    n_stored: int = 0


@dataclass
class ModelContext:
    n: int
    p: int
    q: int
    K: int


def validate(dataset, hyper):
    """Bind (n, p, q, K) after checking every type invariant."""
    n, p, q = dataset.n, dataset.p, dataset.q
    if hyper.mu0.shape != (q + 1, p):
        raise ValidationError(
            f"mu0: expected shape {(q + 1, p)}, got {hyper.mu0.shape}"
        )
    return ModelContext(n=n, p=p, q=q, K=dataset.grid.K)
