import numpy as np
import pytest

from sglss.model import Dataset, Hyperparams, LocationGrid, MaternKernel


@pytest.fixture(scope="session")
def small_dataset():
    """A 20-subject, 25-site, 3-covariate dataset with known structure.

    25 sites keeps the Storey estimator's m >= 20 precondition satisfied
    for local-stage FDR tests.
    """
    rng = np.random.default_rng(99)
    side = 5
    coords = np.array(
        [(i, j) for i in range(side) for j in range(side)], dtype=np.float64
    )
    grid = LocationGrid(coords)
    n, p, q = 20, side * side, 3
    X = np.column_stack(
        [
            rng.normal(size=n),
            (rng.uniform(size=n) < 0.5).astype(np.float64),
            rng.normal(size=n),
        ]
    )
    beta = np.zeros((q + 1, p))
    beta[0] = 0.5
    beta[1] = 1.2  # active everywhere
    beta[2, : p // 2] = -1.0  # active on half the sites
    # covariate 3 inert
    Z = np.column_stack([np.ones(n), X]) @ beta + rng.normal(size=(n, p)) * 0.3
    Y = Z + rng.normal(size=(n, p))
    return Dataset(Y=Y, X=X, grid=grid)


@pytest.fixture()
def default_hyper(small_dataset):
    return Hyperparams.defaults(
        q=small_dataset.q,
        p=small_dataset.p,
        kernel=MaternKernel(sigma2_s=1.0, rho=1.0),
    )
