"""Bayesian image-on-scalar regression with global-local spike-and-slab
selection and an inverse-Wishart spatial covariance, plus mass-univariate
baselines, synthetic scenarios, and evaluation metrics."""

__version__ = "0.1.0"

from .model import (
    ChainState,
    Dataset,
    Hyperparams,
    LocationGrid,
    MaternKernel,
    ModelContext,
    NumericError,
    PosteriorSummary,
    ValidationError,
    validate,
)
from .kernels import (
    ScaleMatrix,
    build_psi,
    fit_kernel_empirical,
    matern52,
    sample_iw_dawid,
)
from .sampler import (
    ChainConfig,
    ChainFailure,
    bayes_factor_theta,
    geweke_z,
    init_state,
    pool_summaries,
    run_chain,
    sparsity_discount,
    update_beta,
    update_Sigma,
    update_sigma2_eps,
    update_tau_pi,
    update_Z,
)
from .simulate import (
    GroundTruth,
    gen_scenario1,
    gen_scenario2,
    lattice_grid,
    rescale_beta,
    sample_gp,
)
from .mua import (
    MuaResult,
    MuaSelection,
    fdr_bh,
    fdr_by,
    fdr_sbh,
    mua_pipeline,
    ols_per_location,
    simes_combine,
)
from .metrics import SelectionMetrics, mean_se, mse, precision_recall_f1

__all__ = [
    "ChainConfig",
    "ChainFailure",
    "ChainState",
    "Dataset",
    "GroundTruth",
    "Hyperparams",
    "LocationGrid",
    "MaternKernel",
    "ModelContext",
    "MuaResult",
    "MuaSelection",
    "NumericError",
    "PosteriorSummary",
    "ScaleMatrix",
    "SelectionMetrics",
    "ValidationError",
    "bayes_factor_theta",
    "build_psi",
    "fdr_bh",
    "fdr_by",
    "fdr_sbh",
    "fit_kernel_empirical",
    "gen_scenario1",
    "gen_scenario2",
    "geweke_z",
    "init_state",
    "lattice_grid",
    "matern52",
    "mean_se",
    "mse",
    "mua_pipeline",
    "ols_per_location",
    "pool_summaries",
    "precision_recall_f1",
    "rescale_beta",
    "run_chain",
    "sample_gp",
    "sample_iw_dawid",
    "simes_combine",
    "sparsity_discount",
    "update_Sigma",
    "update_Z",
    "update_beta",
    "update_sigma2_eps",
    "update_tau_pi",
    "validate",
]
