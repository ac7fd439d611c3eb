"""Logarithmic pooling of Beta expert opinions with objective weight selection."""

from .hierarchical import (
    DirichletPrior,
    HierPosterior,
    McmcConfig,
    log_posterior_weight_density,
    marginal_prior_density,
    posterior_theta_draws,
    run_mcmc,
    sample_dirichlet,
)
from .objectives import (
    Observation,
    evidence,
    kl_to_pool,
    pooled_entropy,
    posterior_beta,
    total_kl_loss,
)
from .optimizer import OptimizerConfig, OptimResult, maximize_entropy, minimize_kl
from .pool import (
    BetaOpinion,
    OpinionPool,
    PooledBeta,
    WeightVector,
    grid_pool,
    log_pool_integral,
    pool_beta,
    pooled_log_density,
)
from .quadrature import QuadratureSpec, entropy_oracle, integrate_01

SAVCHUK_A = (18.10, 3.44, 8.32, 1.98)
SAVCHUK_B = (0.955, 0.860, 0.924, 0.848)


def savchuk_pool() -> OpinionPool:
    """The four-expert survival-probability pool used throughout the tests."""
    return OpinionPool.from_params(SAVCHUK_A, SAVCHUK_B)
