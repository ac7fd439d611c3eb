"""Dirichlet prior on the pooling weights, sampled by random-walk Metropolis.

theta is integrated out with the beta-binomial identity, so the chain runs
on the K additive log-ratio coordinates of the weights only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .objectives import Observation, log_evidence
from .pool import OpinionPool, WeightVector, as_weights, pool_beta
from .simplex import alr_inv
from .special import DomainError, log_beta


@dataclass(frozen=True)
class DirichletPrior:
    x: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not self.x or any(not v > 0 for v in self.x):
            raise ValueError(f"Dirichlet hyperparameters must be positive: {self.x}")

    @classmethod
    def symmetric(cls, k: int, value: float | None = None) -> "DirichletPrior":
        """``k`` equal hyperparameters, ``1/k`` each by default."""
        return cls((1.0 / k if value is None else value,) * k)

    def __len__(self) -> int:
        return len(self.x)

    @property
    def mean(self) -> np.ndarray:
        x = np.array(self.x)
        return x / x.sum()

    def log_kernel(self, w: Sequence[float]) -> float:
        return math.fsum((xi - 1.0) * math.log(wi) for xi, wi in zip(self.x, w))


@dataclass(frozen=True)
class McmcConfig:
    iterations: int = 200_000
    burn_in: int = 20_000
    thin: int = 10
    proposal_scale: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if min(self.iterations, self.burn_in, self.thin) < 1 or not self.proposal_scale > 0:
            raise ValueError("MCMC settings must be positive")
        if self.burn_in >= self.iterations:
            raise ValueError("burn_in must be smaller than iterations")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class HierPosterior:
    draws: np.ndarray
    posterior_mean: np.ndarray
    acceptance_rate: float
    effective_sample_size: np.ndarray
    burn_in_acceptance_rate: float

    @property
    def degenerate(self) -> bool:
        """True when the chain never moved, or never rejected, during burn-in."""
        return self.burn_in_acceptance_rate in (0.0, 1.0)

    @property
    def mc_standard_error(self) -> np.ndarray:
        return self.draws.std(axis=0, ddof=1) / np.sqrt(self.effective_sample_size)

    @property
    def mean_weights(self) -> WeightVector:
        m = self.posterior_mean
        return WeightVector(tuple(m / m.sum()))


def sample_dirichlet(prior: DirichletPrior, count: int, seed: int) -> np.ndarray:
    """``count`` i.i.d. Dirichlet draws, one per row."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    return rng.dirichlet(np.array(prior.x), size=count)


def log_posterior_weight_density(pool: OpinionPool, prior: DirichletPrior, obs: Observation, w) -> float:
    """Unnormalised log posterior of the weights on the open simplex."""
    w = as_weights(w)
    if not w.is_interior:
        raise DomainError("weight density is defined on the open simplex only")
    if len(prior) != len(w):
        raise ValueError("prior and weights differ in length")
    p = pool_beta(pool, w)
    return prior.log_kernel(w.alpha) + log_evidence(p.a_star, p.b_star, obs)


def effective_sample_size(x: np.ndarray) -> float:
    """ESS of a scalar chain, Geyer's initial positive sequence estimator."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    x = x - x.mean()
    var = x @ x
    if n < 4 or var == 0:
        return float(n)
    f = np.fft.rfft(x, 2 * n)
    acf = np.fft.irfft(f * np.conj(f))[:n] / var
    tau = -1.0
    for k in range(0, n - 1, 2):
        pair = acf[k] + acf[k + 1]
        if pair <= 0:
            break
        tau += 2 * pair
    return float(n / max(tau, 1.0 / n))


def run_mcmc(pool: OpinionPool, prior: DirichletPrior, obs: Observation, cfg: McmcConfig | None = None) -> HierPosterior:
    """Random-walk Metropolis over the pooling weights.

    The target in log-ratio coordinates is the Dirichlet kernel times the
    beta-binomial evidence of the pooled prior, times the Jacobian
    prod(w_i). The chain starts at equal weights.
    """
    cfg = cfg or McmcConfig()
    k1 = len(pool)
    if len(prior) != k1:
        raise ValueError("prior and pool differ in length")
    a = [o.a for o in pool]
    b = [o.b for o in pool]
    x = prior.x
    y, n = obs.y, obs.n

    def log_target(w):
        a_s = math.fsum(wi * ai for wi, ai in zip(w, a))
        b_s = math.fsum(wi * bi for wi, bi in zip(w, b))
        # Dirichlet kernel (x_i - 1) ln w_i plus Jacobian ln w_i
        lp = math.fsum(xi * math.log(wi) for xi, wi in zip(x, w))
        if n:
            lp += log_beta(a_s + y, b_s + n - y) - log_beta(a_s, b_s)
        return lp

    rng = np.random.default_rng(cfg.seed)
    steps = (rng.standard_normal((cfg.iterations, k1 - 1)) * cfg.proposal_scale).tolist()
    log_u = np.log(rng.random(cfg.iterations)).tolist()

    z = [0.0] * (k1 - 1)
    w = alr_inv(z)
    lp = log_target(w)
    kept = []
    accepted = burn_accepted = 0
    for i in range(cfg.iterations):
        z_new = [zi + s for zi, s in zip(z, steps[i])]
        w_new = alr_inv(z_new)
        if min(w_new) > 0.0:
            lp_new = log_target(w_new)
            if log_u[i] < lp_new - lp:
                z, w, lp = z_new, w_new, lp_new
                if i < cfg.burn_in:
                    burn_accepted += 1
                else:
                    accepted += 1
        if i >= cfg.burn_in and (i - cfg.burn_in) % cfg.thin == 0:
            kept.append(w)

    draws = np.array(kept)
    ess = np.array([effective_sample_size(draws[:, j]) for j in range(k1)])
    return HierPosterior(
        draws=draws,
        posterior_mean=draws.mean(axis=0),
        acceptance_rate=accepted / (cfg.iterations - cfg.burn_in),
        effective_sample_size=ess,
        burn_in_acceptance_rate=burn_accepted / cfg.burn_in,
    )


class MarginalDensity(NamedTuple):
    value: np.ndarray | float
    stderr: np.ndarray | float


def _beta_density_at(theta, omt, a_s, b_s):
    """Beta densities for many (a*, b*) pairs (rows) at many theta (columns)."""
    theta = np.atleast_1d(theta)[None, :]
    omt = np.atleast_1d(omt)[None, :]
    a_s = a_s[:, None]
    b_s = b_s[:, None]
    return np.exp((a_s - 1) * np.log(theta) + (b_s - 1) * np.log(omt) - log_beta(a_s, b_s))


def marginal_prior_density(
    pool: OpinionPool,
    prior: DirichletPrior,
    theta,
    mc_samples: int,
    seed: int,
    *,
    omt=None,
) -> MarginalDensity:
    """Monte Carlo estimate of the marginal prior of theta under the Dirichlet weights.

    ``theta`` may be a scalar or an array; the same weight draws are used for
    every point. ``omt`` optionally supplies ``1 - theta`` computed without
    cancellation (as :func:`integrate_01` does with ``complement=True``).
    """
    th = np.asarray(theta, dtype=float)
    omt = 1.0 - th if omt is None else np.asarray(omt, dtype=float)
    if np.any((th <= 0) | (omt <= 0)):
        raise DomainError("theta must lie in (0, 1)")
    w = sample_dirichlet(prior, mc_samples, seed)
    dens = _beta_density_at(th, omt, w @ pool.a, w @ pool.b)
    value = dens.mean(axis=0)
    stderr = dens.std(axis=0, ddof=1) / math.sqrt(mc_samples) if mc_samples > 1 else np.full_like(value, np.inf)
    if th.ndim == 0:
        return MarginalDensity(float(value[0]), float(stderr[0]))
    return MarginalDensity(value, stderr)


def posterior_density(posterior: HierPosterior, pool: OpinionPool, obs: Observation, theta, *, omt=None) -> np.ndarray:
    """Posterior density of theta: the conjugate Beta posterior averaged over weight draws."""
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    omt = 1.0 - th if omt is None else np.atleast_1d(np.asarray(omt, dtype=float))
    d = posterior.draws
    return _beta_density_at(th, omt, d @ pool.a + obs.y, d @ pool.b + obs.n - obs.y).mean(axis=0)


def posterior_theta_draws(posterior: HierPosterior, pool: OpinionPool, obs: Observation, seed: int) -> np.ndarray:
    """One theta per weight draw from Beta(a* + y, b* + n - y)."""
    d = posterior.draws
    if len(d) == 0:
        raise ValueError("posterior has no draws")
    rng = np.random.default_rng(seed)
    return rng.beta(d @ pool.a + obs.y, d @ pool.b + obs.n - obs.y)
