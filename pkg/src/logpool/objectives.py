"""Closed-form objectives over pooling weights for Beta opinions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pool import BetaOpinion, OpinionPool, PooledBeta, log_pool_integral, pool_beta
from .quadrature import QuadratureSpec, integrate_01
from .special import digamma, log_beta, log_choose


@dataclass(frozen=True)
class Observation:
    """``y`` successes in ``n`` Bernoulli trials (``n = 0`` means no data)."""

    y: int
    n: int

    def __post_init__(self):
        if int(self.y) != self.y or int(self.n) != self.n:
            raise ValueError("y and n must be integers")
        if not 0 <= self.y <= self.n:
            raise ValueError(f"need 0 <= y <= n, got y={self.y}, n={self.n}")

    @property
    def mle(self) -> float:
        return self.y / self.n


def beta_entropy(a: float, b: float) -> float:
    return (
        log_beta(a, b)
        - (a - 1.0) * digamma(a)
        - (b - 1.0) * digamma(b)
        + (a + b - 2.0) * digamma(a + b)
    )


def beta_kl(a1: float, b1: float, a2: float, b2: float) -> float:
    """KL(Beta(a1, b1) || Beta(a2, b2))."""
    return (
        log_beta(a2, b2)
        - log_beta(a1, b1)
        + (a1 - a2) * digamma(a1)
        + (b1 - b2) * digamma(b1)
        + (a2 - a1 + b2 - b1) * digamma(a1 + b1)
    )


def pooled_entropy(p: PooledBeta) -> float:
    """Differential entropy of the pooled Beta(a*, b*)."""
    return beta_entropy(p.a_star, p.b_star)


def kl_to_pool(opinion: BetaOpinion, p: PooledBeta) -> float:
    """KL divergence from an expert's opinion to the pooled prior."""
    return beta_kl(opinion.a, opinion.b, p.a_star, p.b_star)


def total_kl_loss(pool: OpinionPool, w) -> float:
    p = pool_beta(pool, w)
    return math.fsum(kl_to_pool(o, p) for o in pool)


def total_kl_loss_fn(pool: OpinionPool):
    """Return a fast ``w -> total_kl_loss(pool, w)`` for repeated evaluation.

    Same per-expert sum, with the terms that depend only on the expert
    computed once.
    """
    terms = [
        (o.a, o.b, log_beta(o.a, o.b), digamma(o.a), digamma(o.b), digamma(o.a + o.b))
        for o in pool
    ]

    def loss(w) -> float:
        p = pool_beta(pool, w)
        a_s, b_s = p.a_star, p.b_star
        lb_s = log_beta(a_s, b_s)
        return math.fsum(
            lb_s - lb + (a - a_s) * pa + (b - b_s) * pb + (a_s - a + b_s - b) * pab
            for a, b, lb, pa, pb, pab in terms
        )

    return loss


def kl_loss_expansion(pool: OpinionPool, w, log_integral_coefficient: float | None = None) -> float:
    """Total KL loss through the cross-divergence expansion.

    ``c * ln I(w) + sum_i sum_{j != i} w_j KL(f_i || f_j)`` with ``I`` the
    pooling integral. Summing the per-expert divergences gives
    ``c = len(pool)``, the default; other coefficients are accepted only to
    compare against alternative forms of the expansion.
    """
    c = len(pool) if log_integral_coefficient is None else log_integral_coefficient
    cross = math.fsum(
        wj * beta_kl(fi.a, fi.b, fj.a, fj.b)
        for i, fi in enumerate(pool)
        for j, (fj, wj) in enumerate(zip(pool, w))
        if i != j and wj > 0
    )
    return c * log_pool_integral(pool, w) + cross


def log_evidence(a: float, b: float, obs: Observation) -> float:
    return log_choose(obs.n, obs.y) + log_beta(a + obs.y, b + obs.n - obs.y) - log_beta(a, b)


def evidence(a: float, b: float, obs: Observation) -> float:
    """Beta-binomial marginal probability of ``obs`` under a Beta(a, b) prior."""
    return math.exp(log_evidence(a, b, obs))


def posterior_beta(a: float, b: float, obs: Observation) -> tuple[float, float]:
    return a + obs.y, b + obs.n - obs.y


def expected_neg_log_density(opinion: BetaOpinion, p: PooledBeta, spec: QuadratureSpec | None = None) -> float:
    """E_pi[-ln f_i] under the pooled prior, by quadrature (no closed form used)."""

    def integrand(theta, omt):
        return -np.exp(p.log_density(theta, omt)) * opinion.log_density(theta, omt)

    return integrate_01(integrand, spec, complement=True).value
