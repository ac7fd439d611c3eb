"""Choosing pooling weights by optimisation over the simplex.

Both criteria depend on the weights only through (a*, b*), and both are
known to put their optimum on the boundary of the simplex for realistic
pools. The search therefore combines exact boundary candidates (vertices,
and a re-solve restricted to the face the best point approaches) with
multi-start Nelder-Mead in additive log-ratio coordinates, which cover
only the interior.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .objectives import pooled_entropy, total_kl_loss, total_kl_loss_fn
from .pool import OpinionPool, WeightVector, pool_beta
from .simplex import alr, alr_inv

BOUNDARY_THRESHOLD = 1e-6
TIE_TOLERANCE = 1e-12


class Method(str, enum.Enum):
    MAX_ENT = "MaxEnt"
    MIN_KL = "MinKL"


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 50
    max_iterations: int = 2000
    tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1 or not self.tolerance > 0 or self.seed < 0:
            raise ValueError("optimizer settings must be positive")


@dataclass(frozen=True)
class OptimResult:
    weights: WeightVector
    objective_value: float
    method: Method
    converged: bool
    candidates_evaluated: int
    at_boundary: bool


class _Counter:
    def __init__(self, fn, callback):
        self.fn = fn
        self.callback = callback
        self.calls = 0

    def __call__(self, w):
        self.calls += 1
        if self.callback is not None:
            self.callback(w)
        return self.fn(w)


def _nelder_mead(loss, w0, cfg):
    """Minimise ``loss`` over the face spanned by the coordinates of ``w0``."""
    z0 = np.array(alr(w0))
    k = len(z0)
    simplex = np.vstack([z0, z0 + np.eye(k)])
    res = minimize(
        lambda z: loss(alr_inv(list(z))),
        z0,
        method="Nelder-Mead",
        options=dict(
            maxiter=cfg.max_iterations,
            maxfev=4 * cfg.max_iterations,
            xatol=1e-10,
            fatol=cfg.tolerance,
            initial_simplex=simplex,
        ),
    )
    return alr_inv(list(res.x)), bool(res.success)


def _embed(face_w, active, n):
    w = [0.0] * n
    for i, x in zip(active, face_w):
        w[i] = x
    return tuple(w)


def _optimise(
    pool: OpinionPool,
    cfg: OptimizerConfig,
    loss: Callable,
    method: Method,
    callback: Callable | None,
    exact: Callable,
) -> OptimResult:
    n = len(pool)
    f = _Counter(loss, callback)
    # (loss, weights, converged)
    candidates = [(f(WeightVector.vertex(n, j).alpha), WeightVector.vertex(n, j).alpha, True) for j in range(n)]
    if n > 1:
        center = WeightVector.equal(n).alpha
        candidates.append((f(center), center, True))
        rng = np.random.default_rng(cfg.seed)
        starts = rng.dirichlet(np.ones(n), size=cfg.restarts)
        local = []
        for s in starts:
            s = np.maximum(s, 1e-300)
            w, ok = _nelder_mead(f, tuple(s / s.sum()), cfg)
            local.append((f(w), w, ok))
        candidates += local

        best_local = min(local, key=lambda c: c[0])
        active = [i for i, x in enumerate(best_local[1]) if x >= BOUNDARY_THRESHOLD]
        if 1 < len(active) < n:
            face_start = np.array([best_local[1][i] for i in active])
            face_start = tuple(face_start / face_start.sum())
            face_w, ok = _nelder_mead(lambda fw: f(_embed(fw, active, n)), face_start, cfg)
            w = _embed(face_w, active, n)
            candidates.append((f(w), w, ok))

    best_val = min(c[0] for c in candidates)
    ties = [c for c in candidates if c[0] <= best_val + TIE_TOLERANCE]
    val, w, ok = min(ties, key=lambda c: c[1])
    weights = WeightVector(w)
    value = exact(weights)
    return OptimResult(
        weights=weights,
        objective_value=-value if method is Method.MAX_ENT else value,
        method=method,
        converged=ok,
        candidates_evaluated=f.calls,
        at_boundary=any(x < BOUNDARY_THRESHOLD for x in w),
    )


def maximize_entropy(pool: OpinionPool, cfg: OptimizerConfig | None = None, callback: Callable | None = None) -> OptimResult:
    """Weights maximising the differential entropy of the pooled prior.

    The problem is not concave, so the result is the best point found among
    the vertices, the equal-weight centre and the local searches.
    ``callback`` (if given) receives every weight tuple that is evaluated.
    """
    return _optimise(
        pool,
        cfg or OptimizerConfig(),
        lambda w: -pooled_entropy(pool_beta(pool, w)),
        Method.MAX_ENT,
        callback,
        lambda w: -pooled_entropy(pool_beta(pool, w)),
    )


def minimize_kl(pool: OpinionPool, cfg: OptimizerConfig | None = None, callback: Callable | None = None) -> OptimResult:
    """Weights minimising the summed KL divergence from each expert to the pool."""
    return _optimise(
        pool,
        cfg or OptimizerConfig(),
        total_kl_loss_fn(pool),
        Method.MIN_KL,
        callback,
        lambda w: total_kl_loss(pool, w),
    )
