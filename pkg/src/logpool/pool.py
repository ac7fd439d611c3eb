"""Expert pools and the logarithmic pooling operator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .quadrature import QuadratureSpec, DEFAULT_SPEC, integrate_01
from .special import DomainError, log_beta

SIMPLEX_ATOL = 1e-12


@dataclass(frozen=True)
class BetaOpinion:
    label: str
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"opinion {self.label!r}: Beta shapes must be positive, got a={self.a}, b={self.b}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def mean(self) -> float:
        return self.a / (self.a + self.b)

    def log_density(self, theta, omt=None):
        return beta_log_density(self.a, self.b)(theta, omt)


@dataclass(frozen=True)
class OpinionPool:
    opinions: tuple[BetaOpinion, ...]

    def __post_init__(self):
        object.__setattr__(self, "opinions", tuple(self.opinions))
        if not self.opinions:
            raise ValueError("a pool needs at least one opinion")
        labels = [o.label for o in self.opinions]
        if len(set(labels)) != len(labels):
            raise ValueError(f"opinion labels must be unique: {labels}")

    @classmethod
    def from_params(cls, a: Sequence[float], b: Sequence[float], labels: Sequence[str] | None = None) -> "OpinionPool":
        if len(a) != len(b):
            raise ValueError("a and b must have equal length")
        if labels is None:
            labels = [f"expert_{i}" for i in range(len(a))]
        return cls(tuple(BetaOpinion(lab, ai, bi) for lab, ai, bi in zip(labels, a, b)))

    def __len__(self) -> int:
        return len(self.opinions)

    def __iter__(self) -> Iterator[BetaOpinion]:
        return iter(self.opinions)

    def __getitem__(self, i: int) -> BetaOpinion:
        return self.opinions[i]

    @property
    def a(self) -> np.ndarray:
        return np.array([o.a for o in self.opinions])

    @property
    def b(self) -> np.ndarray:
        return np.array([o.b for o in self.opinions])

    @property
    def labels(self) -> list[str]:
        return [o.label for o in self.opinions]


@dataclass(frozen=True)
class WeightVector:
    """A point on the closed probability simplex."""

    alpha: tuple[float, ...]

    def __post_init__(self):
        alpha = tuple(float(x) for x in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if not alpha:
            raise ValueError("empty weight vector")
        if any(not np.isfinite(x) or x < 0 for x in alpha):
            raise ValueError(f"weights must be finite and non-negative: {alpha}")
        if abs(sum(alpha) - 1.0) > SIMPLEX_ATOL:
            raise ValueError(f"weights must sum to 1 (got {sum(alpha)!r})")

    @classmethod
    def equal(cls, k: int) -> "WeightVector":
        return cls((1.0 / k,) * k)

    @classmethod
    def vertex(cls, k: int, j: int) -> "WeightVector":
        return cls(tuple(1.0 if i == j else 0.0 for i in range(k)))

    def __len__(self) -> int:
        return len(self.alpha)

    def __iter__(self):
        return iter(self.alpha)

    def __getitem__(self, i):
        return self.alpha[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.alpha)

    @property
    def is_interior(self) -> bool:
        return all(x > 0 for x in self.alpha)


def as_weights(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(tuple(w))


@dataclass(frozen=True)
class PooledBeta:
    a_star: float
    b_star: float
    weights: WeightVector | None = None
    source: OpinionPool | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not (self.a_star > 0 and self.b_star > 0):
            raise ValueError("pooled Beta shapes must be positive")

    def log_density(self, theta, omt=None):
        return beta_log_density(self.a_star, self.b_star)(theta, omt)


def beta_log_density(a: float, b: float) -> Callable:
    """Return ``logf(theta, omt=None)`` for the Beta(a, b) density.

    ``omt`` is ``1 - theta`` when the caller has it without cancellation.
    """
    lb = log_beta(a, b)

    def logf(theta, omt=None):
        theta = np.asarray(theta, dtype=float)
        omt = 1.0 - theta if omt is None else np.asarray(omt, dtype=float)
        with np.errstate(divide="ignore"):
            return (a - 1.0) * np.log(theta) + (b - 1.0) * np.log(omt) - lb

    return logf


def _check_lengths(pool: OpinionPool, w: WeightVector):
    if len(pool) != len(w):
        raise ValueError(f"pool has {len(pool)} opinions but {len(w)} weights were given")


def pool_beta(pool: OpinionPool, w) -> PooledBeta:
    """Pooled Beta parameters a* = sum(alpha_i a_i), b* = sum(alpha_i b_i)."""
    w = as_weights(w)
    _check_lengths(pool, w)
    # fsum is correctly rounded, hence independent of opinion order
    a_star = math.fsum(x * o.a for x, o in zip(w, pool))
    b_star = math.fsum(x * o.b for x, o in zip(w, pool))
    return PooledBeta(a_star, b_star, w, pool)


def pooled_log_density(p: PooledBeta, theta: float) -> float:
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta!r}")
    return float(p.log_density(theta))


def log_pool_integral(pool: OpinionPool, w) -> float:
    """ln of int prod f_i^alpha_i over (0, 1).

    Zero at the vertices and for identical opinions, negative otherwise.
    The pooled density is the integrand divided by this integral. The
    function is convex in the weights; its negative is the log normaliser
    that the minimum-KL criterion maximises.
    """
    p = pool_beta(pool, w)
    return log_beta(p.a_star, p.b_star) - sum(
        x * log_beta(o.a, o.b) for x, o in zip(p.weights, pool) if x > 0
    )


@dataclass(frozen=True)
class GridPool:
    theta: np.ndarray
    density: np.ndarray
    log_norm: float
    log_density: Callable = field(repr=False)


def open_grid(points: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    theta = np.linspace(eps, 1.0 - eps, points)
    return theta, 1.0 - theta


def grid_pool(
    log_densities: Sequence[Callable],
    w,
    spec: QuadratureSpec | None = None,
    points: int = 513,
) -> GridPool:
    """Normalised geometric mixture prod f_i^alpha_i of arbitrary densities.

    Each element of ``log_densities`` is called as ``logf(theta, omt)``.
    Opinions with zero weight drop out (f^0 = 1). The normaliser is found by
    quadrature and the result is tabulated on an open uniform grid on
    (eps, 1 - eps).
    """
    spec = spec or DEFAULT_SPEC
    w = as_weights(w)
    if len(w) != len(log_densities):
        raise ValueError("one weight per density is required")
    active = [(x, f) for x, f in zip(w, log_densities) if x > 0]

    def log_kernel(theta, omt=None):
        theta = np.asarray(theta, dtype=float)
        omt = 1.0 - theta if omt is None else omt
        return sum(x * np.asarray(f(theta, omt)) for x, f in active)

    with np.errstate(over="ignore"):
        res = integrate_01(lambda t, u: np.exp(log_kernel(t, u)), spec, complement=True)
    if not (res.converged and np.isfinite(res.value) and res.value > 0):
        raise FloatingPointError("pooled kernel does not have a finite positive integral")
    log_norm = float(np.log(res.value))

    def log_density(theta, omt=None):
        return log_kernel(theta, omt) - log_norm

    theta, omt = open_grid(points, spec.endpoint_epsilon)
    return GridPool(theta, np.exp(log_density(theta, omt)), log_norm, log_density)
