"""Scalar special functions used by the Beta closed forms.

Everything is evaluated in log space. Scalars go through :mod:`math` for
speed; array arguments are dispatched to :mod:`scipy.special`.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


def _is_scalar(x) -> bool:
    return isinstance(x, (float, int)) or np.ndim(x) == 0


def _check_positive(name, x):
    if _is_scalar(x):
        if not x > 0:
            raise DomainError(f"{name} must be > 0, got {x!r}")
    elif not np.all(np.asarray(x) > 0):
        raise DomainError(f"{name} must be > 0 elementwise")


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    _check_positive("x", x)
    if _is_scalar(x):
        return math.lgamma(x)
    return _sp.gammaln(np.asarray(x, dtype=float))


def digamma(x):
    """psi(x) = d/dx ln Gamma(x) for x > 0."""
    _check_positive("x", x)
    if _is_scalar(x):
        return float(_sp.psi(x))
    return _sp.psi(np.asarray(x, dtype=float))


def log_beta(a, b):
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)."""
    _check_positive("a", a)
    _check_positive("b", b)
    if _is_scalar(a) and _is_scalar(b):
        # sum a, b in a fixed order so log_beta(a, b) == log_beta(b, a) exactly
        lo, hi = (a, b) if a <= b else (b, a)
        return math.lgamma(lo) + math.lgamma(hi) - math.lgamma(lo + hi)
    return _sp.betaln(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def log_choose(n: int, y: int) -> float:
    """ln C(n, y) for integers 0 <= y <= n."""
    if n < 0 or y < 0 or y > n:
        raise DomainError(f"need 0 <= y <= n, got n={n}, y={y}")
    return math.lgamma(n + 1) - math.lgamma(y + 1) - math.lgamma(n - y + 1)
