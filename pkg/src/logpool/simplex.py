"""Additive log-ratio coordinates for the open simplex (last weight is the reference)."""

from __future__ import annotations

import math
from typing import Sequence


def alr(w: Sequence[float]) -> list[float]:
    ref = math.log(w[-1])
    return [math.log(x) - ref for x in w[:-1]]


def alr_inv(z: Sequence[float]) -> tuple[float, ...]:
    m = max(0.0, *z) if z else 0.0
    e = [math.exp(v - m) for v in z]
    e.append(math.exp(-m))
    s = math.fsum(e)
    w = [v / s for v in e]
    # absorb rounding into the largest weight so the sum is 1 to within an ulp
    j = max(range(len(w)), key=w.__getitem__)
    w[j] = 1.0 - math.fsum(w[:j] + w[j + 1 :])
    return tuple(w)


def alr_log_jacobian(w: Sequence[float]) -> float:
    """ln |d w / d z| of the inverse transform: sum of ln w_i over all coordinates."""
    return math.fsum(math.log(x) for x in w)
