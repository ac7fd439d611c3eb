"""Pool files (JSON) and run reports.

A pool file is a JSON object::

    {
      "experts": [{"label": "expert_0", "a": 18.10, "b": 0.955}, ...],
      "observation": {"y": 9, "n": 10},
      "dirichlet_x": [0.25, 0.25, 0.25, 0.25]
    }

``observation`` and ``dirichlet_x`` are optional. Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .hierarchical import DirichletPrior
from .objectives import Observation, evidence, pooled_entropy, total_kl_loss
from .pool import BetaOpinion, OpinionPool, WeightVector, pool_beta


class PoolFileError(ValueError):
    """Malformed pool file; the message names the offending line or field."""


_TOP_KEYS = {"experts", "observation", "dirichlet_x"}
_EXPERT_KEYS = {"label", "a", "b"}
_OBS_KEYS = {"y", "n"}


@dataclass(frozen=True)
class PoolFile:
    pool: OpinionPool
    observation: Observation | None = None
    dirichlet: DirichletPrior | None = None

    def dirichlet_or_default(self) -> DirichletPrior:
        return self.dirichlet or DirichletPrior.symmetric(len(self.pool))


def _number(value, where, positive=True):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise PoolFileError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value) or (positive and value <= 0):
        raise PoolFileError(f"{where}: must be a positive finite number, got {value!r}")
    return float(value)


def _unknown(obj: dict, allowed: set, where: str):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise PoolFileError(f"{where}: unknown key(s) {', '.join(extra)}")


def parse_pool_file(text: str) -> PoolFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PoolFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise PoolFileError("top level: expected an object")
    _unknown(raw, _TOP_KEYS, "top level")

    experts = raw.get("experts")
    if not isinstance(experts, list) or not experts:
        raise PoolFileError("experts: expected a non-empty list")
    opinions = []
    for i, e in enumerate(experts):
        where = f"experts[{i}]"
        if not isinstance(e, dict):
            raise PoolFileError(f"{where}: expected an object")
        _unknown(e, _EXPERT_KEYS, where)
        for key in ("a", "b"):
            if key not in e:
                raise PoolFileError(f"{where}.{key}: missing")
        label = e.get("label", f"expert_{i}")
        if not isinstance(label, str) or not label:
            raise PoolFileError(f"{where}.label: expected a non-empty string")
        opinions.append(BetaOpinion(label, _number(e["a"], f"{where}.a"), _number(e["b"], f"{where}.b")))
    try:
        pool = OpinionPool(tuple(opinions))
    except ValueError as exc:
        raise PoolFileError(f"experts: {exc}") from None

    obs = None
    if "observation" in raw:
        o = raw["observation"]
        if not isinstance(o, dict):
            raise PoolFileError("observation: expected an object")
        _unknown(o, _OBS_KEYS, "observation")
        for key in ("y", "n"):
            v = o.get(key)
            if isinstance(v, bool) or not isinstance(v, int):
                raise PoolFileError(f"observation.{key}: expected an integer, got {v!r}")
        try:
            obs = Observation(o["y"], o["n"])
        except ValueError as exc:
            raise PoolFileError(f"observation: {exc}") from None

    prior = None
    if "dirichlet_x" in raw:
        xs = raw["dirichlet_x"]
        if not isinstance(xs, list):
            raise PoolFileError("dirichlet_x: expected a list")
        if len(xs) != len(pool):
            raise PoolFileError(f"dirichlet_x: has {len(xs)} entries for {len(pool)} experts")
        prior = DirichletPrior(tuple(_number(v, f"dirichlet_x[{i}]") for i, v in enumerate(xs)))
    return PoolFile(pool, obs, prior)


def load_pool_file(path: str | Path) -> PoolFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PoolFileError(f"{path}: {exc.strerror}") from None
    return parse_pool_file(text)


def dump_pool_file(pf: PoolFile) -> str:
    raw: dict[str, Any] = {"experts": [{"label": o.label, "a": o.a, "b": o.b} for o in pf.pool]}
    if pf.observation is not None:
        raw["observation"] = {"y": pf.observation.y, "n": pf.observation.n}
    if pf.dirichlet is not None:
        raw["dirichlet_x"] = list(pf.dirichlet.x)
    return json.dumps(raw, indent=2) + "\n"


@dataclass
class RunReport:
    method: str
    weights: list[float]
    a_star: float
    b_star: float
    entropy: float
    total_kl: float
    evidence: float | None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": self.method,
            "weights": list(self.weights),
            "pooled": {"a_star": self.a_star, "b_star": self.b_star},
            "entropy": self.entropy,
            "total_kl": self.total_kl,
            "evidence": self.evidence,
            "diagnostics": self.diagnostics,
        }


def build_report(method: str, pool: OpinionPool, weights, obs: Observation | None, diagnostics=None) -> RunReport:
    w = weights if isinstance(weights, WeightVector) else WeightVector(tuple(weights))
    p = pool_beta(pool, w)
    return RunReport(
        method=method,
        weights=list(w.alpha),
        a_star=p.a_star,
        b_star=p.b_star,
        entropy=pooled_entropy(p),
        total_kl=total_kl_loss(pool, w),
        evidence=None if obs is None else evidence(p.a_star, p.b_star, obs),
        diagnostics=dict(diagnostics or {}),
    )


def verify_report(report: RunReport, pool: OpinionPool, obs: Observation | None) -> float:
    """Largest absolute discrepancy between stored and recomputed scalars."""
    again = build_report(report.method, pool, report.weights, obs)
    pairs = [
        (report.a_star, again.a_star),
        (report.b_star, again.b_star),
        (report.entropy, again.entropy),
        (report.total_kl, again.total_kl),
    ]
    if obs is not None:
        pairs.append((report.evidence, again.evidence))
    return max(abs(x - y) for x, y in pairs)


def round_floats(obj, digits: int):
    """Round every float in a JSON-like structure to ``digits`` significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}") if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def dumps(obj, digits: int = 6) -> str:
    return json.dumps(round_floats(obj, digits), indent=2) + "\n"
