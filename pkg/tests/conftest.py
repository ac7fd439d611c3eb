import json
from pathlib import Path

import pytest

from logpool import OpinionPool, savchuk_pool

ROOT = Path(__file__).resolve().parents[1]
SAVCHUK_FILE = ROOT / "data" / "savchuk.json"

# filled by test_acceptance; printed at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def savchuk():
    return savchuk_pool()


@pytest.fixture
def twins():
    return OpinionPool.from_params([2.0, 2.0], [2.0, 2.0])


@pytest.fixture
def pool_file(tmp_path):
    def make(experts, observation=None, dirichlet_x=None, name="pool.json"):
        raw = {"experts": [{"label": f"e{i}", "a": a, "b": b} for i, (a, b) in enumerate(experts)]}
        if observation is not None:
            raw["observation"] = {"y": observation[0], "n": observation[1]}
        if dirichlet_x is not None:
            raw["dirichlet_x"] = list(dirichlet_x)
        path = tmp_path / name
        path.write_text(json.dumps(raw))
        return path

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
