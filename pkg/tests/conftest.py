import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings

from relaus.algebra import build_algebra, linear_a, semisimple, truncated_polynomial
from relaus.krull_schmidt import knit
from relaus.linalg import QQ
from relaus.recollement import build_setup

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parent.parent / "data"

settings.register_profile("relaus", max_examples=40, deadline=None)
settings.load_profile("relaus")

FLEET = {
    "L2": lambda: truncated_polynomial(2, QQ),
    "L3": lambda: truncated_polynomial(3, QQ),
    "L4": lambda: truncated_polynomial(4, QQ),
    "kA2": lambda: linear_a(2, QQ),
    "kxk": lambda: semisimple(2, QQ),
}


@lru_cache(maxsize=None)
def fleet_algebra(name):
    return build_algebra(FLEET[name](), name=name)


@lru_cache(maxsize=None)
def fleet_catalog(name):
    return knit(fleet_algebra(name))


@lru_cache(maxsize=None)
def fleet_setup(name):
    """X = mod A: the whole catalog."""
    return build_setup(fleet_algebra(name), fleet_catalog(name))


@pytest.fixture
def data_dir():
    return DATA


# acceptance lines ------------------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {desc}")
