import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hml.generators import truncated_polynomial
from hml.algebra import free_module, make_module
from hml.linalg import GF, QQ, Mat

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[QQ, GF(5)], ids=["Q", "F5"])
def field(request):
    return request.param


@pytest.fixture
def dual(field):
    """k[x]/(x^2)."""
    return truncated_polynomial(field, 2)


@pytest.fixture
def simple(dual):
    f = dual.field
    return make_module(dual, [Mat.identity(f, 1), Mat.zeros(f, 1, 1)])


@pytest.fixture
def regular(dual):
    return free_module(dual, 1)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
