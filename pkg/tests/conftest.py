import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from erspolar import code_new, field_new, make_permutation, pretransform  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gf5():
    return field_new(5)


@pytest.fixture(scope="session")
def pt_32_16(gf5):
    code = code_new(gf5, 16)
    return pretransform(code, make_permutation(32, "natural_locator", code=code))


@pytest.fixture(scope="session")
def pt_32_15(gf5):
    code = code_new(gf5, 15)
    return pretransform(code, make_permutation(32, "natural_locator", code=code))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
