import sys

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from matdyn.acceptance import DEFAULT_SEED
from matdyn.core import Mat2

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

unit_complex = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)
matrices = st.builds(Mat2, unit_complex, unit_complex, unit_complex, unit_complex)


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


def close(a: Mat2, b: Mat2, tol: float) -> bool:
    return (a - b).norm() <= tol * (1 + b.norm())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
