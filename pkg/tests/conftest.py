import sys

import numpy as np
import pytest
from hypothesis import settings

from bcwiener import Bicomplex, BCMatrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rand_bc(rng, scale=1.0) -> Bicomplex:
    z = scale * (rng.standard_normal(4))
    return Bicomplex(complex(z[0], z[1]), complex(z[2], z[3]))


def rand_cmat(rng, p, q, scale=1.0):
    return scale * (rng.standard_normal((p, q)) + 1j * rng.standard_normal((p, q)))


def rand_bcmat(rng, p, q, scale=1.0) -> BCMatrix:
    return BCMatrix(rand_cmat(rng, p, q, scale), rand_cmat(rng, p, q, scale))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        terminalreporter.write_line(lines[num])
