import numpy as np
import pytest

from lmmstab import kernels
from lmmstab.methods import catalog, get_method, make_method


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def midpoint():
    return get_method("midpoint")


@pytest.fixture
def milne():
    return get_method("milne")


@pytest.fixture
def quarter_turn():
    """rho(z) = z^3 - z^2 + z - 1 = (z - 1)(z^2 + 1): weakly stable, roots 1, +-i."""
    return make_method("quarter-turn", [1.0, -1.0, 1.0, -1.0], [0.0, 1.0, 0.0, 0.0])


CATALOG_NAMES = [m.name for m in catalog()]
WEAK_NAMES = ["midpoint", "milne"]
STRONG_NAMES = [n for n in CATALOG_NAMES if n not in WEAK_NAMES]


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
