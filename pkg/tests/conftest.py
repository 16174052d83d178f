import numpy as np
import pytest

from blochfsm.config import SimulationConfig
from blochfsm.generators import make_basis, structure_constants

# sqrt(pi) * erf(5): area of the unit Gaussian (tau=5, sigma=1) over [0, 10]
GAUSS_AREA = 1.772453850902791


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


@pytest.fixture(scope="session")
def su2():
    b = make_basis(2)
    return b, structure_constants(b)


@pytest.fixture(scope="session")
def su3():
    b = make_basis(3)
    return b, structure_constants(b)


@pytest.fixture
def standard():
    return SimulationConfig()


# acceptance report lines, echoed in the terminal summary even without -s
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
