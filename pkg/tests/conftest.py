import pytest

from qdisloc.params import ScalarPotential, SystemParams

# Caption parameters of the Q sweep: l = lambda = m = Cm = C1 = C2 = C3 = 1, k = beta = 0.5.
FIG1_PARAMS = SystemParams(m=1.0, Q=1.0, lam=1.0, Cm=1.0, beta=0.5, k=0.5)
FIG1_POTENTIAL = ScalarPotential(1.0, 1.0, 1.0)
FIG1_L = 1

# (criterion number, line); filled by test_acceptance.py
ACCEPTANCE_LINES = []


def record_acceptance(number, passed, detail):
    status = "PASS" if passed else "FAIL"
    line = f"[{status}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return passed


@pytest.fixture
def fig1():
    return FIG1_PARAMS, FIG1_POTENTIAL, FIG1_L


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
