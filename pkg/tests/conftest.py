import pytest

from pdmscatter.model import ModelParams


@pytest.fixture
def nontrivial():
    """Generic parameter set with all barriers active."""
    return ModelParams(a=0.0, b=0.5, c=-0.5, A_theta=2.0, B_theta=1.0, C_phi=1.5, D_phi=2.0, alpha=1, f0=1.0)


@pytest.fixture
def trivial():
    """All ring strengths at their oscillator limits; b = 0."""
    return ModelParams(a=0.0, b=0.0, c=-0.5, A_theta=1.0, B_theta=0.0, C_phi=1.0, D_phi=1.0, alpha=1, f0=1.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
