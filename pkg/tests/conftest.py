import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eitswap.numeric import SolverSpec, run_scenario  # noqa: E402
from eitswap.scenario import fig2_scenario  # noqa: E402


@pytest.fixture(scope="session")
def fig2():
    return fig2_scenario()


@pytest.fixture(scope="session")
def fig2_series(fig2):
    """Full fig2 run, 512 x 512, Lax-Wendroff, CFL 0.8."""
    return run_scenario(fig2, SolverSpec(scheme="lax-wendroff", cfl=0.8, nx=512, ny=512))


def pytest_terminal_summary(terminalreporter):
    import acceptance_report
    if acceptance_report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report.LINES:
            terminalreporter.write_line(line)
