import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from weylslice.core import IntPolynomial  # noqa: E402

PHI_SET = {
    "X^2": IntPolynomial([0, 0, 1]),
    "X^3": IntPolynomial([0, 0, 0, 1]),
    "X^3+X": IntPolynomial([0, 1, 0, 1]),
    "2X^4+X^2": IntPolynomial([0, 0, 1, 0, 2]),
}


@pytest.fixture(params=list(PHI_SET), ids=list(PHI_SET))
def phi(request):
    return PHI_SET[request.param]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
