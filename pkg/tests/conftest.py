import numpy as np
import pytest

from picardevol import PolyCurve

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_poly_curve(algebra, rng, degree, scale=1.0):
    """Power-basis polynomial curve on one cell with Gaussian coefficients."""
    coeffs = rng.standard_normal((degree + 1, algebra.dim)) * scale
    if algebra.field == "complex":
        coeffs = coeffs + 1j * rng.standard_normal(coeffs.shape) * scale
    return PolyCurve.from_power(algebra, [0.0, 1.0], [coeffs])
