import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from steerdma import ArrayGeometry  # noqa: E402


@pytest.fixture
def paper_geom():
    """Eight sensors on a 2 cm circle, c = 340 m/s."""
    return ArrayGeometry(8, 0.02, 340.0)


def omega(f_hz):
    return 2 * np.pi * f_hz


def random_feasible_system(rng, f_range=(250.0, 8000.0), max_m=12):
    """
    Draw (geometry, spec, frequency) until the design is solvable; return the
    constraint system and the solved filter.
    """
    from steerdma import DesignError, build_system, make_spec, solve_max_wng

    while True:
        m = int(rng.integers(3, max_m + 1))
        method = str(rng.choice(["DerivCon", "Null", "SymNull"]))
        geom = ArrayGeometry(m, float(rng.uniform(0.01, 0.05)))
        n = int(rng.integers(1, min(3, (m - 1) // 2) + 1))
        budget = m - (1 + n if method == "DerivCon" else 1)
        k = int(rng.integers(0, (budget // 2 if method == "SymNull" else min(budget, 4)) + 1))
        offsets = list(rng.uniform(np.radians(30), np.radians(330), size=k))
        try:
            spec = make_spec(method, n, float(rng.uniform(0, 2 * np.pi)), offsets)
            sys = build_system(geom, omega(rng.uniform(*f_range)), spec)
            return sys, solve_max_wng(sys)
        except DesignError:
            continue


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
