import numpy as np
import pytest

from quantpoly.sampling import BENCHMARKS, draw_sample


def simpson(f, a, b, intervals):
    """Composite Simpson rule with an even number of intervals."""
    if intervals % 2:
        intervals += 1
    x = np.linspace(a, b, intervals + 1)
    y = f(x)
    h = (b - a) / intervals
    return h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def simpson_cumulative(f, a, b, intervals):
    """Simpson integrals from ``a`` to each even grid node."""
    x = np.linspace(a, b, intervals + 1)
    y = f(x)
    h = (b - a) / intervals
    panels = h / 3 * (y[:-2:2] + 4 * y[1:-1:2] + y[2::2])
    return x[::2], np.concatenate(([0.0], np.cumsum(panels)))


@pytest.fixture(scope="session")
def benchmark_samples():
    cache = {}

    def get(name, n=50000, seed=0):
        key = (name, n, seed)
        if key not in cache:
            cache[key] = draw_sample(BENCHMARKS[name], n, seed)
        return cache[key]

    return get


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
