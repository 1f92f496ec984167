import random
import time

import pytest

from hypersd.hypergraph import Hypergraph, random_hypergraph

WORKED = [(0,), (1,), (0, 1), (1, 2), (0, 1, 2)]


def worked_example() -> Hypergraph:
    return Hypergraph(3, WORKED)


def corpus(n=200, max_vertices=6, max_edges=20):
    """Seeded random hypergraphs; instance i uses ``random.Random(i)``."""
    out = []
    for seed in range(n):
        rng = random.Random(seed)
        v = rng.randint(1, max_vertices)
        m = rng.randint(1, min(max_edges, 2 ** v - 1))
        out.append(random_hypergraph(v, m, rng, allow_isolated=True))
    return out


@pytest.fixture
def example():
    return worked_example()


@pytest.fixture(scope="session")
def random_corpus():
    return corpus()


# -- acceptance reporting ----------------------------------------------------

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    t0 = time.perf_counter()
    yield
    item._elapsed = time.perf_counter() - t0


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        number, title = mark.args
        _RESULTS[number] = (title, rep.passed, getattr(item, "_elapsed", 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, secs = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f}s)")
