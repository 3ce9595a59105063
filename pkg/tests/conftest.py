import datetime as dt

import numpy as np
import pytest

from seminalrank.network import CitationNetwork
from seminalrank.synth import SynthParams, generate_synthetic


def make_net(dates, edges, as_of=None):
    """Network with ids n000, n001, ... in the given (already sorted) date order."""
    n = len(dates)
    ids = [f"n{i:03d}" for i in range(n)]
    src = [i for i, _ in edges]
    dst = [j for _, j in edges]
    return CitationNetwork(ids, np.array(dates, dtype="datetime64[D]"), src, dst, as_of)


def random_graph(rng, n, density, span_days=3650, dag=False):
    """Random directed graph with sorted random dates; node index equals canonical position."""
    start = np.datetime64("1990-01-01")
    days = np.sort(rng.integers(0, span_days, size=n))
    dates = start + days
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    if dag:
        mask = np.tril(mask, -1)  # newer nodes cite older ones
    edges = [tuple(e) for e in np.argwhere(mask).tolist()]
    return make_net(dates, edges), edges


@pytest.fixture
def net2():
    # A@1990-01-01, B@1990-01-11, B cites A
    return make_net(["1990-01-01", "1990-01-11"], [(1, 0)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def synth_small():
    return generate_synthetic(SynthParams(n_nodes=3000, n_seminal=30, age_skew=50, seed=4))


@pytest.fixture(scope="session")
def synth_biased():
    return generate_synthetic(SynthParams(n_nodes=20_000, n_seminal=30, age_skew=120, seed=0))


def date(s):
    return dt.date.fromisoformat(s)


# acceptance criterion -> (passed, detail); filled by test_acceptance, printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
