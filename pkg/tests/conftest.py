import itertools

import numpy as np
import pytest

from sierpinski_lre.algebra import RED_SIDES
from sierpinski_lre.lattice import build_lattice


@pytest.fixture(scope="session")
def lat1():
    return build_lattice(1)


@pytest.fixture(scope="session")
def lat2():
    return build_lattice(2)


@pytest.fixture(scope="session")
def lat3():
    return build_lattice(3)


def floyd(lattice):
    """All-pairs distances by Floyd-Warshall, independent of the BFS code."""
    n = lattice.n_vertices
    d = np.full((n, n), 10**6, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for e in lattice.edges:
        d[e.u, e.v] = d[e.v, e.u] = 1
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


def brute_syndromes(lattice):
    """Loop parities of every configuration, computed from the incidence lists.

    Returns (configs, syndromes) with configs of shape (4**n, n).
    """
    n = lattice.n_vertices
    configs = np.array(list(itertools.product(range(4), repeat=n)), dtype=np.int8)
    red = np.zeros((4, 4), dtype=np.int8)  # red[letter, side]
    for a, sides in RED_SIDES.items():
        for s in sides:
            red[a, s] = 1
    syn = np.zeros((len(configs), len(lattice.loops)), dtype=np.int8)
    for i, lp in enumerate(lattice.loops):
        acc = np.zeros(len(configs), dtype=np.int8)
        for v, s in lp.incidences:
            acc ^= red[configs[:, v], s]
        syn[:, i] = acc
    return configs, syn


@pytest.fixture(scope="session")
def brute2(lat2):
    return brute_syndromes(lat2)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
