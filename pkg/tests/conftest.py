import numpy as np
import pytest

from admgci import Admg, fixture_graph

_NAMES = "abcdefghij"


@pytest.fixture(scope="session")
def figure1() -> Admg:
    return fixture_graph("figure1")


@pytest.fixture(scope="session")
def figure2() -> Admg:
    return fixture_graph("figure2")


@pytest.fixture(scope="session")
def figure3() -> Admg:
    return fixture_graph("figure3")


def random_admg(rng: np.random.Generator, n: int, p_dir=0.35, p_bi=0.3) -> Admg:
    """A random ADMG on n short-named vertices: directed edges follow a random
    permutation (guaranteeing acyclicity), bi-directed edges are independent."""
    vs = list(_NAMES[:n])
    perm = list(rng.permutation(vs))
    directed = [
        (perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p_dir
    ]
    bidirected = [
        (vs[i], vs[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p_bi
    ]
    return Admg(vs, directed, bidirected)


def random_cycle_free_admg(rng: np.random.Generator, n: int, p_dir=0.35, p_bi=0.3) -> Admg:
    """Rejection-sample until the graph has no mixed directed cycle."""
    while True:
        g = random_admg(rng, n, p_dir, p_bi)
        if not g.has_mixed_directed_cycle():
            return g


def random_dag(rng: np.random.Generator, n: int, p_dir=0.4) -> Admg:
    return random_admg(rng, n, p_dir=p_dir, p_bi=0.0)


def random_bidirected_graph(rng: np.random.Generator, n: int, p_bi=0.4) -> Admg:
    return random_admg(rng, n, p_dir=0.0, p_bi=p_bi)
