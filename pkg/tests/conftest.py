import itertools
import random
from fractions import Fraction

import pytest

from hjpolytope import certify, kernels
from hjpolytope.hj import Hypergraph
from hjpolytope.realize import DrawingConfig, realize_pipeline


def leibniz_det(rows):
    """Permutation expansion; independent of the elimination code."""
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def fraction_rank(rows):
    """Plain Gaussian elimination over Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            f = m[i][col] / m[rank][col]
            m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def random_hypergraph(rng: random.Random, max_vertices=20, max_edges=30) -> Hypergraph:
    nv = rng.randint(1, max_vertices)
    edges = set()
    for _ in range(rng.randint(0, max_edges)):
        size = rng.randint(1, min(nv, 5))
        edges.add(tuple(sorted(rng.sample(range(nv), size))))
    return Hypergraph(nv, sorted(edges))


@pytest.fixture(scope="session")
def real52():
    return realize_pipeline(DrawingConfig(5, 2, seed=1))


@pytest.fixture(scope="session")
def real62():
    return realize_pipeline(DrawingConfig(6, 2, seed=1))


@pytest.fixture(scope="session")
def hull52(real52):
    return certify.enumerate_facets(real52)


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
