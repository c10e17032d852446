"""Shared fixtures: hand-built subgraph shapes and seeded sample graphs."""

import pytest

from trapset.ensemble import EnsembleSpec, TannerGraph, realize_degree_sequence, sample_tanner_graph


def graph_from_edges(n, n_checks, edges):
    return TannerGraph(n, n_checks, iter(edges))


@pytest.fixture
def four_cycle():
    """Two degree-2 variables sharing two checks: the unique shortest cycle."""
    return graph_from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])


@pytest.fixture
def k23():
    """Two degree-3 variables over three degree-2 checks."""
    return graph_from_edges(2, 3, [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)])


@pytest.fixture
def path_graph():
    """Acyclic: v0 - c0 - v1 - c1 - v2."""
    return graph_from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)])


@pytest.fixture
def shared_one_check():
    """Two degree-3 variables sharing one check, four pendant checks: (2,4)."""
    return graph_from_edges(2, 5, [(0, 0), (1, 0), (0, 1), (0, 2), (1, 3), (1, 4)])


@pytest.fixture
def tight_pair():
    """Two degree-3 variables sharing two checks, one pendant each: (2,2)."""
    return graph_from_edges(2, 4, [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 3)])


@pytest.fixture
def six_cycle_deg2():
    """Simple 6-cycle of degree-2 variables: all categories, b = 0."""
    return graph_from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)])


@pytest.fixture
def eight_cycle_pendants():
    """8-cycle of degree-3 variables, one pendant check each: (4,4)."""
    edges = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (0, 3)]
    edges += [(i, 4 + i) for i in range(4)]
    return graph_from_edges(4, 8, edges)


@pytest.fixture
def tree_four_vars():
    """Degree-2 variable path with two pendant checks: a (4,2) tree shape."""
    edges = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (0, 3), (3, 4)]
    return graph_from_edges(4, 5, edges)


@pytest.fixture
def six_cycle_exits():
    """6-cycle of degree-3 variables whose third edges leave the set: (3,3)."""
    edges = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]
    edges += [(0, 3), (1, 4), (2, 5)]
    edges += [(3, 3), (3, 4), (4, 5)]  # outside variables keep the exits busy
    return graph_from_edges(5, 6, edges)


def sampled(spec_kwargs, seed, girth_min=None, max_retries=2_000_000):
    spec = EnsembleSpec(**spec_kwargs)
    seq = realize_degree_sequence(spec)
    return sample_tanner_graph(seq, seed=seed, girth_min=girth_min, max_retries=max_retries)


SPEC_36 = {"lam": {3: 1.0}, "rho": {6: 1.0}, "n": 30}
SPEC_IRR = {"lam": {3: 0.4286, 4: 0.5714}, "rho": {7: 1.0}, "n": 28}
