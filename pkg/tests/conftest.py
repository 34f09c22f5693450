"""Shared fixtures and independent oracles for the test-suite.

``numeric_fiber`` assembles fiber matrices directly from the edge list with
plain numpy, bypassing the symbolic layer entirely, so tests can pit the two
construction paths against each other.
"""

import numpy as np
import pytest

import periodic_spectra as ps

BUILTIN_NAMES = [
    "kagome",
    "hexagonal",
    "fig4_chain",
    "square_diag",
    "zd(1)",
    "zd(2)",
    "z_cycle(3)",
    "z_cycle(4)",
]

BIPARTITE_BUILTINS = ["hexagonal", "zd(1)", "zd(2)", "z_cycle(4)"]


def numeric_fiber(graph, kind, k, potential_shift=0.0):
    """Dense fiber matrix straight from edge data (independent of the package's
    symbolic path).  ``potential_shift`` is subtracted from the potential for
    the Schrodinger kind."""
    nv = graph.num_vertices
    deg = np.array(graph.degrees, dtype=float)
    adj = np.zeros((nv, nv), dtype=complex)
    for e in graph.edges:
        adj[e.tail, e.head] += np.exp(1j * np.dot(e.index, k))
    if kind == "adjacency":
        return adj
    if kind == "laplacian":
        return np.diag(deg) - adj
    if kind == "schrodinger":
        v = np.array(graph.potential) - deg - potential_shift
        return adj + np.diag(v)
    trans = adj / np.sqrt(np.outer(deg, deg))
    if kind == "transition":
        return trans
    if kind == "normalized_laplacian":
        return np.eye(nv) - trans
    raise ValueError(kind)


def schrodinger_shift(graph):
    """min(V - deg), the shift the normalized Schrodinger convention removes."""
    return min(
        graph.potential[x] - graph.degrees[x] for x in range(graph.num_vertices)
    )


@pytest.fixture(params=BUILTIN_NAMES)
def builtin(request):
    return ps.builtin_graph(request.param)


@pytest.fixture
def kagome():
    return ps.builtin_graph("kagome")


@pytest.fixture
def fig4():
    return ps.builtin_graph("fig4_chain")


@pytest.fixture
def hexagonal():
    return ps.builtin_graph("hexagonal")
