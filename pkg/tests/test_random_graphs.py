"""Property checks on randomly generated quotient graphs.

The generator grows a random spanning tree, sprinkles extra edges (loops and
multi-edges allowed) with random indices, and pins the index lattice to Z^d
by attaching one unit-index loop per lattice direction.  Everything the
builtins exercise structurally should survive arbitrary such graphs: the two
trace engines, gauge invariance, classification symmetries, bound sandwiches.
"""

import numpy as np
import pytest

import periodic_spectra as ps

from conftest import numeric_fiber, schrodinger_shift

SEEDS = list(range(10))


def random_graph(seed: int) -> ps.FundamentalGraph:
    rng = np.random.default_rng(1000 + seed)
    dim = int(rng.integers(1, 3))
    nv = int(rng.integers(2, 5))
    labels = [f"v{i}" for i in range(nv)]

    def rand_index():
        return tuple(int(v) for v in rng.integers(-1, 2, dim))

    edges = []
    for child in range(1, nv):
        parent = int(rng.integers(0, child))
        edges.append((labels[parent], labels[child], rand_index()))
    for _ in range(int(rng.integers(1, 4))):
        a, b = int(rng.integers(0, nv)), int(rng.integers(0, nv))
        edges.append((labels[a], labels[b], rand_index()))
    # guarantee the cycle indices span the whole lattice
    for s in range(dim):
        host = int(rng.integers(0, nv))
        unit = tuple(1 if j == s else 0 for j in range(dim))
        edges.append((labels[host], labels[host], unit))
    potential = {lab: float(v) for lab, v in zip(labels, rng.uniform(-2, 2, nv))}
    return ps.build_graph(dim, labels, edges, potential)


@pytest.mark.parametrize("seed", SEEDS)
def test_random_graph_is_valid(seed):
    g = random_graph(seed)
    assert ps.index_lattice_check(g)
    cycles, _ = ps.cycle_basis(g)
    assert len(cycles) == ps.betti_number(g)


@pytest.mark.parametrize("seed", SEEDS)
def test_random_graph_dual_engines(seed):
    g = random_graph(seed)
    for kind in ("adjacency", "schrodinger", "transition"):
        for n in (1, 2, 3):
            ps.trace_series(g, kind, n)  # raises EngineMismatchError on drift


@pytest.mark.parametrize("seed", SEEDS)
def test_random_graph_symbolic_matches_direct(seed):
    g = random_graph(seed)
    rng = np.random.default_rng(seed)
    for kind in ps.OPERATOR_KINDS:
        sym = ps.symbolic_operator(g, kind)
        k = rng.uniform(0, 2 * np.pi, g.dim)
        assert np.abs(sym.eval(k) - numeric_fiber(g, kind, k)).max() < 1e-12


@pytest.mark.parametrize("seed", SEEDS)
def test_random_graph_walk_symmetries(seed):
    g = random_graph(seed)
    for n in (1, 2, 3):
        counts = ps.count_walks(g, n)
        for m, c in counts.by_index.items():
            assert counts.value(tuple(-v for v in m)) == c
        summary = ps.classify(counts)
        assert summary.n_odd <= summary.n_plus


@pytest.mark.parametrize("seed", SEEDS)
def test_random_graph_gauge_invariance(seed):
    g = random_graph(seed)
    rng = np.random.default_rng(seed)
    shifts = [tuple(int(v) for v in rng.integers(-2, 3, g.dim)) for _ in g.labels]
    shifts[0] = (0,) * g.dim
    moved = ps.gauge_transform(g, ps.Gauge(tuple(shifts)))
    _, base_matrix = ps.cycle_basis(g)
    _, moved_matrix = ps.cycle_basis(moved)
    assert np.array_equal(base_matrix, moved_matrix)
    assert ps.trace_series(moved, "adjacency", 3).max_diff(
        ps.trace_series(g, "adjacency", 3)
    ) < 1e-9


@pytest.mark.parametrize("seed", SEEDS[:5])
def test_random_graph_sandwich(seed):
    g = random_graph(seed)
    grid = ps.KGrid(g.dim, 32)
    for kind in ("laplacian", "schrodinger", "normalized_laplacian", "adjacency"):
        table = ps.band_structure(g, kind, grid)
        sigma = ps.total_bandwidth(table)
        report = ps.bounds_for_kind(g, kind)
        assert report.lower <= sigma + 2e-2
        assert sigma <= report.upper + 2e-2
        assert ps.spectrum_measure(table) <= sigma + 1e-12


@pytest.mark.parametrize("seed", SEEDS[:5])
def test_random_graph_trace_identity(seed):
    g = random_graph(seed)
    rng = np.random.default_rng(seed)
    shift = schrodinger_shift(g)
    for n in (1, 2, 3):
        series = ps.trace_series(g, "schrodinger", n)
        for _ in range(5):
            k = rng.uniform(0, 2 * np.pi, g.dim)
            lam = np.linalg.eigvalsh(numeric_fiber(g, "schrodinger", k, potential_shift=shift))
            tol = 1e-9 * (1.0 + max(1.0, np.abs(lam).max()) ** n)
            assert abs(series.eval(k) - (lam**n).sum()) < tol


@pytest.mark.parametrize("seed", SEEDS[:5])
def test_random_graph_minimize_bridges_bracket(seed):
    g = random_graph(seed)
    _, count = ps.minimize_bridges(g, radius=1)
    assert g.dim <= count <= ps.bridge_count(g)
