"""Closed-form two-sided estimates of the total bandwidth.

Every estimate is assembled from structural graph data (degrees, Betti
number, bridges, lattice rank) plus the classified walk sums.  Lower bounds
come in two flavors: a closed form depending only on the structural
constants, and a refinement that scans walk lengths n and keeps the best
    max(B_n1, B_n2) / (n * step_bound^(n-1))
term.  Upper bounds multiply a bridge-count surrogate: the true minimum over
all gauges is only bracketed (rank <= minimum <= Betti number), so the
certified upper bound uses the best bridge count the box search found, which
is itself an upper bound for the minimum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import (
    CycleRecord,
    FundamentalGraph,
    betti_number,
    bridge_count,
    cycle_basis,
    index_lattice_check,
    is_bipartite,
    minimize_bridges,
)
from .walks import classify, count_walks, normalized_walk_sums, weighted_walk_sums


@dataclass(frozen=True)
class StructuralConstants:
    """Scalar graph data feeding the closed-form estimates.

    ``v_plus`` is the diameter of V - deg (its max after shifting the min to
    zero) and ``v_star = kappa_plus + v_plus`` bounds the one-step growth of
    Schrodinger powers; ``kappa_star`` is its potential-free value
    2*kappa_plus - kappa_minus.  ``bridge_ratio`` sums, over vertices, the
    number of nonzero-index oriented edges leaving the vertex divided by its
    degree.  ``min_bridges`` comes from the gauge box search and satisfies
    rank <= min_bridges <= bridges.
    """

    dim: int
    num_vertices: int
    kappa_minus: int
    kappa_plus: int
    kappa_star: int
    v_plus: float
    v_star: float
    d_star: int
    betti: int
    bridges: int
    min_bridges: int
    bridge_ratio: float
    bipartite: bool


@dataclass(frozen=True)
class BoundTerm:
    """One walk length's contribution to the refined lower bound."""

    n: int
    b1: float
    b2: float
    value: float


@dataclass(frozen=True)
class BoundsReport:
    """Certified bracket for the total bandwidth of one operator kind.

    ``lower_closed_form`` and ``lower_refined`` are individually valid;
    neither dominates the other in general, so ``lower`` takes their max.
    ``upper_closed_form`` is the plain theorem-level bound; ``upper`` may be
    sharper (for normalized kinds it also tries twice the bridge ratio).
    ``measure_lower`` divides the best lower bound by the number of bands,
    bounding the Lebesgue measure of the spectrum from below.
    """

    kind: str
    constants: StructuralConstants
    lower_closed_form: float
    lower_refined: float
    refined_n: int | None
    lower: float
    upper: float
    upper_closed_form: float
    measure_lower: float
    terms: tuple[BoundTerm, ...]


def structural_constants(graph: FundamentalGraph, radius: int = 1) -> StructuralConstants:
    deg = graph.degrees
    kappa_minus, kappa_plus = min(deg), max(deg)
    shifted = [graph.potential[x] - deg[x] for x in range(graph.num_vertices)]
    v_plus = max(shifted) - min(shifted)
    d_star = graph.dim if graph.dim % 2 == 0 else graph.dim + 1
    _, min_bridges = minimize_bridges(graph, radius=radius)
    per_vertex_bridges = [0] * graph.num_vertices
    for e in graph.edges:
        if any(e.index):
            per_vertex_bridges[e.tail] += 1
    bridge_ratio = sum(b / deg[x] for x, b in enumerate(per_vertex_bridges))
    return StructuralConstants(
        dim=graph.dim,
        num_vertices=graph.num_vertices,
        kappa_minus=kappa_minus,
        kappa_plus=kappa_plus,
        kappa_star=2 * kappa_plus - kappa_minus,
        v_plus=float(v_plus),
        v_star=float(kappa_plus + v_plus),
        d_star=d_star,
        betti=betti_number(graph),
        bridges=bridge_count(graph),
        min_bridges=min_bridges,
        bridge_ratio=float(bridge_ratio),
        bipartite=is_bipartite(graph)[0],
    )


def _closed_form_numerator(sc: StructuralConstants) -> float:
    # Bipartite covers admit the stronger 4*rank numerator.
    return 4.0 * sc.dim if sc.bipartite else 2.0 * sc.d_star


def _best_term(terms: list[BoundTerm]) -> tuple[float, int | None]:
    best, best_n = 0.0, None
    for term in terms:
        if term.value > best:
            best, best_n = term.value, term.n
    return best, best_n


def _report(kind, sc, lower_closed, terms, upper, upper_closed) -> BoundsReport:
    refined, refined_n = _best_term(terms)
    lower = max(lower_closed, refined)
    return BoundsReport(
        kind=kind,
        constants=sc,
        lower_closed_form=lower_closed,
        lower_refined=refined,
        refined_n=refined_n,
        lower=lower,
        upper=upper,
        upper_closed_form=upper_closed,
        measure_lower=lower / sc.num_vertices,
        terms=tuple(terms),
    )


def schrodinger_bounds(
    graph: FundamentalGraph,
    n_max: int | None = None,
    radius: int = 1,
    kind: str = "schrodinger",
) -> BoundsReport:
    """Bracket for the Schrodinger total bandwidth (laplacian when V = 0)."""
    sc = structural_constants(graph, radius=radius)
    n_max = graph.num_vertices if n_max is None else n_max
    lower_closed = _closed_form_numerator(sc) / sc.v_star ** (sc.num_vertices - 1)
    terms = []
    for n in range(1, n_max + 1):
        summary = classify(weighted_walk_sums(graph, n))
        value = max(summary.b1, summary.b2) / (n * sc.v_star ** (n - 1))
        terms.append(BoundTerm(n, summary.b1, summary.b2, value))
    upper = 4.0 * min(sc.bridges, sc.min_bridges, sc.betti)
    return _report(kind, sc, lower_closed, terms, upper, upper)


def normalized_bounds(
    graph: FundamentalGraph,
    n_max: int | None = None,
    radius: int = 1,
    kind: str = "normalized_laplacian",
) -> BoundsReport:
    """Bracket for the normalized-Laplacian (equivalently transition) bandwidth."""
    sc = structural_constants(graph, radius=radius)
    n_max = graph.num_vertices if n_max is None else n_max
    lower_closed = _closed_form_numerator(sc) / sc.kappa_plus**sc.num_vertices
    terms = []
    for n in range(1, n_max + 1):
        summary = classify(normalized_walk_sums(graph, n))
        terms.append(BoundTerm(n, summary.b1, summary.b2, max(summary.b1, summary.b2) / n))
    upper_closed = 4.0 * sc.min_bridges / sc.kappa_minus
    upper = min(2.0 * sc.bridge_ratio, upper_closed)
    return _report(kind, sc, lower_closed, terms, upper, upper_closed)


def adjacency_bounds(
    graph: FundamentalGraph, n_max: int | None = None, radius: int = 1
) -> BoundsReport:
    """Bracket for the adjacency total bandwidth from pure walk counts."""
    sc = structural_constants(graph, radius=radius)
    n_max = graph.num_vertices if n_max is None else n_max
    lower_closed = _closed_form_numerator(sc) / sc.kappa_plus ** (sc.num_vertices - 1)
    terms = []
    for n in range(1, n_max + 1):
        summary = classify(count_walks(graph, n))
        value = max(summary.b1, summary.b2) / (n * sc.kappa_plus ** (n - 1))
        terms.append(BoundTerm(n, summary.b1, summary.b2, value))
    upper = 4.0 * min(sc.bridges, sc.min_bridges, sc.betti)
    return _report("adjacency", sc, lower_closed, terms, upper, upper)


def adjacency_lower(graph: FundamentalGraph, n_max: int | None = None) -> tuple[float, int | None]:
    """Best lower bound max(N_n^+, 2 N_n^odd) / (n kappa_plus^(n-1)) over n <= n_max."""
    deg_max = max(graph.degrees)
    n_max = graph.num_vertices if n_max is None else n_max
    best, best_n = 0.0, None
    for n in range(1, n_max + 1):
        summary = classify(count_walks(graph, n))
        value = max(summary.n_plus, 2 * summary.n_odd) / (n * deg_max ** (n - 1))
        if value > best:
            best, best_n = value, n
    return best, best_n


def bounds_for_kind(
    graph: FundamentalGraph,
    kind: str,
    n_max: int | None = None,
    radius: int = 1,
) -> BoundsReport:
    """Dispatch: laplacian bounds are Schrodinger bounds at V = 0; the
    transition operator shares the normalized-Laplacian bracket."""
    if kind == "schrodinger":
        return schrodinger_bounds(graph, n_max, radius)
    if kind == "laplacian":
        zeroed = graph.with_potential([0.0] * graph.num_vertices)
        return schrodinger_bounds(zeroed, n_max, radius, kind="laplacian")
    if kind == "adjacency":
        return adjacency_bounds(graph, n_max, radius)
    if kind in ("normalized_laplacian", "transition"):
        return normalized_bounds(graph, n_max, radius, kind=kind)
    raise ValueError(f"unknown operator kind {kind!r}")


def trace_gap_lower(graph: FundamentalGraph, kind: str, n: int, k) -> float:
    """Experimental: the bandwidth of the n-th power is at least T_n(0) - T_n(k).

    Valid for every quasimomentum k, because the power bandwidth dominates the
    difference of eigenvalue sums between any two fiber points and k = 0
    maximizes the trace.  The two terms the reports use are special cases:
    B_n1 is the gap against the torus average and B_n2 the gap at pi*(1,..,1).
    Scanning other k may or may not tighten the bound; the reports do not.
    """
    from .walks import trace_series

    series = trace_series(graph, kind, n, check=False)
    gap = series.eval((0.0,) * graph.dim) - series.eval(k)
    return float(gap.real)


# -- lattice / witness report -------------------------------------------------


@dataclass(frozen=True)
class IndexLatticeReport:
    """Structural facts about the cycle-index lattice.

    ``basis_subset`` lists rank-many basis cycles whose indices form a
    unimodular matrix, when such a subset exists (a generating set need not
    contain one; its absence is reported, not fatal).  ``witness_n`` is the
    smallest walk length n <= num_vertices with N_n^odd >= n * d_star, and
    ``bipartite_witness_n`` the smallest with N_n^odd >= 2 n dim (bipartite
    covers only).
    """

    lattice_ok: bool
    basis_subset: tuple[CycleRecord, ...] | None
    witness_n: int | None
    witness_odd_count: int | None
    bipartite: bool
    bipartite_witness_n: int | None


def verify_index_lattice(graph: FundamentalGraph) -> IndexLatticeReport:
    lattice_ok = index_lattice_check(graph)
    cycles, matrix = cycle_basis(graph)

    basis_subset = None
    if len(cycles) >= graph.dim:
        from sympy import Matrix

        for combo in itertools.combinations(range(len(cycles)), graph.dim):
            sub = Matrix(matrix[:, combo].tolist())
            if abs(sub.det()) == 1:
                basis_subset = tuple(cycles[j] for j in combo)
                break

    d_star = graph.dim if graph.dim % 2 == 0 else graph.dim + 1
    witness_n = witness_odd = None
    bip_witness = None
    bipartite = is_bipartite(graph)[0]
    for n in range(1, graph.num_vertices + 1):
        summary = classify(count_walks(graph, n))
        if witness_n is None and summary.n_odd >= n * d_star:
            witness_n, witness_odd = n, summary.n_odd
        if bipartite and bip_witness is None and summary.n_odd >= 2 * n * graph.dim:
            bip_witness = n
        if witness_n is not None and (not bipartite or bip_witness is not None):
            break
    return IndexLatticeReport(
        lattice_ok=lattice_ok,
        basis_subset=basis_subset,
        witness_n=witness_n,
        witness_odd_count=witness_odd,
        bipartite=bipartite,
        bipartite_witness_n=bip_witness,
    )
