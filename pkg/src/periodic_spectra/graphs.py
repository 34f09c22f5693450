"""Fundamental graphs of periodic discrete graphs.

A periodic graph is encoded by its finite quotient: vertices, oriented edges
carrying an integer index vector in Z^d (which lattice translate the edge
crosses), and a real potential per vertex.  Both orientations of every edge
are stored; the inverse orientation carries the negated index.  Edge indices
depend on the chosen embedding (gauge); cycle indices do not, and the library
keeps the two notions separate: gauge transforms reshuffle edge indices while
every derived spectral quantity stays fixed.

The module also ships a small zoo of built-in lattices (hexagonal, kagome,
hypercubic, a diamond chain, a decorated square lattice, cycle quotients of
the integer line) with their standard index assignments.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import GraphFormatError, SearchCapExceeded

IndexVector = tuple[int, ...]

#: names accepted by :func:`builtin_graph`; ``zd(d)`` and ``z_cycle(nu)``
#: take an integer parameter.
BUILTIN_NAMES = ("zd(d)", "z_cycle(nu)", "hexagonal", "kagome", "fig4_chain", "square_diag")

# Cap on the number of gauge assignments minimize_bridges will enumerate.
DEFAULT_GAUGE_CAP = 5_000_000


def _as_index(values: Iterable[int], dim: int, what: str = "index") -> IndexVector:
    vec = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise GraphFormatError(f"{what} components must be integers, got {v!r}")
        vec.append(int(v))
    if len(vec) != dim:
        raise GraphFormatError(f"{what} has length {len(vec)}, expected {dim}")
    return tuple(vec)


def _neg(vec: IndexVector) -> IndexVector:
    return tuple(-v for v in vec)


@dataclass(frozen=True)
class OrientedEdge:
    """One orientation of an edge; ``pair_id`` links it to its inverse."""

    tail: int
    head: int
    index: IndexVector
    pair_id: int

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.head, self.tail, _neg(self.index), self.pair_id)

    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class CycleRecord:
    """A closed edge sequence together with its (gauge-invariant) index."""

    edges: tuple[OrientedEdge, ...]
    index: IndexVector
    length: int

    def __post_init__(self):
        if self.length != len(self.edges) or self.length == 0:
            raise ValueError("cycle length does not match its edge list")
        for a, b in zip(self.edges, self.edges[1:]):
            if a.head != b.tail:
                raise ValueError("cycle edges do not chain head-to-tail")
        if self.edges[-1].head != self.edges[0].tail:
            raise ValueError("cycle does not return to its initial vertex")
        total = tuple(int(s) for s in np.sum([e.index for e in self.edges], axis=0))
        if total != self.index:
            raise ValueError("cycle index does not equal the sum of edge indices")


@dataclass(frozen=True)
class FundamentalGraph:
    """Finite quotient of a rank-``dim`` periodic graph.

    ``edges`` stores both orientations of every unoriented edge, inverse
    pairs adjacent (even position holds the orientation the input gave).
    Instances are immutable and safe to share between workers.
    """

    dim: int
    labels: tuple[str, ...]
    potential: tuple[float, ...]
    edges: tuple[OrientedEdge, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise GraphFormatError("lattice rank must be a positive integer")
        if not self.labels:
            raise GraphFormatError("graph needs at least one vertex")
        if len(set(self.labels)) != len(self.labels):
            raise GraphFormatError("duplicate vertex label")
        if len(self.potential) != len(self.labels):
            raise GraphFormatError("potential must list one value per vertex")
        nv = len(self.labels)
        if len(self.edges) % 2:
            raise GraphFormatError("oriented edges must come in inverse pairs")
        for j in range(0, len(self.edges), 2):
            e, back = self.edges[j], self.edges[j + 1]
            for half in (e, back):
                if not (0 <= half.tail < nv and 0 <= half.head < nv):
                    raise GraphFormatError("edge endpoint out of range")
                _as_index(half.index, self.dim)
            if back != e.reversed() or e.pair_id != j // 2:
                raise GraphFormatError("inverse orientation missing or mispaired")
        if not self._connected():
            raise GraphFormatError("graph is not connected")

    def _connected(self) -> bool:
        nv = len(self.labels)
        seen = {0}
        stack = [0]
        adj: dict[int, list[int]] = {v: [] for v in range(nv)}
        for e in self.edges:
            adj[e.tail].append(e.head)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == nv

    # -- basic shape -------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        """Number of unoriented edges."""
        return len(self.edges) // 2

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Vertex degrees; a loop contributes 2 (both orientations start there)."""
        deg = [0] * self.num_vertices
        for e in self.edges:
            deg[e.tail] += 1
        return tuple(deg)

    @cached_property
    def out_edges(self) -> tuple[tuple[OrientedEdge, ...], ...]:
        out: list[list[OrientedEdge]] = [[] for _ in range(self.num_vertices)]
        for e in self.edges:
            out[e.tail].append(e)
        return tuple(tuple(lst) for lst in out)

    @cached_property
    def _ordinals(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def ordinal(self, label: str) -> int:
        try:
            return self._ordinals[label]
        except KeyError:
            raise GraphFormatError(f"unknown vertex label {label!r}") from None

    def unoriented(self) -> tuple[OrientedEdge, ...]:
        """One representative per unoriented edge (the stored orientation)."""
        return self.edges[::2]

    def with_potential(self, values: Sequence[float] | Mapping[str, float]) -> "FundamentalGraph":
        """Return a copy with the potential replaced (by ordinal or by label)."""
        if isinstance(values, Mapping):
            pot = list(self.potential)
            for lab, v in values.items():
                pot[self.ordinal(lab)] = float(v)
        else:
            if len(values) != self.num_vertices:
                raise GraphFormatError("potential must list one value per vertex")
            pot = [float(v) for v in values]
        return FundamentalGraph(self.dim, self.labels, tuple(pot), self.edges)


def build_graph(
    dim: int,
    vertices: Sequence[str],
    edges: Iterable[tuple[str, str, Iterable[int]]],
    potential: Mapping[str, float] | None = None,
    validate_lattice: bool = True,
) -> FundamentalGraph:
    """Assemble a graph from one (tail, head, index) triple per unoriented edge.

    The inverse orientation with negated index is materialized automatically.
    Unless ``validate_lattice`` is switched off, graphs whose cycle indices do
    not generate all of Z^dim are rejected: they do not describe a rank-``dim``
    periodic graph.
    """
    labels = tuple(str(v) for v in vertices)
    if len(set(labels)) != len(labels):
        raise GraphFormatError("duplicate vertex label")
    ordinals = {lab: i for i, lab in enumerate(labels)}
    pot = [0.0] * len(labels)
    for lab, v in (potential or {}).items():
        if lab not in ordinals:
            raise GraphFormatError(f"unknown vertex label {lab!r}")
        pot[ordinals[lab]] = float(v)
    oriented: list[OrientedEdge] = []
    for pair_id, (a, b, idx) in enumerate(edges):
        if a not in ordinals or b not in ordinals:
            raise GraphFormatError(f"edge endpoint {a!r} or {b!r} unknown")
        e = OrientedEdge(ordinals[a], ordinals[b], _as_index(idx, dim), pair_id)
        oriented += [e, e.reversed()]
    graph = FundamentalGraph(dim, labels, tuple(pot), tuple(oriented))
    if validate_lattice and not index_lattice_check(graph):
        raise GraphFormatError(
            "cycle indices do not generate Z^%d; not a rank-%d periodic graph"
            % (dim, dim)
        )
    return graph


# -- file format -----------------------------------------------------------


def parse_graph(text: str, validate_lattice: bool = True) -> FundamentalGraph:
    """Parse the JSON graph format.

    Schema::

        {"dimension": d,
         "vertices": [{"id": "<label>", "potential": 0.0}, ...],
         "edges": [{"from": "<label>", "to": "<label>", "index": [..d ints..]}, ...]}

    Each edge entry is one unoriented edge; loops have ``from == to``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"malformed graph document: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be a JSON object")
    try:
        dim = int(doc["dimension"])
        raw_vertices = doc["vertices"]
        raw_edges = doc["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"missing or invalid top-level field: {exc}") from None
    labels: list[str] = []
    potential: dict[str, float] = {}
    for entry in raw_vertices:
        if not isinstance(entry, dict) or "id" not in entry:
            raise GraphFormatError("vertex entries need an 'id' field")
        lab = str(entry["id"])
        labels.append(lab)
        potential[lab] = float(entry.get("potential", 0.0))
    edges = []
    for entry in raw_edges:
        if not isinstance(entry, dict):
            raise GraphFormatError("edge entries must be objects")
        try:
            edges.append((str(entry["from"]), str(entry["to"]), entry["index"]))
        except KeyError as exc:
            raise GraphFormatError(f"edge entry missing field {exc}") from None
    return build_graph(dim, labels, edges, potential, validate_lattice=validate_lattice)


def load_graph(path: str, validate_lattice: bool = True) -> FundamentalGraph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_graph(handle.read(), validate_lattice=validate_lattice)


def graph_to_dict(graph: FundamentalGraph) -> dict:
    """Graph as a JSON-ready mapping in the file-format schema."""
    return {
        "dimension": graph.dim,
        "vertices": [
            {"id": lab, "potential": graph.potential[i]}
            for i, lab in enumerate(graph.labels)
        ],
        "edges": [
            {"from": graph.labels[e.tail], "to": graph.labels[e.head], "index": list(e.index)}
            for e in graph.unoriented()
        ],
    }


# -- structural quantities ---------------------------------------------------


def vertex_degrees(graph: FundamentalGraph) -> dict[str, int]:
    return dict(zip(graph.labels, graph.degrees))


def betti_number(graph: FundamentalGraph) -> int:
    """Cycle-space dimension: #edges - #vertices + 1 of the connected quotient."""
    return graph.num_edges - graph.num_vertices + 1


def bridge_count(graph: FundamentalGraph) -> int:
    """Number of unoriented edges with nonzero index, in the current gauge."""
    return sum(1 for e in graph.unoriented() if any(e.index))


@dataclass(frozen=True)
class Gauge:
    """Integer shift per vertex; normalized so vertex 0 sits at the origin.

    Applying a gauge replaces every edge index by
    ``index + shift[head] - shift[tail]``; cycle indices are untouched.
    """

    shifts: tuple[IndexVector, ...]

    def __post_init__(self):
        if not self.shifts:
            raise ValueError("gauge must cover at least one vertex")
        base = self.shifts[0]
        if any(len(vec) != len(base) for vec in self.shifts):
            raise ValueError("gauge shifts must all have the lattice rank as length")
        norm = tuple(
            tuple(int(s) - int(b) for s, b in zip(vec, base)) for vec in self.shifts
        )
        object.__setattr__(self, "shifts", norm)

    @classmethod
    def zero(cls, graph: FundamentalGraph) -> "Gauge":
        return cls(((0,) * graph.dim,) * graph.num_vertices)

    @classmethod
    def from_labels(cls, graph: FundamentalGraph, shifts: Mapping[str, Iterable[int]]) -> "Gauge":
        vecs = [(0,) * graph.dim] * graph.num_vertices
        for lab, vec in shifts.items():
            vecs[graph.ordinal(lab)] = _as_index(vec, graph.dim, "gauge shift")
        return cls(tuple(vecs))


def gauge_transform(graph: FundamentalGraph, gauge: Gauge) -> FundamentalGraph:
    """Re-index every edge by ``shift[head] - shift[tail]``; spectra are unchanged."""
    if len(gauge.shifts) != graph.num_vertices:
        raise GraphFormatError("gauge must assign a shift to every vertex")
    new_edges = []
    for e in graph.unoriented():
        delta = tuple(
            t + gauge.shifts[e.head][s] - gauge.shifts[e.tail][s]
            for s, t in enumerate(e.index)
        )
        moved = OrientedEdge(e.tail, e.head, delta, e.pair_id)
        new_edges += [moved, moved.reversed()]
    return FundamentalGraph(graph.dim, graph.labels, graph.potential, tuple(new_edges))


def minimize_bridges(
    graph: FundamentalGraph,
    radius: int = 1,
    cap: int = DEFAULT_GAUGE_CAP,
) -> tuple[Gauge, int]:
    """Exhaustive gauge search in ``[-radius, radius]^dim`` per free vertex.

    Vertex 0 is pinned at the origin.  Returns the gauge with the fewest
    nonzero-index unoriented edges and that count.  The count is exact inside
    the searched box; it always satisfies ``dim <= count <= bridge_count``.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    nv, d = graph.num_vertices, graph.dim
    free = nv - 1
    if free and (2 * radius + 1) ** (d * free) > cap:
        raise SearchCapExceeded(
            f"gauge search space (2*{radius}+1)^{d * free} exceeds cap {cap}"
        )
    und = graph.unoriented()
    # Loop indices are gauge-invariant; count their bridges once.
    loop_bridges = sum(1 for e in und if e.is_loop() and any(e.index))
    plain = [(e.tail, e.head, e.index) for e in und if not e.is_loop()]
    box = list(itertools.product(range(-radius, radius + 1), repeat=d))
    zero = (0,) * d

    best_count = None
    best_shifts: tuple[IndexVector, ...] = (zero,) * nv
    for combo in itertools.product(box, repeat=free):
        shifts = (zero,) + combo
        count = loop_bridges
        for tail, head, idx in plain:
            if any(t + shifts[head][s] - shifts[tail][s] for s, t in enumerate(idx)):
                count += 1
        if best_count is None or count < best_count:
            best_count, best_shifts = count, shifts
    assert best_count is not None
    return Gauge(best_shifts), best_count


# -- bipartiteness of the periodic cover -------------------------------------


def _solve_gf2(rows: np.ndarray, rhs: np.ndarray):
    """One solution of A x = b over GF(2), or None if inconsistent."""
    a = np.concatenate([rows % 2, (rhs % 2)[:, None]], axis=1).astype(np.uint8)
    nrows, ncols = a.shape
    ncols -= 1
    pivots = []
    r = 0
    for c in range(ncols):
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        a[[r, r + hit[0]]] = a[[r + hit[0], r]]
        for rr in range(nrows):
            if rr != r and a[rr, c]:
                a[rr] ^= a[r]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    if np.any((a[:, :ncols].sum(axis=1) == 0) & (a[:, ncols] == 1)):
        return None
    x = np.zeros(ncols, dtype=np.uint8)
    for rr, c in enumerate(pivots):
        x[c] = a[rr, ncols]
    return x


def is_bipartite(graph: FundamentalGraph):
    """Bipartiteness of the periodic cover, not of the quotient alone.

    Looks for vertex parities ``p`` and a parity vector ``s`` in {0,1}^dim with
    ``p(tail) + p(head) + <s, index>`` odd on every edge; the quotient may have
    odd cycles with nonzero index that are not cycles of the cover.  Returns
    ``(True, (parities, s))`` or ``(False, None)``.
    """
    nv, d = graph.num_vertices, graph.dim
    und = graph.unoriented()
    rows = np.zeros((len(und), nv + d), dtype=np.uint8)
    rhs = np.ones(len(und), dtype=np.uint8)
    for r, e in enumerate(und):
        rows[r, e.tail] ^= 1
        rows[r, e.head] ^= 1
        for s, t in enumerate(e.index):
            rows[r, nv + s] ^= t % 2
    solution = _solve_gf2(rows, rhs)
    if solution is None:
        return False, None
    return True, (tuple(int(v) for v in solution[:nv]), tuple(int(v) for v in solution[nv:]))


# -- cycle space -------------------------------------------------------------


def cycle_basis(graph: FundamentalGraph) -> tuple[list[CycleRecord], np.ndarray]:
    """Fundamental cycles of a BFS spanning tree, plus their dim x beta index matrix.

    One cycle per non-tree unoriented edge; each is proper (no backtracking)
    and visits no interior vertex twice.
    """
    nv = graph.num_vertices
    parent_edge: list[OrientedEdge | None] = [None] * nv
    depth = [-1] * nv
    depth[0] = 0
    queue = [0]
    tree_pairs: set[int] = set()
    while queue:
        v = queue.pop(0)
        for e in graph.out_edges[v]:
            if depth[e.head] == -1:
                depth[e.head] = depth[v] + 1
                parent_edge[e.head] = e  # oriented parent -> child
                tree_pairs.add(e.pair_id)
                queue.append(e.head)

    def tree_path(a: int, b: int) -> list[OrientedEdge]:
        """Oriented edges from a to b inside the tree."""
        up_a: list[OrientedEdge] = []
        up_b: list[OrientedEdge] = []
        while depth[a] > depth[b]:
            e = parent_edge[a]
            up_a.append(e.reversed())
            a = e.tail
        while depth[b] > depth[a]:
            e = parent_edge[b]
            up_b.append(e)
            b = e.tail
        while a != b:
            e_a, e_b = parent_edge[a], parent_edge[b]
            up_a.append(e_a.reversed())
            up_b.append(e_b)
            a, b = e_a.tail, e_b.tail
        return up_a + up_b[::-1]

    cycles: list[CycleRecord] = []
    for e in graph.unoriented():
        if e.pair_id in tree_pairs:
            continue
        edges = (e,) if e.is_loop() else (e, *tree_path(e.head, e.tail))
        index = tuple(int(v) for v in np.sum([c.index for c in edges], axis=0))
        cycles.append(CycleRecord(tuple(edges), index, len(edges)))
    matrix = np.zeros((graph.dim, len(cycles)), dtype=np.int64)
    for j, c in enumerate(cycles):
        matrix[:, j] = c.index
    return cycles, matrix


def index_lattice_check(graph: FundamentalGraph) -> bool:
    """True iff the basis-cycle indices generate the full lattice Z^dim.

    Decided through the Smith normal form of the index matrix: the lattice is
    everything exactly when there are ``dim`` invariant factors, all equal 1.
    Every valid rank-``dim`` periodic graph passes.
    """
    _, matrix = cycle_basis(graph)
    if matrix.size == 0 or not matrix.any():
        return False
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(Matrix(matrix.tolist()))
    diag = [abs(snf[i, i]) for i in range(min(snf.shape))]
    factors = [v for v in diag if v != 0]
    return len(factors) == graph.dim and all(v == 1 for v in factors)


# -- builtin lattices --------------------------------------------------------


def _hexagonal() -> FundamentalGraph:
    # Two-vertex quotient of the honeycomb; one in-cell edge and two crossing ones.
    return build_graph(
        2,
        ["v1", "v2"],
        [("v1", "v2", (0, 0)), ("v1", "v2", (1, 0)), ("v1", "v2", (0, 1))],
    )


def _kagome() -> FundamentalGraph:
    # Corner-sharing triangles; 4-regular on three vertices.
    return build_graph(
        2,
        ["x1", "x2", "x3"],
        [
            ("x1", "x2", (0, 0)),
            ("x2", "x3", (0, 0)),
            ("x3", "x1", (0, 0)),
            ("x2", "x1", (0, 1)),
            ("x3", "x2", (1, -1)),
            ("x1", "x3", (-1, 0)),
        ],
    )


def _fig4_chain() -> FundamentalGraph:
    # Chain of diamonds along Z: two degree-3 hubs, two degree-2 rim vertices.
    return build_graph(
        1,
        ["x1", "x2", "x3", "x4"],
        [
            ("x1", "x4", (1,)),
            ("x1", "x2", (0,)),
            ("x2", "x4", (0,)),
            ("x4", "x3", (0,)),
            ("x3", "x1", (0,)),
        ],
    )


def _square_diag() -> FundamentalGraph:
    # Squares rotated 45 degrees, joined by one horizontal and one vertical bridge.
    return build_graph(
        2,
        ["x1", "x2", "x3", "x4"],
        [
            ("x1", "x2", (0, 0)),
            ("x2", "x3", (0, 0)),
            ("x3", "x4", (0, 0)),
            ("x4", "x1", (0, 0)),
            ("x3", "x1", (1, 0)),
            ("x4", "x2", (0, 1)),
        ],
    )


def _zd(d: int) -> FundamentalGraph:
    if d < 1:
        raise GraphFormatError("zd(d) needs d >= 1")
    basis = [tuple(1 if j == s else 0 for j in range(d)) for s in range(d)]
    return build_graph(d, ["o"], [("o", "o", vec) for vec in basis])


def _z_cycle(nu: int) -> FundamentalGraph:
    if nu < 1:
        raise GraphFormatError("z_cycle(nu) needs nu >= 1")
    labels = [f"x{i + 1}" for i in range(nu)]
    edges = [(labels[i], labels[(i + 1) % nu], (1,) if i == nu - 1 else (0,)) for i in range(nu)]
    return build_graph(1, labels, edges)


_PARAMETRIC = re.compile(r"^(zd|z_cycle)\((\d+)\)$")


def builtin_graph(name: str) -> FundamentalGraph:
    """Return one of the built-in lattices by name.

    Plain names: ``hexagonal``, ``kagome``, ``fig4_chain``, ``square_diag``.
    Parametric: ``zd(d)`` (single vertex, d loops) and ``z_cycle(nu)``
    (nu-periodic quotient of the integer line).
    """
    key = name.strip().lower()
    plain = {
        "hexagonal": _hexagonal,
        "kagome": _kagome,
        "fig4_chain": _fig4_chain,
        "square_diag": _square_diag,
    }
    if key in plain:
        return plain[key]()
    match = _PARAMETRIC.match(key)
    if match:
        kind, arg = match.group(1), int(match.group(2))
        return _zd(arg) if kind == "zd" else _z_cycle(arg)
    raise GraphFormatError(f"unknown builtin graph {name!r}")
