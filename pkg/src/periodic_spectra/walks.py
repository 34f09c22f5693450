"""Closed-walk enumeration and the weighted sums behind the trace formulas.

Counting convention: a "cycle" here is a closed walk of n oriented edge
steps with a distinguished base point and direction.  Cyclic shifts and the
reversed walk are counted separately, and walks with backtracking parts are
included.  That convention is forced by the matrix identity
Tr M^n(k) = sum over closed n-walks of (step-weight product) * exp(i<index, k>),
which this module reproduces purely combinatorially; reversal symmetry of the
walk set makes the sum real (the cosine form).

Three step-weight modes:

* ``unit``        every oriented edge weighs 1 (adjacency powers)
* ``schrodinger`` the quotient graph gains one zero-index self-step per
                  vertex weighing v_x = V_x - deg_x (shifted so min v = 0 by
                  default); edge steps weigh 1
* ``normalized``  edge step from x weighs 1/deg_x (transition powers)

The self-steps added in schrodinger mode are single steps, not edge pairs:
the diagonal of the fiber matrix carries v_x exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EngineMismatchError, GraphFormatError, SearchCapExceeded
from .graphs import FundamentalGraph, IndexVector
from .laurent import LaurentPoly
from .operators import shifted_loop_weights, symbolic_operator

MODES = ("unit", "schrodinger", "normalized")

# Upper bound on enumerated walk steps before the combinatorial engine refuses.
DEFAULT_WALK_CAP = 100_000_000

INTEGER_TOL = 1e-6


@dataclass(frozen=True)
class WalkClassCounts:
    """Per-index tallies of closed n-walks: count (unit) or weighted sum."""

    n: int
    mode: str
    dim: int
    by_index: dict[IndexVector, float]

    def value(self, m: IndexVector) -> float:
        return self.by_index.get(tuple(m), 0.0)


@dataclass(frozen=True)
class CycleClassSummary:
    """Classified totals for one walk length.

    Integer counts are populated in unit mode only; the weighted totals are
    meaningful in every mode (and collapse to the counts in unit mode):
    ``b1`` sums weights over nonzero index, ``b2`` twice over odd component
    sum, ``t0`` over zero index.
    """

    n: int
    n_zero: int | None
    n_plus: int | None
    n_odd: int | None
    b1: float
    b2: float
    t0: float


def _steps(graph: FundamentalGraph, mode: str, normalize: bool):
    """Per-vertex step table: list of (head, index, weight)."""
    table: list[list[tuple[int, IndexVector, float]]] = [
        [] for _ in range(graph.num_vertices)
    ]
    if mode == "normalized":
        if min(graph.degrees) < 1:
            raise GraphFormatError("normalized walks need every vertex degree >= 1")
        for e in graph.edges:
            table[e.tail].append((e.head, e.index, 1.0 / graph.degrees[e.tail]))
        return table
    for e in graph.edges:
        table[e.tail].append((e.head, e.index, 1.0))
    if mode == "schrodinger":
        zero = (0,) * graph.dim
        for x, w in enumerate(shifted_loop_weights(graph, normalize=normalize)):
            if w != 0.0:
                table[x].append((x, zero, float(w)))
    return table


def _enumerate(graph: FundamentalGraph, n: int, mode: str, normalize: bool, cap: int):
    if n < 1:
        raise ValueError("walk length must be positive")
    table = _steps(graph, mode, normalize)
    fanout = max((len(t) for t in table), default=0)
    if graph.num_vertices * fanout**n > cap:
        raise SearchCapExceeded(
            f"walk enumeration would take about {graph.num_vertices * fanout ** n} steps"
        )
    zero = (0,) * graph.dim
    sums: dict[IndexVector, float] = {}

    def extend(base: int, vertex: int, depth: int, index: IndexVector, weight: float):
        if depth == n:
            if vertex == base:
                sums[index] = sums.get(index, 0.0) + weight
            return
        for head, slope, w in table[vertex]:
            extend(
                base,
                head,
                depth + 1,
                tuple(a + b for a, b in zip(index, slope)),
                weight * w,
            )

    for v in range(graph.num_vertices):
        extend(v, v, 0, zero, 1.0)
    return {m: s for m, s in sums.items() if s != 0.0}


def count_walks(graph: FundamentalGraph, n: int, cap: int = DEFAULT_WALK_CAP) -> WalkClassCounts:
    """Count all closed n-walks by index (backtracking ones included)."""
    return WalkClassCounts(n, "unit", graph.dim, _enumerate(graph, n, "unit", False, cap))


def weighted_walk_sums(
    graph: FundamentalGraph,
    n: int,
    normalize: bool = True,
    cap: int = DEFAULT_WALK_CAP,
) -> WalkClassCounts:
    """Weighted sums over the self-step-augmented graph (Schrodinger powers).

    With ``normalize`` (the default) the self-step weights are shifted so the
    smallest is zero; the user's graph is never mutated, and bandwidths do
    not feel the shift.
    """
    return WalkClassCounts(
        n, "schrodinger", graph.dim, _enumerate(graph, n, "schrodinger", normalize, cap)
    )


def normalized_walk_sums(
    graph: FundamentalGraph, n: int, cap: int = DEFAULT_WALK_CAP
) -> WalkClassCounts:
    """Degree-weighted sums: each walk weighs the product of 1/deg over its steps."""
    return WalkClassCounts(
        n, "normalized", graph.dim, _enumerate(graph, n, "normalized", False, cap)
    )


def _round_count(value: float) -> int:
    nearest = round(value)
    if abs(value - nearest) > INTEGER_TOL:
        raise EngineMismatchError(f"unit-mode walk count {value!r} is not an integer")
    return int(nearest)


def classify(counts: WalkClassCounts) -> CycleClassSummary:
    """Collapse per-index tallies into the zero/nonzero/odd classes."""
    t0 = counts.by_index.get((0,) * counts.dim, 0.0)
    b1 = sum(v for m, v in counts.by_index.items() if any(m))
    b2 = 2.0 * sum(v for m, v in counts.by_index.items() if sum(m) % 2)
    if counts.mode == "unit":
        return CycleClassSummary(
            counts.n,
            _round_count(t0),
            _round_count(b1),
            _round_count(b2 / 2.0),
            float(b1),
            float(b2),
            float(t0),
        )
    return CycleClassSummary(counts.n, None, None, None, float(b1), float(b2), float(t0))


_TRACE_MODE = {"adjacency": "unit", "schrodinger": "schrodinger", "transition": "normalized"}


def walk_sums_for_kind(
    graph: FundamentalGraph, kind: str, n: int, cap: int = DEFAULT_WALK_CAP
) -> WalkClassCounts:
    mode = _TRACE_MODE.get(kind)
    if mode is None:
        raise ValueError(f"no walk engine for operator kind {kind!r}")
    if mode == "unit":
        return count_walks(graph, n, cap=cap)
    if mode == "schrodinger":
        return weighted_walk_sums(graph, n, cap=cap)
    return normalized_walk_sums(graph, n, cap=cap)


def trace_series(
    graph: FundamentalGraph,
    kind: str,
    n: int,
    check: bool = True,
    tol: float = 1e-9,
    cap: int = DEFAULT_WALK_CAP,
) -> LaurentPoly:
    """Trace of the n-th symbolic power, cross-checked against walk sums.

    Supported kinds: ``adjacency``, ``schrodinger`` (potential shifted so
    min(V - deg) = 0, matching :func:`weighted_walk_sums`), ``transition``.
    The coefficient map must agree with the independent walk enumeration to
    ``tol`` per coefficient; a mismatch raises, since it can only mean one of
    the engines is wrong.  The check is skipped when enumeration would bust
    ``cap``.
    """
    if kind not in _TRACE_MODE:
        raise ValueError(f"trace series is defined for kinds {tuple(_TRACE_MODE)}")
    matrix = symbolic_operator(graph, kind, normalize_potential=(kind == "schrodinger"))
    series = matrix.power(n).trace()
    if check:
        try:
            sums = walk_sums_for_kind(graph, kind, n, cap=cap)
        except SearchCapExceeded:
            return series
        keys = set(series.coeffs) | set(sums.by_index)
        worst = max(
            (abs(series.coeff(m) - sums.value(m)) for m in keys), default=0.0
        )
        if worst > tol:
            raise EngineMismatchError(
                f"trace-series coefficients deviate from walk sums by {worst:.3e} "
                f"(kind={kind}, n={n})"
            )
    return series
