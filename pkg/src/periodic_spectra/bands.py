"""Quasimomentum sweeps: band tables, bandwidths, spectrum measure, flat bands.

Bands follow the sorted-eigenvalue labeling: band j is the min/max over the
grid of the j-th smallest fiber eigenvalue.  Flat bands are detected at the
operator level instead: a value that some eigenvalue attains at *every* grid
point is flat even when band crossings hide it from the sorted labeling (a
flat level running through the middle of a dispersive band splits across two
sorted bands, whose widths are both nonzero).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graphs import FundamentalGraph
from .operators import check_kind, fiber_eigenvalues_grid, symbolic_operator

DEFAULT_GRID_N = 64


def default_flat_tol(value: float) -> float:
    return 1e-8 * (1.0 + abs(value))


@dataclass(frozen=True)
class KGrid:
    """Uniform grid 2*pi*m/n on the torus; n even so both 0 and pi*(1,..,1) appear."""

    dim: int
    points_per_dim: int = DEFAULT_GRID_N

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("grid dimension must be positive")
        if self.points_per_dim < 2 or self.points_per_dim % 2:
            raise ValueError("points_per_dim must be even and at least 2")

    @cached_property
    def points(self) -> np.ndarray:
        n = self.points_per_dim
        mesh = np.array(
            list(itertools.product(range(n), repeat=self.dim)), dtype=float
        )
        return 2.0 * np.pi * mesh / n


@dataclass(frozen=True)
class Band:
    lo: float
    hi: float
    flat: bool


@dataclass(frozen=True)
class BandTable:
    """Per-band intervals from a grid sweep plus flat-level diagnostics.

    ``flat_candidates`` holds ``(value, residual)`` for every distinct
    eigenvalue at k = 0, where the residual is the worst distance over the
    grid from that value to the nearest eigenvalue; a residual below the flat
    tolerance certifies a flat level.
    """

    kind: str
    grid_n: int
    bands: tuple[Band, ...]
    flat_candidates: tuple[tuple[float, float], ...]

    @property
    def flat_values(self) -> tuple[float, ...]:
        return tuple(b.lo for b in flat_bands(self))


def dispersion(
    graph: FundamentalGraph,
    kind: str,
    grid: KGrid | None = None,
    workers: int | None = None,
    normalize_potential: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Grid points and sorted fiber eigenvalues, shapes (npts, d) and (npts, nu).

    ``normalize_potential`` (Schrodinger kind only) shifts energies so that
    min(V - deg) = 0; bandwidths are unaffected.
    """
    check_kind(kind)
    grid = grid or KGrid(graph.dim)
    if grid.dim != graph.dim:
        raise ValueError("grid dimension does not match the graph")
    matrix = symbolic_operator(graph, kind, normalize_potential=normalize_potential)
    return grid.points, fiber_eigenvalues_grid(matrix, grid.points, workers=workers)


def _flat_candidates(lam: np.ndarray) -> tuple[tuple[float, float], ...]:
    # Any flat level is present at k = 0, so its eigenvalues are the candidates.
    at_zero = lam[0]
    candidates: list[float] = []
    for value in at_zero:
        if candidates and abs(value - candidates[-1]) <= default_flat_tol(value):
            continue
        candidates.append(float(value))
    out = []
    for value in candidates:
        residual = float(np.abs(lam - value).min(axis=1).max())
        out.append((value, residual))
    return tuple(out)


def table_from_eigenvalues(kind: str, grid: KGrid, lam: np.ndarray) -> BandTable:
    lows = lam.min(axis=0)
    highs = lam.max(axis=0)
    bands = tuple(
        Band(float(lo), float(hi), bool(hi - lo < default_flat_tol(hi)))
        for lo, hi in zip(lows, highs)
    )
    return BandTable(kind, grid.points_per_dim, bands, _flat_candidates(lam))


def band_structure(
    graph: FundamentalGraph,
    kind: str,
    grid: KGrid | None = None,
    workers: int | None = None,
) -> BandTable:
    """Sweep the torus and return min/max of each sorted eigenvalue curve."""
    grid = grid or KGrid(graph.dim)
    _, lam = dispersion(graph, kind, grid, workers=workers)
    return table_from_eigenvalues(kind, grid, lam)


def power_band_structure(
    graph: FundamentalGraph,
    kind: str,
    n: int,
    grid: KGrid | None = None,
    workers: int | None = None,
    normalize_potential: bool = False,
) -> BandTable:
    """Band table of the n-th power: sweep eigenvalues, raise to n, re-sort."""
    if n < 1:
        raise ValueError("power must be positive")
    grid = grid or KGrid(graph.dim)
    _, lam = dispersion(
        graph, kind, grid, workers=workers, normalize_potential=normalize_potential
    )
    powered = np.sort(lam**n, axis=1)
    return table_from_eigenvalues(kind, grid, powered)


def total_bandwidth(table: BandTable) -> float:
    """Sum of band lengths; overlapping bands are counted with multiplicity."""
    return float(sum(b.hi - b.lo for b in table.bands))


def merge_intervals(
    intervals: list[tuple[float, float]], gap_tol: float = 0.0
) -> list[tuple[float, float]]:
    if not intervals:
        return []
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1] + gap_tol:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def spectrum_components(table: BandTable, gap_tol: float = 0.0) -> list[tuple[float, float]]:
    """Connected components of the union of all bands."""
    return merge_intervals([(b.lo, b.hi) for b in table.bands], gap_tol=gap_tol)


def spectrum_measure(table: BandTable) -> float:
    """Lebesgue measure of the union of the bands."""
    return float(sum(hi - lo for lo, hi in spectrum_components(table)))


def flat_bands(table: BandTable, tol: float | None = None) -> list[Band]:
    """Flat levels: values attained by some eigenvalue at every grid point."""
    if tol is not None and tol <= 0:
        raise ValueError("flat-band tolerance must be positive")
    out = []
    for value, residual in table.flat_candidates:
        limit = tol if tol is not None else default_flat_tol(value)
        if residual < limit:
            out.append(Band(value, value, True))
    return out


# -- export ------------------------------------------------------------------


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def band_table_document(table: BandTable) -> dict:
    return {
        "kind": table.kind,
        "grid_n": table.grid_n,
        "bands": [
            {"j": j + 1, "lo": b.lo, "hi": b.hi, "flat": b.flat}
            for j, b in enumerate(table.bands)
        ],
        "flat_values": list(table.flat_values),
        "components": [list(c) for c in spectrum_components(table)],
        "total_bandwidth": total_bandwidth(table),
        "spectrum_measure": spectrum_measure(table),
    }


def band_table_csv(table: BandTable) -> str:
    lines = ["j,lo,hi,flat"]
    for j, b in enumerate(table.bands):
        lines.append(f"{j + 1},{_fmt(b.lo)},{_fmt(b.hi)},{str(b.flat).lower()}")
    return "\n".join(lines) + "\n"


def dispersion_csv(points: np.ndarray, lam: np.ndarray) -> str:
    """One row per grid point: quasimomentum components then the eigenvalues."""
    dim = points.shape[1]
    header = [f"k{s + 1}" for s in range(dim)] + [f"lambda{j + 1}" for j in range(lam.shape[1])]
    lines = [",".join(header)]
    for row_k, row_l in zip(points, lam):
        lines.append(",".join(_fmt(v) for v in (*row_k, *row_l)))
    return "\n".join(lines) + "\n"
