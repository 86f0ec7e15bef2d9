"""Empirical measure probes: Lebesgue coverage fractions of truncated ball
families and box-counting dimension estimates of truncated rectangle
families.

Box counting uses dyadic cells of side 2^-k anchored at the domain's lower
corner; a cell counts as covered when the open rectangle meets the closed
cell.  Coverage uses cell-center sampling of a uniform grid (the exact
union volume is only cheap in one dimension, where tests keep an
interval-sweep oracle); sampling error is controlled by the resolution.

The fitted box-count slope upper-bounds Hausdorff dimension and truncated
families are fat at coarse scales, so the default slope fit uses the
deepest third of the ladder and drops saturated scales.  Every dimension
report carries :data:`BOX_DIMENSION_CAVEAT` for this reason.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DomainBox, Hyperrectangle, MongeManifold
from .formulas import DimensionResult, manifold_lower_bound
from .dirichlet import manifold_constants
from .enumeration import (
    DEFAULT_CANDIDATE_CAP,
    PointFamily,
    ball_arrays,
    containment_constant,
    enumerate_points,
    proof_weight_vector_manifold,
    rectangle_arrays,
)

BOX_DIMENSION_CAVEAT = (
    "box-count slope is an upper-dimension proxy measured on a truncated "
    "family; it probes the lower-bound formula for plausibility and does "
    "not verify it"
)

MAX_CELLS = 2 ** 31


@dataclass(frozen=True)
class CoverageReport:
    """Fraction of grid cell centers covered by at least one ball."""

    fraction: float
    grid_resolution: int
    window: tuple[int, int]


@dataclass(frozen=True)
class ScaleCountTable:
    """Dyadic box counts with a least-squares slope.

    ``rows`` holds (depth, delta, count) with delta = 2^-depth strictly
    decreasing; ``slope`` is the least-squares slope of log count against
    log(1/delta) over ``fitted_depths`` (the ``fit_window`` row range minus
    saturated scales, unless that would leave fewer than two rows);
    ``residual`` is the RMS fit residual.
    """

    rows: tuple[tuple[int, float, int], ...]
    slope: float
    fit_window: tuple[int, int]
    fitted_depths: tuple[int, ...]
    residual: float


def _as_arrays(rects) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(rects, tuple) and len(rects) == 2:
        centers, hw = np.asarray(rects[0], dtype=np.float64), np.asarray(rects[1], dtype=np.float64)
        if centers.ndim == 1:
            centers = centers[:, None]
        if hw.ndim == 1:
            hw = np.broadcast_to(hw[:, None], centers.shape).copy()
        return centers, hw
    centers = np.array([r.center for r in rects], dtype=np.float64)
    hw = np.array([r.half_widths for r in rects], dtype=np.float64)
    if centers.size == 0:
        centers = centers.reshape(0, 1)
        hw = hw.reshape(0, 1)
    return centers, hw


def _index_ranges(lo: float, n_cells: int, step: float,
                  a: np.ndarray, b: np.ndarray,
                  offset: float) -> tuple[np.ndarray, np.ndarray]:
    # indices j with the open interval (a, b) meeting [lo + j*step, ...]
    # offset 0.0: closed cells of width step; offset 0.5: grid centers
    u = (a - lo) / step - offset
    v = (b - lo) / step - offset
    if offset == 0.0:
        jmin = np.floor(u).astype(np.int64)
        jmax = (np.ceil(v) - 1.0).astype(np.int64)
    else:
        jmin = np.floor(u).astype(np.int64) + 1
        jmax = (np.ceil(v) - 1.0).astype(np.int64)
    return np.maximum(jmin, 0), np.minimum(jmax, n_cells - 1)


def _covered_count_1d(jmin: np.ndarray, jmax: np.ndarray, n_cells: int) -> int:
    ok = jmin <= jmax
    if not ok.any():
        return 0
    diff = np.zeros(n_cells + 1, dtype=np.int64)
    np.add.at(diff, jmin[ok], 1)
    np.add.at(diff, jmax[ok] + 1, -1)
    return int(np.count_nonzero(np.cumsum(diff[:-1]) > 0))


def coverage(balls, box: DomainBox, grid_resolution: int,
             workers: int = 1,
             window: tuple[int, int] = (0, 0)) -> CoverageReport:
    """Coverage fraction of the uniform cell-center grid by the open balls.

    ``balls`` is a list of rectangles or a (centers, half_widths) array
    pair; ``window`` is recorded verbatim in the report.  Deterministic for
    fixed inputs; an empty family gives 0.0.
    """
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be >= 2")
    centers, hw = _as_arrays(balls)
    if centers.shape[0] == 0:
        return CoverageReport(0.0, grid_resolution, window)
    d = box.dim
    if centers.shape[1] != d:
        raise ValueError("ball/box dimension mismatch")
    res = grid_resolution
    lows = [float(v) for v in box.lower]
    steps = [float(w) / res for w in box.widths]

    if d == 1:
        jmin, jmax = _index_ranges(
            lows[0], res, steps[0],
            centers[:, 0] - hw[:, 0], centers[:, 0] + hw[:, 0], 0.5,
        )
        covered = _covered_count_1d(jmin, jmax, res)
        return CoverageReport(covered / res, grid_resolution, window)

    ranges = []
    for i in range(d):
        jmin, jmax = _index_ranges(
            lows[i], res, steps[i],
            centers[:, i] - hw[:, i], centers[:, i] + hw[:, i], 0.5,
        )
        ranges.append((jmin, jmax))
    keep = np.ones(centers.shape[0], dtype=bool)
    for jmin, jmax in ranges:
        keep &= jmin <= jmax
    idx = np.nonzero(keep)[0]

    def tile_count(t0: int, t1: int) -> int:
        shape = (t1 - t0,) + (res,) * (d - 1)
        grid = np.zeros(shape, dtype=bool)
        j0min, j0max = ranges[0]
        for i in idx:
            a = max(int(j0min[i]) - t0, 0)
            b = min(int(j0max[i]) - t0, t1 - t0 - 1)
            if a > b:
                continue
            sl = (slice(a, b + 1),) + tuple(
                slice(int(ranges[ax][0][i]), int(ranges[ax][1][i]) + 1)
                for ax in range(1, d)
            )
            grid[sl] = True
        return int(np.count_nonzero(grid))

    if workers <= 1:
        covered = tile_count(0, res)
    else:
        edges = np.linspace(0, res, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            covered = sum(pool.map(lambda span: tile_count(*span),
                                   [(int(edges[i]), int(edges[i + 1]))
                                    for i in range(workers)]))
    return CoverageReport(covered / res ** d, grid_resolution, window)


def box_count(rects, box: DomainBox, depth_max: int,
              fit_window: tuple[int, int] | None = None,
              workers: int = 1) -> ScaleCountTable:
    """Count dyadic cells of side 2^-k meeting the union, k = 0..depth_max,
    and fit the slope of log count against log(1/delta).

    ``fit_window`` overrides the default deepest-third row range (start,
    stop indices into the ladder).
    """
    if not 0 <= depth_max <= 30:
        raise ValueError("depth_max must lie in 0..30")
    centers, hw = _as_arrays(rects)
    if centers.shape[0] == 0:
        raise ValueError("rectangle family must be nonempty")
    d = box.dim
    if centers.shape[1] != d:
        raise ValueError("rectangle/box dimension mismatch")
    lows = [float(v) for v in box.lower]
    widths = [float(w) for w in box.widths]

    rows = []
    for k in range(depth_max + 1):
        delta = 2.0 ** -k
        n_cells = [max(1, math.ceil(w / delta)) for w in widths]
        total = math.prod(n_cells)
        if total > MAX_CELLS:
            raise ValueError(
                f"cell counter overflow: {total} cells at depth {k} exceeds {MAX_CELLS}"
            )
        if d == 1:
            jmin, jmax = _index_ranges(
                lows[0], n_cells[0], delta,
                centers[:, 0] - hw[:, 0], centers[:, 0] + hw[:, 0], 0.0,
            )
            count = _covered_count_1d(jmin, jmax, n_cells[0])
        else:
            count = _box_count_nd(centers, hw, lows, n_cells, delta, workers)
        rows.append((k, delta, count))

    slope, window, fitted, residual = _fit_slope(rows, widths, fit_window)
    return ScaleCountTable(tuple(rows), slope, window, fitted, residual)


def _box_count_nd(centers, hw, lows, n_cells, delta, workers) -> int:
    d = centers.shape[1]
    ranges = []
    for i in range(d):
        jmin, jmax = _index_ranges(
            lows[i], n_cells[i], delta,
            centers[:, i] - hw[:, i], centers[:, i] + hw[:, i], 0.0,
        )
        ranges.append((jmin, jmax))
    keep = np.ones(centers.shape[0], dtype=bool)
    for jmin, jmax in ranges:
        keep &= jmin <= jmax
    idx = np.nonzero(keep)[0]

    def chunk_grid(sub) -> np.ndarray:
        grid = np.zeros(tuple(n_cells), dtype=bool)
        for i in sub:
            sl = tuple(
                slice(int(ranges[ax][0][i]), int(ranges[ax][1][i]) + 1)
                for ax in range(d)
            )
            grid[sl] = True
        return grid

    if workers <= 1 or idx.size < 4 * workers:
        return int(np.count_nonzero(chunk_grid(idx)))
    chunks = np.array_split(idx, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        grids = list(pool.map(chunk_grid, chunks))
    return int(np.count_nonzero(np.logical_or.reduce(grids)))


def _fit_slope(rows, widths, fit_window):
    length = len(rows)
    if fit_window is None:
        w = max(2, (length + 2) // 3)
        window = (length - w, length)
    else:
        window = (max(0, fit_window[0]), min(length, fit_window[1]))
        if window[1] - window[0] < 2:
            raise ValueError("fit window must contain at least two scales")
    candidates = rows[window[0]:window[1]]
    unsaturated = []
    for k, delta, count in candidates:
        total = math.prod(max(1, math.ceil(width / delta)) for width in widths)
        if count < total:
            unsaturated.append((k, delta, count))
    used = unsaturated if len(unsaturated) >= 2 else candidates
    if any(count == 0 for _, _, count in used):
        # empty-set ladder: no scaling information
        return 0.0, window, tuple(k for k, _, _ in used), 0.0
    x = np.array([math.log(1.0 / delta) for _, delta, _ in used])
    y = np.array([math.log(count) for _, _, count in used])
    if np.allclose(x, x[0]):
        return 0.0, window, tuple(k for k, _, _ in used), 0.0
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), window, tuple(k for k, _, _ in used), residual


@dataclass(frozen=True)
class DimensionProbeResult:
    """Box-count tables per budget, side by side with the closed-form
    lower bound and the proxy-status caveat."""

    tables: tuple[tuple[int, ScaleCountTable], ...]
    formula: DimensionResult
    caveat: str = BOX_DIMENSION_CAVEAT


def dimension_experiment(M: MongeManifold, tau_full, Q_ladder: Sequence[int],
                         depth_max: int, k: float | None = None,
                         cap: int = DEFAULT_CANDIDATE_CAP,
                         workers: int = 1) -> DimensionProbeResult:
    """For each budget Q: enumerate members with q <= Q, build the projected
    rectangle family on the independent axes, box-count it.

    ``k`` defaults to the certified containment constant of the chart.
    Budgets reuse the previous enumeration incrementally.
    """
    ladder = [int(Q) for Q in Q_ladder]
    if not ladder or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("Q ladder must be nonempty and strictly increasing")
    formula = manifold_lower_bound(tau_full, M.d, M.m)
    tau_dep = tau_full.dependent_block if hasattr(tau_full, "dependent_block") else tuple(tau_full)[M.d:]
    if k is None:
        a = proof_weight_vector_manifold(tau_full, M.d, M.m)
        k = containment_constant(manifold_constants(M).D, M.d, a.entries[-1])

    tables = []
    family: PointFamily | None = None
    for Q in ladder:
        if family is None:
            family = enumerate_points(M, tau_dep, 1, Q, cap=cap, workers=workers)
        else:
            extension = enumerate_points(M, tau_dep, family.Q_max + 1, Q,
                                         cap=cap, workers=workers)
            family = PointFamily.merge(family, extension)
        arrays = rectangle_arrays(family, tau_full, k)
        tables.append((Q, box_count(arrays, M.domain, depth_max, workers=workers)))
    return DimensionProbeResult(tuple(tables), formula)


def coverage_sweep(M: MongeManifold, tau_dep, windows: Sequence[int],
                   grid_resolution: int, k: float = 1.0,
                   cap: int = DEFAULT_CANDIDATE_CAP,
                   workers: int = 1) -> list[CoverageReport]:
    """Coverage fractions of the ball family over nested windows q <= W."""
    ws = [int(w) for w in windows]
    if not ws or any(b <= a for a, b in zip(ws, ws[1:])):
        raise ValueError("window ladder must be nonempty and strictly increasing")
    reports = []
    family: PointFamily | None = None
    for W in ws:
        if family is None:
            family = enumerate_points(M, tau_dep, 1, W, cap=cap, workers=workers)
        else:
            extension = enumerate_points(M, tau_dep, family.Q_max + 1, W,
                                         cap=cap, workers=workers)
            family = PointFamily.merge(family, extension)
        reports.append(coverage(ball_arrays(family, k), M.domain,
                                grid_resolution, workers=workers, window=(1, W)))
    return reports
