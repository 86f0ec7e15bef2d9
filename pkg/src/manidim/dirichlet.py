"""Constructive weighted Dirichlet-style solver on polynomial graph charts.

Given a chart (x, f(x)) over a box, dependent exponents tau_1..tau_m with
sum s < 1, a target point x and a budget Q, the guarantee is: there exists
(p_1,...,p_n, q) with 1 <= q <= Q, (p_1/q,...,p_d/q) inside the domain,

    |x_i - p_i/q|            <  4^(m/d) / (q * Q^((1-s)/d)),   i <= d,
    |f_j(p/q) - p_{d+j}/q|   <  q^(-tau_j - 1) / 2,            j <= m,

once Q clears an explicit threshold Q0 built from the curvature constant of
the chart and the boundary distance of x.  The solver realizes the guarantee
by an exhaustive scan over q: the independent radius is below 1/(2q) for all
shipped benchmark domains, so only the nearest integer to q*x_i can satisfy
it, reducing the search to O(Q) exact manifold evaluations.

All left-hand sides are evaluated in exact rational arithmetic on the
snapped target (see :func:`manidim.core.snap_to_binary`); right-hand sides
are single float constants in the q-scaled form |q*x_i - p_i| < A, so
independent re-implementations comparing the same predicate agree exactly.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .core import (
    MongeManifold,
    RationalPoint,
    WeightVector,
    nearest_int,
    snap_to_binary,
)
from .errors import HypothesisError, TheoremViolationError

INTERVAL_BOUND = "interval-bound"
GRID_SAMPLE = "grid-sample"


@dataclass(frozen=True)
class ManifoldConstants:
    """Suprema of |second partials| (C) and |first partials| (D) over the
    chart domain.  With method ``interval-bound`` both are certified upper
    bounds from exact interval evaluation of the formal derivatives;
    ``grid-sample`` is a plain max over a sample grid (not certified)."""

    C: float
    D: float
    method: str
    resolution: int


@dataclass(frozen=True)
class DirichletSolution:
    """An accepted integer vector with its budget and per-axis errors."""

    point: RationalPoint
    Q: int
    independent_errors: tuple[float, ...]
    dependent_errors: tuple[float, ...]


@functools.lru_cache(maxsize=128)
def manifold_constants(M: MongeManifold, method: str = INTERVAL_BOUND,
                       resolution: int = 0) -> ManifoldConstants:
    """Compute the curvature and slope constants of the chart."""
    firsts = [comp.partial(i) for comp in M.components for i in range(M.d)]
    seconds = [g.partial(k) for g in firsts for k in range(M.d)]
    if method == INTERVAL_BOUND:
        C = max((g.max_abs_bound(M.domain) for g in seconds), default=Fraction(0))
        D = max((g.max_abs_bound(M.domain) for g in firsts), default=Fraction(0))
        return ManifoldConstants(float(C), float(D), INTERVAL_BOUND, 0)
    if method == GRID_SAMPLE:
        if resolution < 2:
            raise ValueError("grid-sample needs resolution >= 2")
        pts = _sample_grid(M, resolution)
        C = max((abs(g.evaluate_float(p)) for g in seconds for p in pts), default=0.0)
        D = max((abs(g.evaluate_float(p)) for g in firsts for p in pts), default=0.0)
        return ManifoldConstants(C, D, GRID_SAMPLE, resolution)
    raise ValueError(f"unknown method {method!r}")


def _sample_grid(M: MongeManifold, resolution: int) -> list[tuple[float, ...]]:
    axes = [
        [float(lo) + (float(hi) - float(lo)) * i / (resolution - 1)
         for i in range(resolution)]
        for lo, hi in zip(M.domain.lower, M.domain.upper)
    ]
    pts = [()]
    for axis in axes:
        pts = [p + (v,) for p in pts for v in axis]
    return pts


def _dependent_vector(tau_dep) -> WeightVector:
    if isinstance(tau_dep, WeightVector):
        if tau_dep.split != 0:
            tau_dep = WeightVector.dependent(tau_dep.dependent_block)
        return tau_dep
    return WeightVector.dependent(tuple(tau_dep))


def _snap_point(x: Sequence, d: int) -> tuple[Fraction, ...]:
    xs = tuple(snap_to_binary(v) for v in x)
    if len(xs) != d:
        raise ValueError(f"target point has {len(xs)} coordinates, expected {d}")
    return xs


def threshold(M: MongeManifold, x: Sequence, r_override: float | None = None) -> float:
    """min{1, r, (2 C d^2)^(-1/2)} with r the boundary distance of x.
    Affine charts (C = 0) have identically vanishing curvature remainder, so
    the third term is dropped rather than divided by zero."""
    xs = _snap_point(x, M.d)
    if r_override is not None:
        r = float(r_override)
        if r <= 0.0:
            raise HypothesisError(["interior-point"], "r override must be positive")
    else:
        r = float(M.domain.boundary_distance(xs))
        if r <= 0.0:
            raise HypothesisError(
                ["interior-point"], "target must lie strictly inside the domain"
            )
    C = manifold_constants(M).C
    t = min(1.0, r)
    if C > 0.0:
        t = min(t, (1.0 / (2.0 * C * M.d * M.d)) ** 0.5)
    return t


def compute_Q0(M: MongeManifold, tau_dep, x: Sequence,
               r_override: float | None = None) -> int:
    """Smallest integer budget beyond which the solver's guarantee holds:
    the least Q0 with (4^-m Q^(1-s))^(-1/d) < min{1, r, (2Cd^2)^(-1/2)} for
    all Q >= Q0 (the left side is strictly decreasing in Q)."""
    tv = _dependent_vector(tau_dep)
    if tv.m != M.m:
        raise ValueError("dependent weight count must equal the codimension")
    s = tv.dependent_sum
    if s >= 1.0:
        raise HypothesisError(["dependent-sum"], "dependent weights must sum below 1")
    t = threshold(M, x, r_override)
    d, m = M.d, M.m

    def small_enough(Q: int) -> bool:
        return (4.0 ** (-m) * float(Q) ** (1.0 - s)) ** (-1.0 / d) < t

    estimate = (4.0 ** m * t ** (-d)) ** (1.0 / (1.0 - s))
    Q = max(1, int(estimate) - 4)
    while not small_enough(Q):
        Q += 1
    while Q > 1 and small_enough(Q - 1):
        Q -= 1
    return Q


def _scan(M: MongeManifold, tau_dep, x: Sequence, Q: int,
          stop_at_first: bool) -> list[DirichletSolution]:
    tv = _dependent_vector(tau_dep)
    if tv.m != M.m:
        raise ValueError("dependent weight count must equal the codimension")
    s = tv.dependent_sum
    if s >= 1.0:
        raise HypothesisError(["dependent-sum"], "dependent weights must sum below 1")
    if Q < 1:
        raise ValueError("budget Q must be >= 1")
    xs = _snap_point(x, M.d)
    d, m = M.d, M.m
    lower, upper = M.domain.lower, M.domain.upper

    # q-scaled independent radius: one float constant per budget
    A = Fraction(4.0 ** (m / d) * float(Q) ** (-(1.0 - s) / d))
    taus = tv.entries

    found = []
    for q in range(1, Q + 1):
        ok = True
        p_ind = []
        errs_scaled = []
        for xi in xs:
            qx = q * xi
            pi = nearest_int(qx)
            e = abs(qx - pi)
            if e >= A:
                ok = False
                break
            p_ind.append(pi)
            errs_scaled.append(e)
        if not ok:
            continue
        coords = tuple(Fraction(pi, q) for pi in p_ind)
        if any(not lo <= c <= hi for c, lo, hi in zip(coords, lower, upper)):
            continue
        ys = M.evaluate_exact(coords)
        p_dep = []
        deps_scaled = []
        for yj, tj in zip(ys, taus):
            qy = q * yj
            pj = nearest_int(qy)
            e = abs(qy - pj)
            if e >= Fraction(0.5 * float(q) ** (-tj)):
                ok = False
                break
            p_dep.append(pj)
            deps_scaled.append(e)
        if not ok:
            continue
        found.append(DirichletSolution(
            point=RationalPoint(tuple(p_ind) + tuple(p_dep), q),
            Q=Q,
            independent_errors=tuple(float(e / q) for e in errs_scaled),
            dependent_errors=tuple(float(e / q) for e in deps_scaled),
        ))
        if stop_at_first:
            break
    return found


def solve_dirichlet(M: MongeManifold, tau_dep, x: Sequence, Q: int) -> DirichletSolution:
    """Scan q = 1..Q and return the smallest accepting denominator.

    For Q >= compute_Q0 a solution is guaranteed to exist; failure then is a
    defect signal and raises :class:`TheoremViolationError`.
    """
    found = _scan(M, tau_dep, x, Q, stop_at_first=True)
    if not found:
        raise TheoremViolationError(
            f"no solution with q <= {Q}; existence is guaranteed for budgets "
            f">= the threshold returned by compute_Q0"
        )
    return found[0]


def scan_dirichlet(M: MongeManifold, tau_dep, x: Sequence, Q: int) -> list[DirichletSolution]:
    """Every accepting denominator q <= Q (for cross-checks against
    exhaustive oracles)."""
    return _scan(M, tau_dep, x, Q, stop_at_first=False)


def infinitude_sweep(M: MongeManifold, tau_dep, x: Sequence,
                     Q_ladder: Sequence[int]) -> list[DirichletSolution]:
    """Solve at each budget of an increasing ladder, re-checking each
    solution against the budget-free bound |x_i - p_i/q| < 4^(m/d) *
    q^(-1-(1-s)/d) (implied by q <= Q, so it always holds for returned
    solutions).

    Irrational targets admit infinitely many distinct denominators, so the
    distinct-q count should grow along the ladder; if it stagnates at a
    single q across a multi-step ladder the sweep raises
    :class:`TheoremViolationError` (expected for rational targets, whose
    exact denominator can accept every budget).
    """
    ladder = [int(Q) for Q in Q_ladder]
    if not ladder:
        raise ValueError("ladder must be nonempty")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be strictly increasing")
    tv = _dependent_vector(tau_dep)
    s = tv.dependent_sum
    xs = _snap_point(x, M.d)
    d, m = M.d, M.m

    sols = []
    for Q in ladder:
        sol = solve_dirichlet(M, tv, xs, Q)
        q = sol.point.q
        budget_free = Fraction(4.0 ** (m / d) * float(q) ** (-(1.0 - s) / d))
        for xi, pi in zip(xs, sol.point.p[:d]):
            if abs(q * xi - pi) >= budget_free:
                raise TheoremViolationError(
                    f"solution at q={q} misses the budget-free radius", sols
                )
        sols.append(sol)

    distinct = {sol.point.q for sol in sols}
    if len(ladder) >= 2 and len(distinct) == 1:
        raise TheoremViolationError(
            f"denominator stagnated at q={ladder and sols[0].point.q} across "
            f"{len(ladder)} budgets; target is likely rational",
            sols,
        )
    return sols


def certify_solution(M: MongeManifold, tau_dep, x: Sequence,
                     sol: DirichletSolution, guard: float = 1e-12) -> dict:
    """Re-verify a solution: exact rational left sides against
    high-precision right sides with a relative guard band.

    Returns {"ok": bool, "checks": [(name, lhs, rhs, ok), ...]} where lhs
    and rhs are floats of the compared quantities.
    """
    tv = _dependent_vector(tau_dep)
    s = tv.dependent_sum
    xs = _snap_point(x, M.d)
    d, m = M.d, M.m
    q = sol.point.q
    checks = []

    def against(name: str, lhs: Fraction, rhs: "mpmath.mpf"):
        lhs_mp = mpmath.mpf(lhs.numerator) / mpmath.mpf(lhs.denominator)
        ok = lhs_mp < rhs * (1 + mpmath.mpf(guard))
        checks.append((name, float(lhs_mp), float(rhs), bool(ok)))

    with mpmath.workdps(50):
        checks.append(("q-in-budget", float(q), float(sol.Q), 1 <= q <= sol.Q))
        coords = tuple(Fraction(pi, q) for pi in sol.point.p[:d])
        inside = all(
            lo <= c <= hi
            for c, lo, hi in zip(coords, M.domain.lower, M.domain.upper)
        )
        checks.append(("independent-point-in-domain", 0.0, 0.0, inside))
        A = mpmath.mpf(4) ** mpmath.mpf(m) / mpmath.mpf(sol.Q) ** (1 - mpmath.mpf(s))
        A = A ** (mpmath.mpf(1) / d)
        for i, xi in enumerate(xs):
            against(f"independent-{i}", abs(q * xi - sol.point.p[i]), A)
        ys = M.evaluate_exact(coords)
        for j, (yj, tj) in enumerate(zip(ys, tv.entries)):
            B = mpmath.mpf(q) ** (-mpmath.mpf(tj)) / 2
            against(f"dependent-{j}", abs(q * yj - sol.point.p[d + j]), B)

    return {"ok": all(c[3] for c in checks), "checks": checks}
