"""Acceptance criteria behind the ``verify`` subcommand.

Each criterion is a function returning a :class:`CriterionResult`; the
full-budget profile is what the test suite runs, the ``smoke`` profile
shrinks the expensive budgets and exists so the determinism criterion can
execute every suite's report writer twice at tolerable cost.

The brute-force oracles here are written directly from the defining
inequalities with plain Fraction arithmetic and share no code with the fast
paths they check.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .config import BENCHMARKS, benchmark_manifold
from .core import MongeManifold, WeightVector, snap_to_binary
from .dirichlet import compute_Q0, scan_dirichlet, solve_dirichlet
from .enumeration import enumerate_points
from .errors import TheoremViolationError
from .formulas import (
    blvv_simultaneous,
    jarnik_besicovitch,
    manifold_lower_bound,
    manifold_lower_bound_via_rectangles,
    planar_curve_dimension,
    proof_weight_vector_rynne,
    rynne_dimension,
    wwx_rectangle_bound,
)
from .fractal import box_count, coverage_sweep, dimension_experiment
from .reports import fmt, write_csv


@dataclass
class Context:
    output_dir: Path
    seed: int
    smoke: bool
    workers: int
    quiet: bool = False


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.cid:>2} {self.name}: {self.detail}  ({self.elapsed:.2f}s)"


def _report_config(ctx: Context, extra: dict) -> dict:
    return {"seed": ctx.seed, "profile": "smoke" if ctx.smoke else "full", **extra}


# ---------------------------------------------------------------------------
# 1-3: formula identities
# ---------------------------------------------------------------------------

def criterion_formula_collapse(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(ctx.seed)
    samples = 1000
    deltas = {"jarnik": 0.0, "blvv": 0.0, "planar": 0.0}
    for _ in range(samples):
        n = int(rng.integers(1, 7))
        t = 1.0 / n + 2.0 * rng.random()
        lhs = rynne_dimension((t,) * n).value
        rhs = jarnik_besicovitch(n, t).value
        deltas["jarnik"] = max(deltas["jarnik"], abs(lhs - rhs))

        d = int(rng.integers(1, 5))
        m = int(rng.integers(1, 4))
        nn = d + m
        t = 1.0 / nn + 0.999 * rng.random() * (1.0 / m - 1.0 / nn)
        lhs = manifold_lower_bound((t,) * nn, d, m).value
        rhs = blvv_simultaneous(nn, m, t).value
        deltas["blvv"] = max(deltas["blvv"], abs(lhs - rhs))

        t2 = 0.05 + 0.9 * rng.random()
        t1 = max(t2, 1.0 - t2) + 1.5 * rng.random()
        lhs = manifold_lower_bound((t1, t2), 1, 1).value
        rhs = planar_curve_dimension(t1, t2).value
        deltas["planar"] = max(deltas["planar"], abs(lhs - rhs))
    passed = all(v <= 1e-12 for v in deltas.values())
    write_csv(
        Path(ctx.output_dir) / "formula_collapse.csv",
        ["identity", "samples", "max_delta"],
        [(k, samples, v) for k, v in sorted(deltas.items())],
        _report_config(ctx, {"criterion": "formula-collapse"}),
    )
    detail = "max |delta| " + ", ".join(f"{k}={v:.2e}" for k, v in sorted(deltas.items()))
    return CriterionResult(1, "formula-collapse", passed, detail,
                           time.perf_counter() - t0)


def criterion_weight_composition(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(ctx.seed + 1)
    samples = 1000
    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(1, 7))
        tau = tuple(sorted((1.0 / n + 2.0 * rng.random() for _ in range(n)),
                           reverse=True))
        direct = rynne_dimension(tau).value
        composed = wwx_rectangle_bound(proof_weight_vector_rynne(tau)).value
        worst = max(worst, abs(direct - composed))
    passed = worst <= 1e-12
    write_csv(
        Path(ctx.output_dir) / "weight_composition.csv",
        ["samples", "max_delta"],
        [(samples, worst)],
        _report_config(ctx, {"criterion": "weight-composition"}),
    )
    return CriterionResult(2, "weight-composition", passed,
                           f"max |delta| {worst:.2e} over {samples} samples",
                           time.perf_counter() - t0)


def _random_manifold_weights(rng) -> tuple[tuple[float, ...], int, int]:
    d = int(rng.integers(1, 5))
    m = int(rng.integers(1, 4))
    dep = tuple(0.02 + rng.random() * (0.9 / m - 0.02) for _ in range(m))
    s = sum(dep)
    base = max(max(dep), (1.0 - s) / d)
    ind = tuple(sorted((base + 2.0 * rng.random() for _ in range(d)), reverse=True))
    return ind + dep, d, m


def criterion_transfer_algebra(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(ctx.seed + 2)
    samples = 1000
    worst_rect = worst_mid = 0.0
    for _ in range(samples):
        tau, d, m = _random_manifold_weights(rng)
        direct = manifold_lower_bound(tau, d, m).value
        via = manifold_lower_bound_via_rectangles(tau, d, m).value
        worst_rect = max(worst_rect, abs(direct - via))
        # middle form of the reduction chain, expanded in the tau variables
        s = sum(tau[d:])
        mid_value = min(
            (d + 1.0 - s + sum(tau[j] - tau[i] for i in range(j, d)))
            / (1.0 + tau[j])
            for j in range(d)
        )
        worst_mid = max(worst_mid, abs(direct - mid_value))
    passed = worst_rect <= 1e-12 and worst_mid <= 1e-12
    write_csv(
        Path(ctx.output_dir) / "transfer_algebra.csv",
        ["samples", "max_delta_rectangle_route", "max_delta_expanded_route"],
        [(samples, worst_rect, worst_mid)],
        _report_config(ctx, {"criterion": "transfer-algebra"}),
    )
    detail = (f"rectangle route {worst_rect:.2e}, expanded route {worst_mid:.2e} "
              f"over {samples} samples")
    return CriterionResult(3, "transfer-algebra", passed, detail,
                           time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# 4-6: solver guarantees
# ---------------------------------------------------------------------------

def _interior_points(M: MongeManifold, rng, count: int) -> list[tuple[float, ...]]:
    lows = np.array([float(v) for v in M.domain.lower])
    widths = np.array([float(v) for v in M.domain.widths])
    u = rng.random((count, M.d))
    pts = lows + widths * (0.1 + 0.8 * u)
    return [tuple(row) for row in pts]


def criterion_dirichlet_existence(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(ctx.seed + 3)
    points = 5 if ctx.smoke else 100
    failures = 0
    solves = 0
    rows = []
    for name in BENCHMARKS:
        M = benchmark_manifold(name)
        pts = _interior_points(M, rng, points)
        for s in (0.3, 0.5, 0.7):
            tau_dep = (s / M.m,) * M.m
            per_failures = 0
            max_q = 0
            for x in pts:
                Q0 = compute_Q0(M, tau_dep, x)
                for factor in (1, 2, 10):
                    solves += 1
                    try:
                        sol = solve_dirichlet(M, tau_dep, x, factor * Q0)
                        max_q = max(max_q, sol.point.q)
                    except TheoremViolationError:
                        per_failures += 1
            failures += per_failures
            rows.append((name, s, points, per_failures, max_q))
    passed = failures == 0
    write_csv(
        Path(ctx.output_dir) / "dirichlet_existence.csv",
        ["manifold", "dependent_sum", "points", "failures", "max_accepted_q"],
        rows,
        _report_config(ctx, {"criterion": "dirichlet-existence", "points": points}),
    )
    return CriterionResult(4, "dirichlet-existence", passed,
                           f"{solves} solves, {failures} diagnostics",
                           time.perf_counter() - t0)


def _candidates_near(value: Fraction, bound: Fraction) -> list[int]:
    """Integers p with |value - p| < bound, checked by cross-multiplied
    integer comparison |a - p b| e < c b for value = a/b, bound = c/e."""
    a, b = value.numerator, value.denominator
    c, e = bound.numerator, bound.denominator
    base = a // b
    return [p for p in range(base - 2, base + 3) if abs(a - p * b) * e < c * b]


def _oracle_scan_solutions(M: MongeManifold, tau_dep: tuple[float, ...],
                           x, Q: int) -> list[tuple[int, tuple[int, ...]]]:
    """Exhaustive reference solver: every integer candidate within one unit
    of q*x_i (and of q*f_j), checked directly against the strict bounds."""
    xs = [snap_to_binary(v) for v in x]
    d, m = M.d, M.m
    s = sum(tau_dep)
    A = Fraction(4.0 ** (m / d) * float(Q) ** (-(1.0 - s) / d))
    accepted = []
    for q in range(1, Q + 1):
        axes = []
        for xi in xs:
            qx = q * xi
            base = math.floor(qx)
            axes.append([p for p in range(base - 1, base + 3) if abs(qx - p) <= 1])
        for p_ind in itertools.product(*axes):
            if any(abs(q * xi - pi) >= A for xi, pi in zip(xs, p_ind)):
                continue
            coords = [Fraction(pi, q) for pi in p_ind]
            if any(not lo <= c <= hi for c, lo, hi in
                   zip(coords, M.domain.lower, M.domain.upper)):
                continue
            ys = M.evaluate_exact(coords)
            options = []
            for yj, tj in zip(ys, tau_dep):
                cands = _candidates_near(q * yj, Fraction(0.5 * float(q) ** (-tj)))
                if not cands:
                    options = None
                    break
                options.append(cands)
            if options is None:
                continue
            for p_dep in itertools.product(*options):
                accepted.append((q, tuple(p_ind) + tuple(p_dep)))
    return accepted


def _oracle_enumerate(M: MongeManifold, tau_dep: tuple[float, ...],
                      Q_min: int, Q_max: int) -> list[tuple[int, ...]]:
    """Exhaustive reference enumeration straight from the membership
    inequality with Fraction arithmetic."""
    rows = []
    for q in range(Q_min, Q_max + 1):
        ranges = [
            range(math.ceil(q * lo), math.floor(q * hi) + 1)
            for lo, hi in zip(M.domain.lower, M.domain.upper)
        ]
        bounds = [Fraction(float(q) ** (-tj)) for tj in tau_dep]
        frac = {p: Fraction(p, q) for r in ranges for p in r}
        for p_ind in itertools.product(*ranges):
            coords = [frac[pi] for pi in p_ind]
            ys = M.evaluate_exact(coords)
            options = []
            for yj, bound in zip(ys, bounds):
                cands = _candidates_near(q * yj, bound)
                if not cands:
                    options = None
                    break
                options.append(cands)
            if options is None:
                continue
            for p_dep in itertools.product(*options):
                rows.append((q,) + tuple(p_ind) + tuple(p_dep))
    return rows


def criterion_oracle_equivalence(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(ctx.seed + 4)
    Q = 40 if ctx.smoke else 200
    cases = {
        "parabola": ((0.5,), (math.sqrt(2.0) - 1.0,)),
        "paraboloid": ((0.4,), (math.sqrt(2.0) - 1.0, math.sqrt(3.0) - 1.0)),
    }
    rows = []
    all_equal = True
    for name, (tau_dep, special) in cases.items():
        M = benchmark_manifold(name)

        targets = [special] + _interior_points(M, rng, 3)
        solve_equal = True
        for x in targets:
            fast = [(sol.point.q, sol.point.p) for sol in scan_dirichlet(M, tau_dep, x, Q)]
            oracle = _oracle_scan_solutions(M, tau_dep, x, Q)
            solve_equal = solve_equal and fast == oracle
        rows.append((name, "solve-scan", Q, len(targets), solve_equal))

        family = enumerate_points(M, tau_dep, 1, Q)
        fast_rows = [tuple(int(v) for v in row) for row in family.member_array]
        oracle_rows = _oracle_enumerate(M, tau_dep, 1, Q)
        enum_equal = fast_rows == oracle_rows
        rows.append((name, "enumerate", Q, len(oracle_rows), enum_equal))
        all_equal = all_equal and solve_equal and enum_equal
    write_csv(
        Path(ctx.output_dir) / "oracle_equivalence.csv",
        ["benchmark", "check", "Q", "count", "equal"],
        rows,
        _report_config(ctx, {"criterion": "oracle-equivalence", "Q": Q}),
    )
    return CriterionResult(5, "oracle-equivalence", all_equal,
                           f"Q <= {Q}: " + ", ".join(
                               f"{r[0]}/{r[1]}={'ok' if r[4] else 'MISMATCH'}"
                               for r in rows),
                           time.perf_counter() - t0)


def criterion_worked_thresholds(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    M = benchmark_manifold("parabola")
    got_center = compute_Q0(M, (0.5,), (0.5,))
    got_irrational = compute_Q0(M, (0.5,), (math.sqrt(2.0) - 1.0,))
    passed = got_center == 65 and got_irrational == 94
    write_csv(
        Path(ctx.output_dir) / "worked_thresholds.csv",
        ["target", "expected", "computed"],
        [("x=1/2", 65, got_center), ("x=sqrt(2)-1", 94, got_irrational)],
        _report_config(ctx, {"criterion": "worked-thresholds"}),
    )
    return CriterionResult(6, "worked-thresholds", passed,
                           f"Q0(1/2)={got_center} (want 65), "
                           f"Q0(sqrt2-1)={got_irrational} (want 94)",
                           time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# 7-9: fractal probes
# ---------------------------------------------------------------------------

def cantor_intervals(depth: int) -> tuple[np.ndarray, np.ndarray]:
    """Centers and half-widths of the middle-thirds construction at the
    given depth (2^depth intervals of length 3^-depth)."""
    intervals = [(Fraction(0), Fraction(1))]
    for _ in range(depth):
        nxt = []
        for a, b in intervals:
            w = (b - a) / 3
            nxt.append((a, a + w))
            nxt.append((b - w, b))
        intervals = nxt
    centers = np.array([float((a + b) / 2) for a, b in intervals])
    hw = np.array([float((b - a) / 2) for a, b in intervals])
    return centers, hw


def criterion_boxcount_calibration(ctx: Context) -> CriterionResult:
    from .core import DomainBox

    t0 = time.perf_counter()
    unit1 = DomainBox((0,), (1,))
    unit2 = DomainBox((0, 0), (1, 1))

    cantor = box_count(cantor_intervals(12), unit1, 12)
    cantor_target = math.log(2) / math.log(3)

    full1 = box_count((np.array([[0.5]]), np.array([[0.5]])), unit1, 12)
    full2 = box_count((np.array([[0.5, 0.5]]), np.array([[0.5, 0.5]])), unit2, 8,
                      workers=ctx.workers)

    rows = [
        ("cantor-depth-12", cantor.slope, cantor_target, 0.05),
        ("full-box-1d", full1.slope, 1.0, 0.02),
        ("full-box-2d", full2.slope, 2.0, 0.02),
    ]
    passed = all(abs(slope - target) <= tol for _, slope, target, tol in rows)
    write_csv(
        Path(ctx.output_dir) / "boxcount_calibration.csv",
        ["case", "slope", "target", "tolerance"],
        rows,
        _report_config(ctx, {"criterion": "boxcount-calibration"}),
    )
    detail = ", ".join(f"{name}={fmt(slope)} (want {target:.4f}+-{tol})"
                       for name, slope, target, tol in rows)
    return CriterionResult(7, "boxcount-calibration", passed, detail,
                           time.perf_counter() - t0)


def criterion_coverage_growth(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    M = benchmark_manifold("parabola")
    windows = (10, 100, 1000) if ctx.smoke else (100, 1000, 10000)
    resolution = 4096 if ctx.smoke else 2 ** 16
    reports = coverage_sweep(M, (0.5,), windows, resolution, k=1.0,
                             workers=ctx.workers)
    fractions = [r.fraction for r in reports]
    nondecreasing = all(b >= a for a, b in zip(fractions, fractions[1:]))
    final_ok = fractions[-1] >= 0.95
    passed = nondecreasing and final_ok
    write_csv(
        Path(ctx.output_dir) / "coverage_growth.csv",
        ["q_max", "fraction"],
        [(r.window[1], r.fraction) for r in reports],
        _report_config(ctx, {"criterion": "coverage-growth",
                             "grid_resolution": resolution, "k": 1.0}),
    )
    detail = ("fractions " + " -> ".join(fmt(f) for f in fractions)
              + f", final >= 0.95: {final_ok}")
    return CriterionResult(8, "coverage-growth", passed, detail,
                           time.perf_counter() - t0)


def criterion_dimension_probe(ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    M = benchmark_manifold("parabola")
    tau = WeightVector((0.8, 0.3), 1)
    ladder = (100, 1000) if ctx.smoke else (100, 1000, 10000)
    depth = 10 if ctx.smoke else 14
    result = dimension_experiment(M, tau, ladder, depth, workers=ctx.workers)
    top_Q, top_table = result.tables[-1]
    floor = result.formula.value - 0.15
    passed = top_table.slope >= floor and bool(result.caveat)
    config = _report_config(ctx, {"criterion": "dimension-probe",
                                  "tau": "0.8,0.3", "depth": depth})
    write_csv(
        Path(ctx.output_dir) / "dimension_probe.csv",
        ["Q", "slope", "residual"],
        [(Q, table.slope, table.residual) for Q, table in result.tables],
        config,
        extra_comments=[f"formula-value: {fmt(result.formula.value)}",
                        f"caveat: {result.caveat}"],
    )
    write_csv(
        Path(ctx.output_dir) / "dimension_probe_scales.csv",
        ["depth", "delta", "count"],
        top_table.rows,
        {**config, "Q": top_Q},
        extra_comments=[f"slope: {fmt(top_table.slope)}",
                        f"caveat: {result.caveat}"],
    )
    detail = (f"slope(Q={top_Q})={fmt(top_table.slope)} >= "
              f"{fmt(floor)} (formula {fmt(result.formula.value)} - 0.15)")
    return CriterionResult(9, "dimension-probe", passed, detail,
                           time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# 10: determinism
# ---------------------------------------------------------------------------

def _cli_reports(outdir: Path) -> None:
    from .cli import run

    outdir = Path(outdir)
    x = "0.4142135623730950488016887242096980785696718753769"
    commands = [
        ["dim", "--tau", "1,0.5", "--output", str(outdir / "dim.json"),
         "--no-figures"],
        ["weights", "--tau", "0.8,0.3", "--d", "1", "--m", "1",
         "--output", str(outdir / "weights.json"), "--no-figures"],
        ["order", "--psi", "pow:2", "--psi", "alt:1,3", "--q-max", "4096",
         "--output", str(outdir / "order.csv"), "--no-figures"],
        ["dirichlet", "--manifold", "parabola", "--tau-dep", "0.5",
         "--x", x, "--ladder", "100,1000",
         "--output", str(outdir / "dirichlet.csv"), "--no-figures"],
        ["enumerate", "--manifold", "parabola", "--tau-dep", "0.5",
         "--q-max", "50", "--output", str(outdir / "family.csv"),
         "--no-figures"],
        ["coverage", "--manifold", "parabola", "--tau-dep", "0.5",
         "--windows", "10,100", "--grid-resolution", "4096",
         "--output", str(outdir / "coverage.csv"), "--no-figures"],
        ["boxcount", "--manifold", "parabola", "--tau", "0.8,0.3",
         "--q-ladder", "100", "--depth", "8",
         "--output", str(outdir / "boxcount.csv"), "--no-figures"],
    ]
    for argv in commands:
        code = run(argv)
        if code != 0:
            raise RuntimeError(f"report command failed ({code}): {argv}")


def _hash_tree(root: Path) -> dict[str, str]:
    digests = {}
    for path in sorted(Path(root).rglob("*")):
        if path.suffix in (".csv", ".json") and path.is_file():
            digests[str(path.relative_to(root))] = hashlib.sha256(
                path.read_bytes()
            ).hexdigest()
    return digests


def criterion_determinism(ctx: Context) -> CriterionResult:
    import contextlib
    import io

    t0 = time.perf_counter()
    base = Path(ctx.output_dir) / "determinism"
    digests = []
    for run_name in ("run-a", "run-b"):
        rdir = base / run_name
        rdir.mkdir(parents=True, exist_ok=True)
        sub = Context(output_dir=rdir, seed=ctx.seed, smoke=True,
                      workers=ctx.workers, quiet=True)
        with contextlib.redirect_stdout(io.StringIO()):
            for crit in _CRITERIA[:9]:
                crit(sub)
            _cli_reports(rdir / "cli")
        digests.append(_hash_tree(rdir))
    same_names = set(digests[0]) == set(digests[1])
    identical = same_names and all(digests[0][k] == digests[1][k] for k in digests[0])
    passed = identical and len(digests[0]) > 0
    write_csv(
        Path(ctx.output_dir) / "determinism.csv",
        ["files_compared", "identical"],
        [(len(digests[0]), identical)],
        _report_config(ctx, {"criterion": "determinism"}),
    )
    return CriterionResult(10, "determinism", passed,
                           f"{len(digests[0])} report files byte-compared "
                           f"across two runs of every suite (smoke budgets)",
                           time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# suite driver
# ---------------------------------------------------------------------------

_CRITERIA = [
    criterion_formula_collapse,
    criterion_weight_composition,
    criterion_transfer_algebra,
    criterion_dirichlet_existence,
    criterion_oracle_equivalence,
    criterion_worked_thresholds,
    criterion_boxcount_calibration,
    criterion_coverage_growth,
    criterion_dimension_probe,
    criterion_determinism,
]

SUITES = {
    "formulas": [1, 2, 3],
    "dirichlet": [4, 6],
    "enumeration": [5],
    "fractal": [7, 8, 9],
    "determinism": [10],
    "all": list(range(1, 11)),
}


def run_suites(suite: str, output_dir: str | Path = "verify-reports",
               seed: int = 1729, smoke: bool = False,
               workers: int = 1) -> list[CriterionResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; known: {sorted(SUITES)}")
    ctx = Context(output_dir=Path(output_dir), seed=seed, smoke=smoke,
                  workers=workers)
    ctx.output_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for cid in SUITES[suite]:
        result = _CRITERIA[cid - 1](ctx)
        results.append(result)
        if not ctx.quiet:
            print(result.line())
    return results
