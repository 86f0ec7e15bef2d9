"""Command-line front end.

Subcommands: dim, weights, order, dirichlet, enumerate, coverage, boxcount,
verify.  Exit codes: 0 success, 1 hypothesis violation (or failed verify
criterion), 2 configuration/IO/parse error, 3 enumeration cap exceeded,
4 existence-guarantee diagnostic.

Reports are CSV or JSON with a provenance header (config hash + version, no
timestamps); unless --no-figures is given, a matplotlib rendering is written
next to each report with the same stem.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .config import BENCHMARKS, resolve_manifold
from .core import WeightVector, as_fraction
from .dirichlet import compute_Q0, infinitude_sweep, manifold_constants, solve_dirichlet
from .enumeration import DEFAULT_CANDIDATE_CAP, enumerate_points
from .errors import (
    CapExceededError,
    ConfigError,
    HypothesisError,
    TheoremViolationError,
)
from .formulas import (
    blvv_simultaneous,
    estimate_upper_order,
    jarnik_besicovitch,
    manifold_lower_bound,
    planar_curve_dimension,
    proof_weight_vector_manifold,
    proof_weight_vector_rynne,
    rynne_dimension,
    wwx_rectangle_bound,
)
from .fractal import BOX_DIMENSION_CAVEAT, coverage_sweep, dimension_experiment
from .reports import fmt, write_csv, write_json


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"expected a comma-separated number list", field=flag) from None
    if not values:
        raise ConfigError("empty list", field=flag)
    return values


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"expected a comma-separated integer list", field=flag) from None


def _parse_exact(text: str, flag: str) -> tuple:
    try:
        return tuple(as_fraction(part.strip()) for part in text.split(","))
    except Exception:
        raise ConfigError("expected comma-separated rational numbers", field=flag) from None


def _psi_from_spec(spec: str, flag: str = "--psi"):
    kind, _, rest = spec.partition(":")
    try:
        params = tuple(float(p) for p in rest.split(",")) if rest else ()
    except ValueError:
        raise ConfigError(f"bad psi parameters in {spec!r}", field=flag) from None
    if kind == "pow" and len(params) == 1:
        e = params[0]
        return lambda q: q ** -e
    if kind == "powlog" and len(params) == 2:
        e, g = params
        return lambda q: q ** -e * math.log(q) ** g
    if kind == "alt" and len(params) == 2:
        even, odd = params
        return lambda q: q ** -(even if q % 2 == 0 else odd)
    raise ConfigError(
        f"bad psi spec {spec!r}; use pow:E, powlog:E,G or alt:E_even,E_odd",
        field=flag,
    )


def _print(line: str = ""):
    sys.stdout.write(line + "\n")


def _figures_enabled(args) -> bool:
    return bool(args.output) and not args.no_figures


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_dim(args) -> int:
    results: dict[str, dict] = {}

    def attempt(formula_id, thunk):
        try:
            r = thunk()
            results[formula_id] = {"value": r.value, "argmin_j": r.argmin_j}
        except HypothesisError as exc:
            results[formula_id] = {"violations": list(exc.violations)}

    if args.a:
        a = _parse_floats(args.a, "--a")
        attempt("wwx-rectangle", lambda: wwx_rectangle_bound(a))
        config = {"command": "dim", "a": args.a}
    else:
        if not args.tau:
            raise ConfigError("dim needs --tau or --a")
        tau = _parse_floats(args.tau, "--tau")
        n = len(tau)
        d, m = args.d, args.m
        if args.manifold:
            M = resolve_manifold(args.manifold)
            if d is not None and d != M.d or m is not None and m != M.m:
                raise ConfigError(
                    f"--d/--m disagree with manifold (d={M.d}, m={M.m})"
                )
            d, m = M.d, M.m
        config = {"command": "dim", "tau": args.tau, "d": d, "m": m,
                  "manifold": args.manifold or ""}
        equal = all(t == tau[0] for t in tau)
        if d is None and m is None:
            if args.n is not None and args.n != n:
                raise ConfigError(f"--n {args.n} disagrees with {n} weights")
            attempt("rynne", lambda: rynne_dimension(tau))
            if equal:
                attempt("jarnik-besicovitch", lambda: jarnik_besicovitch(n, tau[0]))
        else:
            if d is None or m is None:
                raise ConfigError("give both --d and --m (or --manifold)")
            if d + m != n:
                raise ConfigError(f"d + m = {d + m} but {n} weights given")
            attempt("manifold-lower-bound", lambda: manifold_lower_bound(tau, d, m))
            if n == 2 and d == 1 and m == 1:
                attempt("planar-curve", lambda: planar_curve_dimension(tau[0], tau[1]))
            if equal:
                attempt("blvv-simultaneous", lambda: blvv_simultaneous(n, m, tau[0]))

    width = max(len(k) for k in results)
    any_value = False
    for formula_id, payload in results.items():
        if "value" in payload:
            any_value = True
            _print(f"{formula_id:<{width}}  value={fmt(payload['value'])}  "
                   f"argmin_j={payload['argmin_j']}")
        else:
            _print(f"{formula_id:<{width}}  inapplicable: "
                   + ", ".join(payload["violations"]))
    if args.output:
        write_json(args.output, {"results": results}, config)
    if not any_value:
        sys.stderr.write("no applicable formula for these inputs\n")
        return 1
    return 0


def cmd_weights(args) -> int:
    tau = _parse_floats(args.tau, "--tau")
    payload = {}
    if args.d is not None or args.m is not None or args.manifold:
        d, m = args.d, args.m
        if args.manifold:
            M = resolve_manifold(args.manifold)
            d, m = M.d, M.m
        if d is None or m is None:
            raise ConfigError("give both --d and --m (or --manifold)")
        a = proof_weight_vector_manifold(tau, d, m)
        payload["manifold-transfer"] = list(a.entries)
        _print("manifold-transfer  a=(" + ", ".join(fmt(v) for v in a.entries) + ")")
        config = {"command": "weights", "tau": args.tau, "d": d, "m": m}
    else:
        a = proof_weight_vector_rynne(tau)
        payload["rynne-transfer"] = list(a.entries)
        _print("rynne-transfer     a=(" + ", ".join(fmt(v) for v in a.entries) + ")")
        config = {"command": "weights", "tau": args.tau, "n": len(tau)}
    if args.output:
        write_json(args.output, payload, config)
    return 0


def cmd_order(args) -> int:
    funcs = [_psi_from_spec(s) for s in args.psi]
    try:
        est = estimate_upper_order(funcs, args.q_max, rungs=args.rungs)
    except ValueError as exc:
        raise HypothesisError(["psi-positive"], str(exc)) from exc
    _print("upper-order v = (" + ", ".join(fmt(v) for v in est.v) + ")")
    _print(f"window q in [{est.window[0]}, {est.window[1]}], "
           f"{len(est.samples)} samples")
    config = {"command": "order", "psi": ";".join(args.psi),
              "q_max": args.q_max, "rungs": args.rungs}
    if args.output:
        header = ["q"] + [f"s{i + 1}" for i in range(len(est.v))]
        rows = [(q,) + vals for q, vals in est.samples]
        write_csv(args.output, header, rows, config,
                  extra_comments=["upper-order: "
                                  + ", ".join(fmt(v) for v in est.v)])
        if _figures_enabled(args):
            from .figures import figure_order

            figure_order(est, args.output)
    return 0


def cmd_dirichlet(args) -> int:
    M = resolve_manifold(args.manifold)
    tau_dep = _parse_floats(args.tau_dep, "--tau-dep")
    x = _parse_exact(args.x, "--x")
    constants = manifold_constants(M)
    _print(f"constants: C={fmt(constants.C)} D={fmt(constants.D)} "
           f"method={constants.method}")
    Q0 = compute_Q0(M, tau_dep, x, r_override=args.r_override)
    _print(f"Q0 = {Q0}")
    config = {"command": "dirichlet", "manifold": args.manifold,
              "tau_dep": args.tau_dep, "x": args.x,
              "Q": args.Q or "", "ladder": args.ladder or "",
              "r_override": args.r_override or ""}

    failure: TheoremViolationError | None = None
    if args.ladder:
        ladder = _parse_ints(args.ladder, "--ladder")
        try:
            sols = infinitude_sweep(M, tau_dep, x, ladder)
        except TheoremViolationError as exc:
            failure = exc
            sols = list(exc.solutions or [])
    else:
        Q = args.Q if args.Q is not None else Q0
        if Q < Q0:
            _print(f"note: budget {Q} is below Q0={Q0}; existence not guaranteed")
        sols = [solve_dirichlet(M, tau_dep, x, Q)]

    for sol in sols:
        _print(f"Q={sol.Q} q={sol.point.q} p=({', '.join(str(v) for v in sol.point.p)}) "
               f"max_ind_err={fmt(max(sol.independent_errors))} "
               f"max_dep_err={fmt(max(sol.dependent_errors))}")
    if args.output and sols:
        n = M.n
        header = ["Q", "q"] + [f"p{i + 1}" for i in range(n)] + [
            "max_independent_error", "max_dependent_error"]
        rows = [
            (sol.Q, sol.point.q) + sol.point.p
            + (max(sol.independent_errors), max(sol.dependent_errors))
            for sol in sols
        ]
        write_csv(args.output, header, rows, config,
                  extra_comments=[f"Q0: {Q0}"])
        if _figures_enabled(args) and len(sols) > 1:
            from .figures import figure_sweep

            figure_sweep(sols, args.output)
    if failure is not None:
        sys.stderr.write(f"theorem-violation: {failure}\n")
        return 4
    return 0


def cmd_enumerate(args) -> int:
    M = resolve_manifold(args.manifold)
    tau_dep = _parse_floats(args.tau_dep, "--tau-dep")
    family = enumerate_points(M, tau_dep, args.q_min, args.q_max,
                              cap=args.cap, workers=args.threads)
    _print(f"members={len(family)} window=[{family.Q_min}, {family.Q_max}]")
    config = {"command": "enumerate", "manifold": args.manifold,
              "tau_dep": args.tau_dep, "q_min": args.q_min,
              "q_max": args.q_max, "cap": args.cap}
    header = ["q"] + [f"p{i + 1}" for i in range(family.n)]
    write_csv(args.output, header, family.member_array.tolist(), config)
    if _figures_enabled(args):
        from .figures import figure_family_counts

        figure_family_counts(family.counts_by_q, args.output)
    return 0


def cmd_coverage(args) -> int:
    M = resolve_manifold(args.manifold)
    tau_dep = _parse_floats(args.tau_dep, "--tau-dep")
    windows = _parse_ints(args.windows, "--windows")
    reports = coverage_sweep(M, tau_dep, windows, args.grid_resolution,
                             k=args.k, cap=args.cap, workers=args.threads)
    for rep in reports:
        _print(f"q_max={rep.window[1]} fraction={fmt(rep.fraction)}")
    config = {"command": "coverage", "manifold": args.manifold,
              "tau_dep": args.tau_dep, "windows": args.windows,
              "grid_resolution": args.grid_resolution, "k": args.k}
    if args.output:
        rows = [(rep.window[1], rep.fraction) for rep in reports]
        write_csv(args.output, ["q_max", "fraction"], rows, config)
        if _figures_enabled(args):
            from .figures import figure_coverage

            figure_coverage(reports, args.output)
    return 0


def cmd_boxcount(args) -> int:
    M = resolve_manifold(args.manifold)
    tau = WeightVector(_parse_floats(args.tau, "--tau"), M.d)
    ladder = _parse_ints(args.q_ladder, "--q-ladder")
    result = dimension_experiment(M, tau, ladder, args.depth, k=args.k,
                                  cap=args.cap, workers=args.threads)
    _print(f"formula value={fmt(result.formula.value)} "
           f"argmin_j={result.formula.argmin_j}")
    for Q, table in result.tables:
        _print(f"Q={Q} slope={fmt(table.slope)} residual={fmt(table.residual)} "
               f"fitted_depths={'/'.join(str(k) for k in table.fitted_depths)}")
    _print(f"caveat: {result.caveat}")
    config = {"command": "boxcount", "manifold": args.manifold,
              "tau": args.tau, "q_ladder": args.q_ladder,
              "depth": args.depth, "k": args.k if args.k is not None else ""}
    if args.output:
        stem = Path(args.output)
        for Q, table in result.tables:
            path = stem.with_name(f"{stem.stem}_q{Q}{stem.suffix or '.csv'}")
            write_csv(
                path, ["depth", "delta", "count"],
                table.rows, {**config, "Q": Q},
                extra_comments=[
                    f"slope: {fmt(table.slope)}",
                    f"residual: {fmt(table.residual)}",
                    f"fitted-depths: {'/'.join(str(k) for k in table.fitted_depths)}",
                    f"formula-value: {fmt(result.formula.value)}",
                    f"caveat: {result.caveat}",
                ],
            )
        if _figures_enabled(args):
            from .figures import figure_boxcount

            figure_boxcount(result.tables, stem, result.formula.value)
    return 0


def cmd_verify(args) -> int:
    from .acceptance import run_suites

    results = run_suites(args.suite, output_dir=args.output_dir,
                         seed=args.seed, smoke=args.smoke,
                         workers=args.threads)
    failed = [r for r in results if not r.passed]
    return 0 if not failed else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manidim",
        description=(
            "dimension formulas, Dirichlet-style solving, rational point "
            "enumeration and fractal probes on polynomial graph charts"
        ),
    )
    parser.add_argument("--version", action="version",
                        version=f"manidim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, threads=False, cap=False, output_required=False):
        p.add_argument("--output", required=output_required,
                       help="report file (CSV/JSON per subcommand)")
        p.add_argument("--no-figures", action="store_true",
                       help="do not render a figure next to the report")
        if threads:
            p.add_argument("--threads", type=int, default=1,
                           help="worker cap for the compute modules")
        if cap:
            p.add_argument("--cap", type=int, default=DEFAULT_CANDIDATE_CAP,
                           help="candidate-count safety cap")

    p = sub.add_parser("dim", help="evaluate all applicable dimension formulas")
    p.add_argument("--tau", help="comma-separated approximation exponents")
    p.add_argument("--a", help="comma-separated dilation exponents (rectangle bound)")
    p.add_argument("--n", type=int, help="ambient dimension (manifold-free case)")
    p.add_argument("--d", type=int, help="independent dimension")
    p.add_argument("--m", type=int, help="codimension")
    p.add_argument("--manifold", help=f"benchmark name ({', '.join(BENCHMARKS)}) or config path")
    common(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("weights", help="print transfer weight vectors")
    p.add_argument("--tau", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--manifold")
    common(p)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("order", help="estimate upper orders of approximation functions")
    p.add_argument("--psi", action="append", required=True,
                   help="per-axis spec: pow:E, powlog:E,G or alt:E_even,E_odd")
    p.add_argument("--q-max", type=int, default=10 ** 6)
    p.add_argument("--rungs", type=int, default=64)
    common(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("dirichlet", help="threshold, solve and sweep budgets")
    p.add_argument("--manifold", required=True)
    p.add_argument("--tau-dep", required=True, help="dependent exponents")
    p.add_argument("--x", required=True, help="target point (exact rationals)")
    p.add_argument("--Q", type=int, help="single budget (default: Q0)")
    p.add_argument("--ladder", help="comma-separated increasing budgets")
    p.add_argument("--r-override", type=float,
                   help="replace the boundary distance in the threshold")
    common(p)
    p.set_defaults(func=cmd_dirichlet)

    p = sub.add_parser("enumerate", help="export the rational point family")
    p.add_argument("--manifold", required=True)
    p.add_argument("--tau-dep", required=True)
    p.add_argument("--q-min", type=int, default=1)
    p.add_argument("--q-max", type=int, required=True)
    common(p, threads=True, cap=True, output_required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("coverage", help="coverage fractions over denominator windows")
    p.add_argument("--manifold", required=True)
    p.add_argument("--tau-dep", required=True)
    p.add_argument("--windows", required=True, help="increasing q windows")
    p.add_argument("--grid-resolution", type=int, default=2 ** 16)
    p.add_argument("--k", type=float, default=1.0, help="ball dilation constant")
    common(p, threads=True, cap=True)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("boxcount", help="box-count the rectangle family per budget")
    p.add_argument("--manifold", required=True)
    p.add_argument("--tau", required=True, help="full weight vector (independent first)")
    p.add_argument("--q-ladder", required=True)
    p.add_argument("--depth", type=int, default=14)
    p.add_argument("--k", type=float, help="rectangle dilation constant "
                   "(default: certified containment constant)")
    common(p, threads=True, cap=True)
    p.set_defaults(func=cmd_boxcount)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--suite", default="all",
                   choices=["all", "formulas", "dirichlet", "enumeration",
                            "fractal", "determinism"])
    p.add_argument("--output-dir", default="verify-reports")
    p.add_argument("--seed", type=int, default=1729)
    p.add_argument("--smoke", action="store_true",
                   help="reduced budgets (used by the determinism criterion)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def main(argv=None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except HypothesisError as exc:
        sys.stderr.write(f"hypothesis-violation: {exc}\n")
        return 1
    except ConfigError as exc:
        sys.stderr.write(f"config-error: {exc}\n")
        return 2
    except CapExceededError as exc:
        sys.stderr.write(f"cap-exceeded: {exc}\n")
        return 3
    except TheoremViolationError as exc:
        sys.stderr.write(f"theorem-violation: {exc}\n")
        return 4
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
