"""Command line interface.

Every subcommand prints one deterministic JSON report (or CSV, where a table
is the natural shape) on stdout and exits 0. Validation and parse problems
print a machine-readable {"error": {"code", "message"}} object on stderr and
exit 1. The law-suite commands exit 2 when any checked law fails at its
tolerance, so shell scripts can tell "input was bad" from "mathematics broke".
"""

from __future__ import annotations

import argparse
import sys

from .algebras import ConvexAlgebra, check_algebra_laws, check_metric_compat, convex_axioms
from .approx import convergence_study, rationalize, sample_empirical, truncate_to_ball
from .errors import KantorovichError
from .fileio import dump_canonical, load_indices, load_measure, load_space, measure_to_json, sha256_file
from .laws import run_law_suite
from .power import MultiSet, PointTuple, multiset_distance, tuple_distance
from .samplers import RNG_ALGORITHM
from .tolerances import TAU_METRIC, TAU_SOLVER
from .transport import validate_coupling, wasserstein1


def _emit(report: dict, out_format: str, csv_rows=None) -> int:
    if out_format == "csv" and csv_rows is not None:
        sys.stdout.write(csv_rows)
    else:
        sys.stdout.write(dump_canonical(report))
    return 0


def _fail(exc: KantorovichError) -> int:
    sys.stderr.write(dump_canonical({"error": {"code": exc.code, "message": exc.message}}))
    return 1


class _Parser(argparse.ArgumentParser):
    """Invocation errors follow the same contract as every other
    validation failure: error JSON on stderr, exit status 1.  Exit
    status 2 stays reserved for law-suite failures."""

    def error(self, message: str) -> None:  # noqa: D401 (argparse hook)
        sys.stderr.write(dump_canonical(
            {"error": {"code": "cli.arguments",
                       "message": f"{self.prog}: {message}"}}))
        raise SystemExit(1)


def _transport_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--space", required=True, help="space file (.json or .csv)")
    sub.add_argument("--p", required=True, help="first measure (.json)")
    sub.add_argument("--q", required=True, help="second measure (.json)")
    sub.add_argument("--solver", default="auto",
                     choices=["auto", "assignment", "flow", "brute"])
    sub.add_argument("--tolerance", type=float, default=TAU_SOLVER)
    sub.add_argument("--out", default="json", choices=["json", "csv"])


def _load_transport_inputs(args):
    space = load_space(args.space, tau_metric=TAU_METRIC)
    p = load_measure(args.p, space)
    q = load_measure(args.q, space)
    digests = {"space": sha256_file(args.space),
               "p": sha256_file(args.p),
               "q": sha256_file(args.q)}
    return space, p, q, digests


def _transport_report(args, result, digests) -> dict:
    return {
        "command": args.command,
        "cost": result.cost,
        "gap": result.gap,
        "solver": result.solver,
        "tolerance": args.tolerance,
        "inputs": digests,
    }


def _cmd_dist(args) -> int:
    _, p, q, digests = _load_transport_inputs(args)
    result = wasserstein1(p, q, solver=args.solver)
    return _emit(_transport_report(args, result, digests), args.out)


def _cmd_coupling(args) -> int:
    _, p, q, digests = _load_transport_inputs(args)
    result = wasserstein1(p, q, solver=args.solver)
    report = _transport_report(args, result, digests)
    coupling = result.coupling
    report["coupling"] = {
        "rows": list(coupling.p.support),
        "cols": list(coupling.q.support),
        "matrix": [[float(v) for v in row] for row in coupling.matrix],
    }
    report["coupling_violations"] = validate_coupling(coupling, args.tolerance)
    if args.out == "csv":
        lines = ["row,col,mass"]
        for i, x in enumerate(coupling.p.support):
            for j, y in enumerate(coupling.q.support):
                mass = float(coupling.matrix[i, j])
                if mass > 0.0:
                    lines.append(f"{x},{y},{mass!r}")
        return _emit(report, "csv", "\n".join(lines) + "\n")
    return _emit(report, args.out)


def _cmd_dual(args) -> int:
    _, p, q, digests = _load_transport_inputs(args)
    result = wasserstein1(p, q, solver=args.solver)
    report = _transport_report(args, result, digests)
    dual = result.dual
    report["potential"] = {"points": list(dual.points),
                           "values": [float(v) for v in dual.values]}
    report["dual_value"] = result.cost - result.gap
    return _emit(report, args.out)


def _cmd_power_dist(args) -> int:
    space = load_space(args.space, tau_metric=TAU_METRIC)
    left = load_indices(args.a)
    right = load_indices(args.b)
    digests = {"space": sha256_file(args.space),
               "a": sha256_file(args.a),
               "b": sha256_file(args.b)}
    if args.kind == "tuple":
        value = tuple_distance(PointTuple(space, left), PointTuple(space, right))
        solver = "direct"
    else:
        value = multiset_distance(MultiSet(space, left), MultiSet(space, right))
        solver = "assignment"
    report = {
        "command": "power-dist",
        "kind": args.kind,
        "distance": value,
        "length": len(left),
        "solver": solver,
        "tolerance": args.tolerance,
        "inputs": digests,
    }
    return _emit(report, args.out)


def _law_report(command: str, results, extra: dict, out_format: str) -> tuple[dict, str | None]:
    rows = [r.to_json() for r in results]
    report = {"command": command, "all_pass": all(r.passed for r in results),
              "results": rows, **extra}
    csv_text = None
    if out_format == "csv":
        lines = ["law,trials,worst_discrepancy,tolerance,pass"]
        for r in rows:
            lines.append(f"{r['law']},{r['trials']},{r['worst_discrepancy']!r},"
                         f"{r['tolerance']!r},{str(r['pass']).lower()}")
        csv_text = "\n".join(lines) + "\n"
    return report, csv_text


def _cmd_laws(args) -> int:
    results = run_law_suite(trials=args.trials, seed=args.seed,
                            max_points=args.max_points, max_support=args.max_support)
    extra = {"trials": args.trials, "seed": args.seed, "rng": RNG_ALGORITHM}
    report, csv_text = _law_report("laws", results, extra, args.out)
    code = _emit(report, args.out, csv_text)
    return code if report["all_pass"] else 2


def _cmd_algebra_check(args) -> int:
    algebra = ConvexAlgebra(args.dim, args.norm)
    laws = check_algebra_laws(algebra, trials=args.trials, seed=args.seed)
    axioms = convex_axioms(algebra, trials=args.trials, seed=args.seed,
                           weight_on_first=not args.weight_on_second)
    compat = check_metric_compat(algebra, trials=args.trials, seed=args.seed)
    worst = {**laws, **axioms, **compat}
    all_pass = all(v <= args.tolerance for v in worst.values())
    report = {
        "command": "algebra-check",
        "carrier": {"dim": args.dim, "norm": args.norm},
        "weight_on_first": not args.weight_on_second,
        "trials": args.trials,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "tolerance": args.tolerance,
        "worst": worst,
        "all_pass": all_pass,
    }
    csv_text = None
    if args.out == "csv":
        lines = ["check,worst_discrepancy"]
        for name in sorted(worst):
            lines.append(f"{name},{worst[name]!r}")
        csv_text = "\n".join(lines) + "\n"
    code = _emit(report, args.out, csv_text)
    return code if all_pass else 2


def _cmd_approx(args) -> int:
    space = load_space(args.space, tau_metric=TAU_METRIC)
    p = load_measure(args.p, space)
    digests = {"space": sha256_file(args.space), "p": sha256_file(args.p)}
    base = {"command": "approx", "mode": args.mode, "inputs": digests,
            "tolerance": args.tolerance}
    if args.mode == "rationalize":
        if args.epsilon is None:
            raise KantorovichError("cli.arguments", "--epsilon is required for rationalize")
        report_obj = rationalize(p, args.epsilon)
    elif args.mode == "truncate":
        if args.center is None or args.radius is None:
            raise KantorovichError("cli.arguments",
                                   "--center and --radius are required for truncate")
        report_obj = truncate_to_ball(p, args.center, args.radius)
    else:
        sizes = [int(s) for s in args.sizes.split(",") if s]
        rows = convergence_study(p, sizes, trials=args.trials, seed=args.seed)
        report = {**base, "rows": rows, "trials": args.trials, "seed": args.seed,
                  "rng": RNG_ALGORITHM}
        csv_text = None
        if args.out == "csv":
            lines = ["n,median_w1,trials"]
            for row in rows:
                lines.append(f"{row['n']},{row['median_w1']!r},{row['trials']}")
            csv_text = "\n".join(lines) + "\n"
        return _emit(report, args.out, csv_text)
    report = {
        **base,
        "w1_error": report_obj.w1_error,
        "bound": report_obj.bound,
        "within_bound": report_obj.w1_error <= report_obj.bound + args.tolerance,
        "params": report_obj.params,
        "approximant": measure_to_json(report_obj.approximant),
    }
    return _emit(report, args.out)


def _cmd_sample(args) -> int:
    space = load_space(args.space, tau_metric=TAU_METRIC)
    p = load_measure(args.p, space)
    digests = {"space": sha256_file(args.space), "p": sha256_file(args.p)}
    drawn = sample_empirical(p, args.size, seed=args.seed)
    report = {
        "command": "sample",
        "size": args.size,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "entries": list(drawn.entries),
        "inputs": digests,
    }
    csv_text = None
    if args.out == "csv":
        lines = ["index"] + [str(v) for v in drawn.entries]
        csv_text = "\n".join(lines) + "\n"
    return _emit(report, args.out, csv_text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="kantorovich",
        description="Exact optimal transport on finite spaces: distances, "
                    "couplings, dual certificates, and executable law suites.")
    subs = parser.add_subparsers(dest="command", required=True)

    for name, helptext in [("dist", "W1 distance between two measures"),
                           ("coupling", "optimal coupling matrix"),
                           ("dual", "optimal dual potential and certified gap")]:
        sub = subs.add_parser(name, help=helptext)
        _transport_args(sub)

    power = subs.add_parser("power-dist", help="distance between tuples or multisets")
    power.add_argument("--space", required=True)
    power.add_argument("--a", required=True, help="first index array (.json)")
    power.add_argument("--b", required=True, help="second index array (.json)")
    power.add_argument("--kind", default="tuple", choices=["tuple", "multiset"])
    power.add_argument("--tolerance", type=float, default=TAU_SOLVER)
    power.add_argument("--out", default="json", choices=["json", "csv"])

    laws = subs.add_parser("laws", help="run the randomized law suite")
    laws.add_argument("--trials", type=int, default=100)
    laws.add_argument("--seed", type=int, default=0)
    laws.add_argument("--max-points", type=int, default=6)
    laws.add_argument("--max-support", type=int, default=4)
    laws.add_argument("--out", default="json", choices=["json", "csv"])

    algebra = subs.add_parser("algebra-check", help="check convex-algebra laws on R^d")
    algebra.add_argument("--dim", type=int, default=3)
    algebra.add_argument("--norm", default="l2", choices=["l1", "l2", "linf"])
    algebra.add_argument("--trials", type=int, default=100)
    algebra.add_argument("--seed", type=int, default=0)
    algebra.add_argument("--tolerance", type=float, default=1e-10)
    algebra.add_argument("--weight-on-second", action="store_true",
                         help="flip the binary-operation convention so the "
                              "weight multiplies the second argument")
    algebra.add_argument("--out", default="json", choices=["json", "csv"])

    approx = subs.add_parser("approx", help="approximate a measure and certify the error")
    approx.add_argument("--space", required=True)
    approx.add_argument("--p", required=True)
    approx.add_argument("--mode", required=True, choices=["rationalize", "truncate", "study"])
    approx.add_argument("--epsilon", type=float, default=None)
    approx.add_argument("--center", type=int, default=None)
    approx.add_argument("--radius", type=float, default=None)
    approx.add_argument("--sizes", default="8,16,32,64,128")
    approx.add_argument("--trials", type=int, default=50)
    approx.add_argument("--seed", type=int, default=0)
    approx.add_argument("--tolerance", type=float, default=TAU_SOLVER)
    approx.add_argument("--out", default="json", choices=["json", "csv"])

    sample = subs.add_parser("sample", help="draw an empirical multiset from a measure")
    sample.add_argument("--space", required=True)
    sample.add_argument("--p", required=True)
    sample.add_argument("--size", type=int, required=True)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--out", default="json", choices=["json", "csv"])

    return parser


_HANDLERS = {
    "dist": _cmd_dist,
    "coupling": _cmd_coupling,
    "dual": _cmd_dual,
    "power-dist": _cmd_power_dist,
    "laws": _cmd_laws,
    "algebra-check": _cmd_algebra_check,
    "approx": _cmd_approx,
    "sample": _cmd_sample,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except KantorovichError as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())
