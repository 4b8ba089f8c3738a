"""Command-line interface: ``solve``, ``gen``, ``verify``, ``experiment``.

Exit codes: 0 success, 2 input error, 3 infeasible or over capacity,
4 internal defect. Failures print a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .errors import DefectError, InputError, TspApproxError
from .experiment import ExperimentConfig, results_csv, run_experiment, summarize
from .generate import FAMILIES, generate
from .instance import (
    TAU_METRIC,
    GeneralInstance,
    Instance,
    MetricInstance,
    instance_from_json,
    instance_to_json,
    validate_metric,
)
from .oracle import exact_tsp, problem_b_lower_bound
from .pipeline import solve_problem_a, solve_problem_b
from .tsplib import parse_tsplib, write_tsplib


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _guess_format(path: str, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "tsplib" if path.lower().endswith((".tsp", ".tsplib")) else "json"


def load_instance(path: str, fmt: str | None, exact_euclidean: bool = False,
                  validate: bool = True) -> Instance:
    text = _read_text(path)
    if _guess_format(path, fmt) == "tsplib":
        return parse_tsplib(text, exact_euclidean=exact_euclidean, validate=validate)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return instance_from_json(doc)


def _emit(doc, out: str | None = None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = load_instance(args.input, args.format, args.exact_euclidean, validate=not args.allow_nonmetric)
    if args.problem == "a":
        if not isinstance(inst, MetricInstance):
            raise InputError("problem a needs a complete weight matrix; use --problem b for edge lists")
        report = solve_problem_a(inst, allow_nonmetric=args.allow_nonmetric)
        if args.oracle:
            report.oracle_weight = exact_tsp(inst).weight
    else:
        g = inst if isinstance(inst, GeneralInstance) else GeneralInstance.from_metric(inst)
        report = solve_problem_b(g)
        if args.oracle:
            report.oracle_weight = problem_b_lower_bound(g)
    _emit(report.to_json(include_timings=args.timings), args.out)
    return 0


def cmd_gen(args) -> int:
    inst = generate(args.family, args.n, args.seed)
    if args.format == "tsplib":
        if not isinstance(inst, MetricInstance):
            raise InputError(f"family {args.family} produces an edge list; use --format json")
        text = write_tsplib(inst, name=f"{args.family}-{args.n}-{args.seed}")
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        else:
            sys.stdout.write(text)
    else:
        _emit(instance_to_json(inst), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = load_instance(args.input, args.format, args.exact_euclidean, validate=False)
    if not isinstance(inst, MetricInstance):
        raise InputError("verify needs a complete weight matrix")
    violations = validate_metric(inst.weights, args.tau)
    _emit({
        "n": inst.n,
        "metric": not violations,
        "count": len(violations),
        "violations": [list(v) for v in violations[: args.limit]],
    })
    return 0 if not violations else 2


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        n_min=args.n_min, n_max=args.n_max, trials=args.trials, seed=args.seed,
        family=args.family, oracle=args.oracle, timings=args.timings, jobs=args.jobs,
    )
    results = run_experiment(cfg)
    Path(args.out).write_text(results_csv(results, cfg.timings), encoding="utf-8", newline="\n")
    _emit(summarize(results))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tspapprox", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def input_flags(sp):
        sp.add_argument("--input", required=True, help="instance file, or - for stdin")
        sp.add_argument("--format", choices=("tsplib", "json"), help="default: from the file extension")
        sp.add_argument("--exact-euclidean", action="store_true", help="keep unrounded EUC_2D distances")

    s = sub.add_parser("solve", help="run the 3/2-approximation on one instance")
    input_flags(s)
    s.add_argument("--problem", choices=("a", "b"), default="a",
                   help="a: Hamiltonian cycle; b: covering closed walk")
    s.add_argument("--allow-nonmetric", action="store_true",
                   help="skip the triangle-inequality check (no guarantee)")
    s.add_argument("--oracle", action="store_true", help="also compute the exact optimum (n <= 16)")
    s.add_argument("--timings", action="store_true", help="include wall-clock stage timings")
    s.add_argument("--out", help="write the report here instead of stdout")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="generate a seeded instance")
    g.add_argument("--family", choices=FAMILIES, default="euclidean-unit-square")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=("json", "tsplib"), default="json")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check the triangle inequality")
    input_flags(v)
    v.add_argument("--tau", type=float, default=TAU_METRIC, help="relative tolerance")
    v.add_argument("--limit", type=int, default=100, help="violations listed at most")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="approximation ratios over a seeded corpus")
    e.add_argument("--n-min", type=int, required=True)
    e.add_argument("--n-max", type=int, required=True)
    e.add_argument("--trials", type=int, default=10)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--family", choices=FAMILIES, default="euclidean-unit-square")
    e.add_argument("--oracle", action="store_true", help="compute exact optima and ratios")
    e.add_argument("--timings", action="store_true", help="add stage timing columns")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out", required=True, help="CSV output path")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except TspApproxError as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - anything else is a bug
        err = DefectError(f"{type(exc).__name__}: {exc}")
        sys.stderr.write(json.dumps(err.to_dict()) + "\n")
        return err.exit_code


if __name__ == "__main__":
    sys.exit(main())
