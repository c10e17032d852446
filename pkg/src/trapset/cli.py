"""Command-line interface.

Subcommands: sample (spec -> graph file), census (graph -> count CSV or
instance dump), predict (spec -> expectation CSV), experiment (config ->
comparison report), oracle (graph -> enumerator-vs-brute-force diff).

Exit codes: 0 success, 1 comparison/oracle failure, 2 usage or config
error, 3 retry/enumeration budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import asymptotics as asy
from .ensemble import (
    EnsembleError,
    EnsembleSpec,
    SamplingBudgetError,
    TannerGraph,
    girth,
    realize_degree_sequence,
    sample_tanner_graph,
)
from .enumeration import (
    BruteForceScaleError,
    CycleBudgetError,
    EnumerationBudgetError,
    brute_force_census,
    census,
    iter_structure_instances,
)
from .harness import ExperimentConfig, ExperimentAborted, emit_report, predict_table, run_experiment
from .structures import CATEGORIES, classify, cycle_rank

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_spec(path: str) -> EnsembleSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return EnsembleSpec.from_json_dict(json.load(fh))


def _load_graph(path: str) -> TannerGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return TannerGraph.from_text(fh.read())


def _categories_arg(value: str) -> tuple[str, ...]:
    cats = tuple(c.strip().upper() for c in value.split(",") if c.strip())
    for c in cats:
        if c not in CATEGORIES:
            raise argparse.ArgumentTypeError(f"unknown category {c!r} (choose from {CATEGORIES})")
    return cats


def _cmd_sample(args) -> int:
    spec = _load_spec(args.spec)
    girth_min = args.girth if args.girth is not None else spec.girth_min
    seq = realize_degree_sequence(spec)
    graph = sample_tanner_graph(
        seq, seed=args.seed, girth_min=girth_min, max_retries=args.max_retries
    )
    _write_out(graph.to_text(), args.out)
    return EXIT_OK


def _cmd_census(args) -> int:
    graph = _load_graph(args.graph)
    if args.emit_instances:
        wanted = set(args.categories)
        lines = []
        for inst in iter_structure_instances(graph, "TS", args.a_max, args.b_max):
            cats = classify(inst, graph)
            if not wanted.intersection(cats.labels()):
                continue
            lines.append(
                json.dumps(
                    {
                        "S": list(inst.variables),
                        "a": inst.a,
                        "b": inst.b,
                        "categories": list(cats.labels()),
                        "cycle_rank": cycle_rank(inst).cycle_rank,
                    },
                    sort_keys=True,
                )
            )
        _write_out("\n".join(lines) + ("\n" if lines else ""), args.out)
        return EXIT_OK
    table = census(graph, args.categories, args.a_max, args.b_max, workers=args.workers)
    _write_out(table.to_csv(), args.out)
    return EXIT_OK


def _cmd_predict(args) -> int:
    spec = _load_spec(args.spec)
    table = predict_table(
        spec, args.categories, args.a_max, args.b_max, g=args.girth, tree_mode=args.mode
    )
    lines = ["category,a,b,estimate,lower_factor,formula_id"]
    for (cat, a, b), bound in sorted(table.items()):
        if bound is None:
            lines.append(f"{cat},{a},{b},,,unsupported")
        else:
            lines.append(f"{cat},{a},{b},{bound.estimate!r},{bound.lower_factor!r},{bound.formula}")
    _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if args.seed is not None:
        data["seed"] = args.seed
    if args.trials is not None:
        data["trials"] = args.trials
    if args.a_max is not None:
        data["a_max"] = args.a_max
    if args.b_max is not None:
        data["b_max"] = args.b_max
    if args.girth is not None:
        data["girth_min"] = args.girth
    config = ExperimentConfig.from_json_dict(data)
    report = run_experiment(config)
    if args.out:
        emit_report(report, args.format, args.out)
    else:
        _write_out(_report_text(report, args.format), None)
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _report_text(report, fmt: str) -> str:
    import os
    import tempfile

    fd, path = tempfile.mkstemp(suffix=".report")
    os.close(fd)
    try:
        return emit_report(report, fmt, path)
    finally:
        os.unlink(path)


def _cmd_oracle(args) -> int:
    graph = _load_graph(args.graph)
    reference = brute_force_census(graph, args.a_max, args.b_max)
    fast = census(graph, CATEGORIES, args.a_max, args.b_max)
    ref_counts = reference.nonzero()
    fast_counts = fast.nonzero()
    keys = sorted(set(ref_counts) | set(fast_counts))
    mismatches = [
        (k, ref_counts.get(k, 0), fast_counts.get(k, 0))
        for k in keys
        if ref_counts.get(k, 0) != fast_counts.get(k, 0)
    ]
    if mismatches:
        sys.stderr.write("oracle mismatch (category,a,b): brute-force vs enumerator\n")
        for key, ref, got in mismatches:
            sys.stderr.write(f"  {key}: {ref} vs {got}\n")
        return EXIT_FAILED
    sys.stdout.write(f"oracle ok: {len(keys)} table cells agree\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapset",
        description=(
            "Census and asymptotic prediction of trapping-set structures in "
            "random LDPC Tanner graphs. The census counts connected variable "
            "subsets only; a disconnected structure is a disjoint union of "
            "smaller connected ones."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a Tanner graph from an ensemble spec")
    p.add_argument("spec", help="ensemble spec JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--girth", type=int, default=None, help="minimum girth (even, >= 4)")
    p.add_argument("--max-retries", type=int, default=None)
    p.add_argument("--out", default=None, help="output graph file (default stdout)")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("census", help="count structures in a graph file")
    p.add_argument("graph", help="graph text file")
    p.add_argument("--categories", type=_categories_arg, default=CATEGORIES)
    p.add_argument("--a-max", type=int, default=5)
    p.add_argument("--b-max", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--emit-instances", action="store_true",
                   help="emit one JSON object per structure instead of counts")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("predict", help="closed-form expectations for a class grid")
    p.add_argument("spec", help="ensemble spec JSON file")
    p.add_argument("--categories", type=_categories_arg, default=CATEGORIES)
    p.add_argument("--a-max", type=int, default=5)
    p.add_argument("--b-max", type=int, default=10)
    p.add_argument("--girth", type=int, default=6, help="girth assumed by the tree-appendage sums")
    p.add_argument("--mode", choices=("exact_B", "catalan_upper"), default="exact_B")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("experiment", help="Monte Carlo comparison run from a config file")
    p.add_argument("config", help="experiment config JSON file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--a-max", type=int, default=None)
    p.add_argument("--b-max", type=int, default=None)
    p.add_argument("--girth", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("oracle", help="diff the enumerator against the brute-force census")
    p.add_argument("graph", help="graph text file")
    p.add_argument("--a-max", type=int, default=4)
    p.add_argument("--b-max", type=int, default=12)
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (SamplingBudgetError, EnumerationBudgetError, CycleBudgetError, ExperimentAborted) as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return EXIT_BUDGET
    except (EnsembleError, BruteForceScaleError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
