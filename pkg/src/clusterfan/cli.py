"""Command-line entry point: ``clusterfan {enumerate,verify,variables,project,paper-suite}``.

Exit codes: 0 success, 1 I/O or environment problem, 2 a mathematical check failed.
Data goes to stdout (or ``--out``); progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Any

from .cluster import ExchangeGraph, default_jobs, enumerate_seeds
from .errors import TheoremViolation
from .export import fan_document, graph_document, label_record, variables_document
from .fan import coverage, quotient_project, verify_fan

log = logging.getLogger("clusterfan")

EXIT_OK, EXIT_IO, EXIT_VIOLATION = 0, 1, 2

# n >= 6 is infinite type; enumeration is always cut off
EXPLORATION_DEPTH = 6
EXPLORATION_SEEDS = 50000


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _size(text: str) -> int:
    value = int(text)
    if value < 3:
        raise argparse.ArgumentTypeError("n must be at least 3")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-seeds", type=_positive, default=None,
                        help=f"stop after this many seeds (default: none; {EXPLORATION_SEEDS} for n >= 6)")
    common.add_argument("--max-depth", type=_positive, default=None,
                        help=f"stop at this mutation depth (default: none; {EXPLORATION_DEPTH} for n >= 6)")
    common.add_argument("--jobs", type=_positive, default=None,
                        help="worker processes for enumeration (default: $CLUSTERFAN_JOBS or CPU count)")
    common.add_argument("--out", default=None, help="write the JSON document to this file")
    common.add_argument("--format", choices=("json", "text"), default="text", help="stdout format")
    common.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")

    sized = argparse.ArgumentParser(add_help=False)
    sized.add_argument("--n", type=_size, required=True, help="matrix size (n >= 3)")

    parser = argparse.ArgumentParser(prog="clusterfan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("enumerate", parents=[common, sized],
                   help="enumerate seeds by mutation and export the exchange graph")

    verify = sub.add_parser("verify", parents=[common, sized],
                            help="check unimodularity, the fan property and coverage")
    verify.add_argument("--pairwise", choices=("full", "sampled"), default="full")
    verify.add_argument("--pairs", type=_positive, default=20000, help="pairs to sample with --pairwise sampled")
    verify.add_argument("--samples", type=_positive, default=10000, help="random D-tight points for coverage")
    verify.add_argument("--rng-seed", type=int, default=0)

    variables = sub.add_parser("variables", parents=[common, sized], help="list all cluster variables")
    variables.add_argument("--polynomials", action="store_true", help="include expanded polynomials")

    sub.add_parser("project", parents=[common, sized],
                   help="project rays and cones to the quotient by the frozen arrays")

    suite = sub.add_parser("paper-suite", parents=[common], help="run the reproduction checks")
    suite.add_argument("--only", action="append", default=None, metavar="CHECK",
                       help="run only this check (repeatable or comma separated)")
    suite.add_argument("--pairwise", choices=("full", "sampled"), default="full")
    suite.add_argument("--samples", type=_positive, default=10000)
    suite.add_argument("--rng-seed", type=int, default=0)
    suite.add_argument("--list", action="store_true", help="list the available checks and exit")
    return parser


def _limits(args) -> tuple[int | None, int | None]:
    max_seeds, max_depth = args.max_seeds, args.max_depth
    if args.n >= 6:
        max_seeds = max_seeds or EXPLORATION_SEEDS
        max_depth = max_depth or EXPLORATION_DEPTH
    return max_seeds, max_depth


def _enumerate(args) -> ExchangeGraph:
    max_seeds, max_depth = _limits(args)
    jobs = args.jobs or default_jobs()
    t0 = time.monotonic()
    g = enumerate_seeds(args.n, max_seeds=max_seeds, max_depth=max_depth, jobs=jobs, progress=args.verbose)
    log.info("enumerated %d seeds in %.1fs", len(g.seeds), time.monotonic() - t0)
    return g


def _emit(args, document: dict[str, Any], text_lines: list[str]) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(document, fh, indent=1)
            fh.write("\n")
    if args.format == "json":
        json.dump(document, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            print(line)


def _stats_line(g: ExchangeGraph) -> str:
    s = g.stats()
    line = f"seeds={s['seeds']} mutable_vars={s['mutable_vars']}"
    if g.truncated:
        line += f" truncated=true max_depth_reached={g.max_depth_reached}"
    return line


def cmd_enumerate(args) -> int:
    g = _enumerate(args)
    lines = [_stats_line(g)]
    if g.certificate_failures:
        lines.append(f"certificate_failures={len(g.certificate_failures)}")
    _emit(args, graph_document(g), lines)
    return EXIT_VIOLATION if g.certificate_failures else EXIT_OK


def cmd_verify(args) -> int:
    g = _enumerate(args)
    rep = verify_fan(g, pairwise=args.pairwise, sample_pairs=args.pairs, rng_seed=args.rng_seed,
                     progress=args.verbose)
    cov = coverage(g, samples=args.samples, rng_seed=args.rng_seed)
    # a truncated enumeration cannot cover the cone, so coverage is informational there
    coverage_counts = not g.truncated
    ok = rep.ok and not g.certificate_failures and (cov.ok or not coverage_counts)
    doc = {
        "schema": "clusterfan.verify", "version": 1, "n": g.n,
        "enumeration": g.stats(), "fan": rep.to_json(), "coverage": cov.to_json(),
        "coverage_informational": not coverage_counts, "ok": ok,
    }
    lines = [
        _stats_line(g),
        f"unimodular: {rep.cones - len(rep.unimodular_failures)}/{rep.cones}",
        f"adjacent pairs: {rep.adjacency_checked} checked, {len(rep.adjacency_failures)} failures",
        f"face checks ({rep.pairwise_mode}): {rep.pairs_checked}/{rep.pairs_total} pairs, "
        f"{len(rep.face_failures)} failures ({rep.pairs_certified_by_column_sums} by column sums, "
        f"{rep.pairs_solved_by_lp} by LP) in {rep.elapsed:.1f}s",
        f"coverage: {cov.covered}/{cov.samples} covered, {cov.uncovered} uncovered, "
        f"{cov.double_interior} double-interior" + (" (informational)" if not coverage_counts else ""),
        "ok" if ok else "FAILED",
    ]
    for w in cov.uncovered_witnesses[:3] if not coverage_counts else ():
        lines.append(f"  uncovered point: {w}")
    _emit(args, doc, lines)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_variables(args) -> int:
    g = _enumerate(args)
    doc = variables_document(g, polynomials=args.polynomials)
    lines = [_stats_line(g)]
    for rec in doc["variables"]:
        kind = "frozen" if rec["frozen"] else "mutable"
        line = f"{rec['tableau']:<20} {kind:<7} degree={rec['degree']} terms={rec['terms']}"
        if args.polynomials:
            line += f"  {rec['polynomial']}"
        lines.append(line)
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_project(args) -> int:
    g = _enumerate(args)
    proj = quotient_project(g)
    doc = fan_document(g, projected=proj)
    lines = [_stats_line(g), "basis: " + ", ".join(label_record(a)["tableau"] for a in proj.basis)]
    for a, coords in sorted(proj.rays.items(), key=lambda kv: kv[1], reverse=True):
        lines.append(f"{label_record(a)['tableau']:<20} {coords}")
    dets = proj.cone_dets()
    lines.append(f"projected cones: {len(dets)}, determinants in {sorted(set(dets))}")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_paper_suite(args) -> int:
    from .reproduce import CHECKS, Workspace, run_checks

    if args.list:
        for name, (description, _) in CHECKS.items():
            print(f"{name:<16} {description}")
        return EXIT_OK
    only = None
    if args.only:
        only = [part for item in args.only for part in item.split(",") if part]
    ws = Workspace(pairwise=args.pairwise, samples=args.samples, rng_seed=args.rng_seed,
                   jobs=args.jobs or default_jobs(),
                   explore_depth=args.max_depth or EXPLORATION_DEPTH,
                   explore_max_seeds=args.max_seeds or EXPLORATION_SEEDS)
    try:
        results = run_checks(ws, only)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_IO
    passed = sum(r.ok for r in results)
    doc = {"schema": "clusterfan.paper-suite", "version": 1, "passed": passed, "total": len(results),
           "checks": [r.to_json() for r in results]}
    width = max(len(r.id) for r in results)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'}  {r.id:<{width}}  expected: {r.expected}")
        lines.append(f"      {'':<{width}}  computed: {r.computed}  ({r.elapsed:.1f}s)")
    lines.append(f"{passed}/{len(results)} checks reproduced")
    _emit(args, doc, lines)
    return EXIT_OK if passed == len(results) else EXIT_VIOLATION


COMMANDS = {
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "variables": cmd_variables,
    "project": cmd_project,
    "paper-suite": cmd_paper_suite,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except TheoremViolation as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
