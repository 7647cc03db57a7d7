"""Command-line front end: ``topogs analyze|verify|homology|enumerate-scf|arrangement``.

Exit codes: 0 when everything passes, 1 when a suite fails, 2 on usage or
validation errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from topogs import _backend
from topogs.arrangement import arrangement_survey
from topogs.choice import ChoiceError, SocialChoiceFunction, dictator_of, load_table, save_table
from topogs.complexes import ComplexError
from topogs.enumeration import BudgetExceeded, enumerate_monotonic_unanimous
from topogs.homology import HomologyError
from topogs.pipeline import PipelineError, analyze, nerve_NA, nerve_NP, nerve_NProfiles
from topogs.report import (
    MAX_COLORINGS,
    MAX_PROFILES,
    SUITES,
    EnvelopeError,
    ReportDocument,
    SuiteConfig,
    check_envelope,
    homology_document,
    profile_count,
    run_verify,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _suites(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in SUITES and s != "all"]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown suite(s) {bad}; choose from {', '.join(SUITES)}")
    return SUITES if "all" in names else names


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topogs", description=__doc__.splitlines()[0])
    p.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto",
                   help="kernel backend (default: compiled when available)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_required=True):
        sp.add_argument("-n", type=int, required=n_required, help="number of alternatives")
        sp.add_argument("-N", type=int, default=1, help="number of voters")
        sp.add_argument("--out", metavar="PATH", help="write the JSON report here")
        return sp

    # with --table, n and N come from the file
    a = common(sub.add_parser("analyze", help="check axioms and run the homology pipeline"),
               n_required=False)
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--rule", metavar="NAME[:ARG]",
                     help="dictatorship:L, constant:A, plurality_lex, borda_lex")
    src.add_argument("--table", metavar="PATH", help="JSON table file")
    a.add_argument("--exhaustive-validation", action="store_true",
                   help="check every face of the profile nerve, not only the probes")

    v = common(sub.add_parser("verify", help="run verification suites"))
    v.add_argument("--suite", type=_suites, default=SUITES, help="comma-separated, or 'all'")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=1000,
                   help="random tables for the equivalence suite")
    v.add_argument("--max-nodes", type=int, default=50_000_000)
    v.add_argument("--exhaustive-validation", action="store_true")

    h = common(sub.add_parser("homology", help="integral homology of a nerve"))
    h.add_argument("--target", choices=("NA", "NP", "NProfiles"), required=True)
    h.add_argument("-k", type=int, action="append", help="degree (repeatable; default all)")
    h.add_argument("--dump-complex", metavar="PATH")

    e = common(sub.add_parser("enumerate-scf", help="all monotonic unanimous tables"))
    e.add_argument("--max-nodes", type=int, default=50_000_000)
    e.add_argument("--tables-dir", metavar="DIR", help="also write each table as JSON")

    common(sub.add_parser("arrangement", help="dimension survey over all colorings"))
    return p


def _emit(doc: ReportDocument, out: str | None) -> None:
    text = doc.to_json()
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _cmd_analyze(args) -> ReportDocument:
    if args.table:
        f = load_table(args.table)
    else:
        if args.n is None:
            raise UsageError("--rule needs -n")
        f = SocialChoiceFunction.from_rule(args.rule, args.n, args.N)
    if profile_count(f.n, f.N) > MAX_PROFILES:
        raise EnvelopeError(f"(n!)^N = {profile_count(f.n, f.N)} profiles exceeds the "
                            f"supported envelope of {MAX_PROFILES}")
    t0 = time.perf_counter()
    rep = analyze(f, exhaustive=True if args.exhaustive_validation else None)
    config = {"n": f.n, "N": f.N, "rule": f.name, "table": args.table,
              "validation_level": "exhaustive" if args.exhaustive_validation else "default"}
    consistent = rep.dictator is None or rep.dictator == rep.dictator_combinatorial
    return ReportDocument("analyze", config, rep.to_dict(), consistent,
                          {"total": round(time.perf_counter() - t0, 4), "backend": _backend.name})


def _cmd_verify(args) -> ReportDocument:
    cfg = SuiteConfig(args.n, args.N, args.suite, args.seed, args.samples,
                      args.exhaustive_validation, args.max_nodes, args.out)
    return run_verify(cfg)


def _cmd_homology(args) -> ReportDocument:
    n, N = args.n, args.N
    if n < 2:
        raise UsageError("need n >= 2")
    if args.target == "NA":
        if n > 12:
            raise EnvelopeError("outcome nerve supported for n <= 12")
        cx, N = nerve_NA(n), None
    else:
        if args.target == "NP":
            N = 1
        if n < 2 or N < 1 or profile_count(n, N) > MAX_PROFILES:
            raise EnvelopeError(f"(n, N) = ({n}, {N}) outside the supported envelope "
                                f"of {MAX_PROFILES} profiles")
        cx = nerve_NP(n) if args.target == "NP" else nerve_NProfiles(n, N)
    degrees = args.k if args.k else list(range(cx.dim + 1))
    bad = [k for k in degrees if not 0 <= k <= cx.dim]
    if bad:
        raise UsageError(f"degree(s) {bad} outside 0..{cx.dim}")
    if args.dump_complex:
        cx.dump(args.dump_complex)
    return homology_document(args.target, cx, n, N, degrees)


def _cmd_enumerate(args) -> ReportDocument:
    check_envelope("enumerate", args.n, args.N)
    t0 = time.perf_counter()
    config = {"n": args.n, "N": args.N, "max_nodes": args.max_nodes}
    try:
        res = enumerate_monotonic_unanimous(args.n, args.N, args.max_nodes)
    except BudgetExceeded as exc:
        return ReportDocument("enumerate-scf", config,
                              {"budget_exceeded": True, "message": str(exc)}, False,
                              {"total": round(time.perf_counter() - t0, 4)})
    dictators = [dictator_of(f) for f in res.functions]
    if args.tables_dir:
        d = Path(args.tables_dir)
        d.mkdir(parents=True, exist_ok=True)
        for idx, f in enumerate(res.functions):
            save_table(f, d / f"scf_{idx:03d}.json")
    results = {"count": len(res.functions), "dictators": dictators, "nodes": res.nodes,
               "budget_exceeded": False}
    return ReportDocument("enumerate-scf", config, results, None not in dictators,
                          {"total": round(time.perf_counter() - t0, 4), "backend": _backend.name})


def _cmd_arrangement(args) -> ReportDocument:
    if args.n < 2 or args.N < 1:
        raise UsageError("need n >= 2 and N >= 1")
    total = args.N ** math.comb(args.n, 2)
    if total > MAX_COLORINGS:
        raise EnvelopeError(f"{total} colorings exceed {MAX_COLORINGS}")
    t0 = time.perf_counter()
    s = arrangement_survey(args.n, args.N, MAX_COLORINGS)
    return ReportDocument("arrangement", {"n": args.n, "N": args.N}, s.to_dict(), s.passed,
                          {"total": round(time.perf_counter() - t0, 4)})


COMMANDS = {"analyze": _cmd_analyze, "verify": _cmd_verify, "homology": _cmd_homology,
            "enumerate-scf": _cmd_enumerate, "arrangement": _cmd_arrangement}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.backend != "auto":
        try:
            _backend.use(args.backend)
        except ImportError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        doc = COMMANDS[args.command](args)
    except (UsageError, EnvelopeError, ChoiceError, ComplexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PipelineError, HomologyError) as exc:
        print(json.dumps({"command": args.command, "error": str(exc), "pass": False}))
        return EXIT_FAIL
    _emit(doc, args.out)
    return EXIT_OK if doc.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
