"""Command-line front end: generation, sparse-half analysis, exact oracle
runs, extremal verification, and certificate emission/replay.

Machine output is JSON, one object per line on stdout; human-readable
summaries go to stderr.  Exit codes are distinct per failure class so
pipelines can branch: 0 ok, 2 parse error, 3 precondition failure, 4 budget
exhausted, 5 theorem violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import (
    BudgetExhausted,
    CounterexampleCandidate,
    Graph6Error,
    OracleCapError,
    PreconditionError,
    TheoremViolation,
)
from .graph6 import parse_graph6, to_graph6
from .graphs import clique_check, generate
from .oracle import (
    DEFAULT_CAP,
    check_extremal_characterization,
    min_edges_k_subset,
)
from .routes import DENSE_DELTA, MEDIUM_C, SPARSE_C, sparse_half_report

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4
EXIT_VIOLATION = 5

ORACLE_CAP_ENV = "SPARSEHALVES_ORACLE_CAP"


def _default_cap():
    raw = os.environ.get(ORACLE_CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def _emit(record):
    sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")


def _say(msg):
    sys.stderr.write(msg + "\n")


def _frac_json(q):
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def _read_graphs(path):
    """Yield (line_number, graph6 text, Graph) from a file or '-' (stdin)."""
    fh = sys.stdin if path == "-" else open(path)
    try:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                yield lineno, text, parse_graph6(text)
            except Graph6Error as exc:
                raise Graph6Error(f"line {lineno}: {exc}") from exc
    finally:
        if fh is not sys.stdin:
            fh.close()


def _dump_reproducer(prefix, payload):
    name = f"{prefix}-reproducer.json"
    with open(name, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
    _say(f"reproducer written to {name}")
    return name


# -- gen -------------------------------------------------------------------


def cmd_gen(args):
    try:
        G = generate(args.kind, *args.params)
    except (PreconditionError, ValueError) as exc:
        _say(f"gen: {exc}")
        return EXIT_PRECONDITION
    sys.stdout.write(to_graph6(G) + "\n")
    return EXIT_OK


# -- sparse-half --------------------------------------------------------------


def _explain():
    _say("route thresholds (exact rationals):")
    _say(f"  cut route      : c <= {SPARSE_C} = {float(SPARSE_C)}")
    _say(f"  scheme route   : regular and c <= {MEDIUM_C} = {float(MEDIUM_C)}")
    _say(
        f"  join route     : min degree >= {DENSE_DELTA} n"
        f" = {float(DENSE_DELTA)} n (guarantee flag)"
    )
    _say("  oracle         : n <= oracle cap")
    _say("  threshold flag : e(S) vs n^2/18, compared in integers")


def cmd_sparse_half(args):
    command = "sparsehalves " + " ".join(sys.argv[1:])
    if args.explain:
        _explain()
    worst = EXIT_OK
    for lineno, text, G in _read_graphs(args.path):
        t0 = time.perf_counter()
        record = {
            "graph6": text,
            "n": G.n,
            "e": G.edge_count,
            "c": _frac_json(G.density_c),
            "command": command,
            "version": __version__,
        }
        found, wit = clique_check(G, 4)
        if found and not args.allow_k4:
            record["error"] = f"contains K4 {wit}; rerun with --allow-k4"
            _emit(record)
            _say(f"line {lineno}: skipped, K4 witness {wit}")
            worst = max(worst, EXIT_PRECONDITION)
            continue
        try:
            rep = sparse_half_report(
                G,
                oracle_threshold=args.oracle_cap,
                route=args.route,
                half_size=args.half_size,
                require_k4_free=not args.allow_k4,
            )
            record["outcomes"] = {
                name: o.to_json() for name, o in sorted(rep.outcomes.items())
            }
            record["route_errors"] = rep.route_errors
            record["best"] = rep.best.to_json()
            record["flag"] = rep.flag
            if rep.oracle is not None:
                record["oracle"] = rep.oracle.to_json()
            if rep.conjecture_violated():
                record["violation"] = True
                _emit(record)
                _say("=" * 60)
                _say("CONJECTURE-VIOLATION: oracle-verified e(S) > n^2/18")
                _say(f"  graph6: {text}")
                _say("=" * 60)
                _dump_reproducer("violation", record)
                return EXIT_VIOLATION
        except PreconditionError as exc:
            record["error"] = str(exc)
            worst = max(worst, EXIT_PRECONDITION)
        record["elapsed_s"] = round(time.perf_counter() - t0, 6)
        _emit(record)
        if "best" in record:
            _say(
                f"line {lineno}: n={G.n} e={G.edge_count} -> e(S)="
                f"{record['best']['achieved']} via {record['best']['route']}"
                f" [{record.get('flag')}]"
            )
    return worst


# -- oracle ---------------------------------------------------------------------


def cmd_oracle(args):
    worst = EXIT_OK
    for lineno, text, G in _read_graphs(args.path):
        k = args.size if args.size is not None else G.n // 2
        record = {"graph6": text, "n": G.n, "e": G.edge_count, "size": k}
        t0 = time.perf_counter()
        try:
            res = min_edges_k_subset(G, k, cap=args.cap, force=args.force)
            record["result"] = res.to_json()
            bound18 = Fraction(G.n * G.n, 18)
            record["n2_over_18"] = _frac_json(bound18)
            record["flag"] = (
                "below"
                if res.minimum < bound18
                else ("equal" if res.minimum == bound18 else "above")
            )
        except OracleCapError as exc:
            record["error"] = str(exc)
            worst = max(worst, EXIT_PRECONDITION)
        except PreconditionError as exc:
            record["error"] = str(exc)
            worst = max(worst, EXIT_PRECONDITION)
        record["elapsed_s"] = round(time.perf_counter() - t0, 6)
        _emit(record)
        if "result" in record:
            _say(f"line {lineno}: min e(S) at size {k} = {record['result']['minimum']}")
    return worst


# -- verify-extremal ---------------------------------------------------------------


def cmd_verify_extremal(args):
    worst = EXIT_OK
    for lineno, text, G in _read_graphs(args.path):
        record = {"graph6": text, "n": G.n, "statement": args.statement}
        try:
            verdict = check_extremal_characterization(
                G,
                statement=args.statement,
                alpha=args.alpha,
                cap=args.cap,
                force=args.force,
            )
            record["verdict"] = verdict
        except TheoremViolation as exc:
            record["verdict"] = "VIOLATES"
            record["details"] = exc.details
            _emit(record)
            _say("=" * 60)
            _say(f"THEOREM VIOLATION on line {lineno}: {exc}")
            _say("=" * 60)
            _dump_reproducer("violation", record)
            return EXIT_VIOLATION
        except (PreconditionError, OracleCapError) as exc:
            record["error"] = str(exc)
            worst = max(worst, EXIT_PRECONDITION)
        _emit(record)
        if "verdict" in record:
            _say(f"line {lineno}: {record['verdict']}")
    return worst


# -- certify ----------------------------------------------------------------------


def cmd_certify(args):
    from .certify import certify_sign, closed_form_checks, replay

    if args.replay:
        report = replay(args.replay)
        _emit(report)
        _say("replay: " + ("proved reproduces" if report["ok"] else "FAILED"))
        return EXIT_OK if report["ok"] else EXIT_PRECONDITION

    names = (
        ["h", "k", "ell", "m", "closed-forms"] if args.what == "all" else [args.what]
    )
    worst = EXIT_OK
    for name in names:
        if name == "closed-forms":
            report = closed_form_checks()
            _emit({"closed_forms": report, "status": "passed"})
            _say("closed-form checks passed")
            continue
        t0 = time.perf_counter()
        cert = certify_sign(name, margin=args.margin, budget=args.budget)
        elapsed = round(time.perf_counter() - t0, 3)
        out = args.out or f"{name}.cert.json"
        cert.save(out)
        _emit(
            {
                "function": name,
                "status": cert.status,
                "sign": cert.sign,
                "margin": None if cert.margin is None else str(cert.margin),
                "stats": cert.stats,
                "certificate": out,
                "elapsed_s": elapsed,
            }
        )
        _say(f"certify {name}: {cert.status} ({cert.stats['boxes']} boxes, {elapsed}s)")
        if cert.status == "budget":
            worst = max(worst, EXIT_BUDGET)
        elif not cert.proved:
            worst = max(worst, EXIT_PRECONDITION)
    return worst


# -- parser ------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="sparsehalves",
        description="Sparse-half search and certified local-density analysis "
        "for K4-free graphs.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit generator output as graph6")
    g.add_argument("kind", help="turan | blowup | petersen | c5 | complete")
    g.add_argument("params", nargs="*", help="generator parameters")
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("sparse-half", help="find sparse halves per graph6 line")
    s.add_argument("path", help="graph6 file, or - for stdin")
    s.add_argument(
        "--route",
        choices=("auto", "sparse", "medium", "dense", "oracle", "uniform"),
        default="auto",
    )
    s.add_argument("--half-size", type=int, default=None)
    s.add_argument("--allow-k4", action="store_true")
    s.add_argument("--oracle-cap", type=int, default=26)
    s.add_argument("--explain", action="store_true")
    s.set_defaults(fn=cmd_sparse_half)

    o = sub.add_parser("oracle", help="exact minimum-edge subsets per graph")
    o.add_argument("path")
    o.add_argument("--size", type=int, default=None)
    o.add_argument("--cap", type=int, default=_default_cap())
    o.add_argument("--force", action="store_true", help="run above the cap")
    o.set_defaults(fn=cmd_oracle)

    v = sub.add_parser("verify-extremal", help="oracle-check characterizations")
    v.add_argument("path")
    v.add_argument(
        "--statement",
        choices=("half-k4", "local-triangle-free", "local-bipartite"),
        default="half-k4",
    )
    v.add_argument("--alpha", default=None, help="fraction like 3/4")
    v.add_argument("--cap", type=int, default=_default_cap())
    v.add_argument("--force", action="store_true")
    v.set_defaults(fn=cmd_verify_extremal)

    c = sub.add_parser("certify", help="emit or replay sign certificates")
    c.add_argument(
        "what",
        nargs="?",
        default="all",
        choices=("h", "k", "ell", "m", "g", "closed-forms", "all"),
    )
    c.add_argument("--margin", default=None, help="fraction like 3/1000")
    c.add_argument("--budget", type=int, default=10 ** 6)
    c.add_argument("--out", default=None)
    c.add_argument("--replay", default=None, metavar="FILE")
    c.set_defaults(fn=cmd_certify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except Graph6Error as exc:
        _say(f"parse error: {exc}")
        return EXIT_PARSE
    except CounterexampleCandidate as exc:
        _say(f"COUNTEREXAMPLE-CANDIDATE: {exc}")
        _dump_reproducer(
            "counterexample", {"graph6": exc.graph6, "details": exc.details}
        )
        return EXIT_VIOLATION
    except BudgetExhausted as exc:
        _say(f"budget exhausted: {exc}")
        return EXIT_BUDGET
    except (PreconditionError, OracleCapError) as exc:
        _say(f"precondition: {exc}")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
