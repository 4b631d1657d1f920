"""Command-line interface.

Subcommands: gen, run-book, check-trace, verify-bounds, tables, clique.
Numeric options that feed the exact-arithmetic core (probabilities, mu,
epsilon, p-floor) are parsed as decimal or num/den strings and converted to
exact fractions, never through floats.  All outputs are written atomically.
Exit codes: 0 success, 1 usage or I/O error, 2 a verification failed.
"""

from __future__ import annotations

import argparse
import sys

from . import book, bounds, checks, colouring, tables
from ._util import atomic_write_text, parse_frac, resolve_jobs


def _add_jobs(parser):
    parser.add_argument("--jobs", type=int, default=0,
                        help="worker processes (default: all cores; RBL_JOBS overrides)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="rbl", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random colouring in RBC1 format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--red-prob", default="1/2", help="decimal or num/den, exact")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("run-book", help="run the book algorithm, write the trace JSON")
    p.add_argument("--in", dest="infile", required=True, help="RBC1 colouring")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--mu", default=None)
    p.add_argument("--epsilon", default=None)
    p.add_argument("--x-min", type=int, default=None)
    p.add_argument("--w-min", type=int, default=None)
    p.add_argument("--p-floor", default=None)
    p.add_argument("--spine-budget", type=int, default=12)
    p.add_argument("--out", required=True)

    p = sub.add_parser("check-trace", help="replay a trace and check every invariant")
    p.add_argument("--colouring", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--report", default=None, help="write the JSON check report here")
    _add_jobs(p)

    p = sub.add_parser("verify-bounds", help="verify bound-function and binomial claims")
    p.add_argument("--appendix", default="all", choices=["A", "B", "C", "D", "all"])
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    _add_jobs(p)

    p = sub.add_parser("tables", help="emit the bound-formula table as CSV")
    p.add_argument("--k-range", required=True, help="a:b inclusive")
    p.add_argument("--ell-rule", default="equal", choices=sorted(tables.ELL_RULES))
    p.add_argument("--out", default=None)
    _add_jobs(p)

    p = sub.add_parser("clique", help="exact maximum monochromatic clique")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--colour", required=True, choices=["red", "blue"])
    p.add_argument("--cap", type=int, default=64)
    return top


def _emit(text: str, path):
    if path:
        atomic_write_text(path, text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    c = colouring.random_colouring(args.n, parse_frac(args.red_prob), args.seed)
    colouring.save(c, args.out)
    return 0


def _cmd_run_book(args) -> int:
    c = colouring.load(args.infile)
    params = book.BookParams(
        k=args.k, ell=args.ell,
        mu=parse_frac(args.mu) if args.mu else None,
        epsilon=parse_frac(args.epsilon) if args.epsilon else None,
        x_min=args.x_min, w_min=args.w_min,
        p_floor=parse_frac(args.p_floor) if args.p_floor else None,
        spine_budget=args.spine_budget,
    )
    half = c.n // 2
    x0 = colouring.VertexSet.interval(0, half, c.n)
    y0 = colouring.VertexSet.interval(half, c.n, c.n)
    trace = book.run(c, x0, y0, params)
    atomic_write_text(args.out, trace.to_json())
    return 0


def _cmd_check_trace(args) -> int:
    c = colouring.load(args.colouring)
    with open(args.trace) as fh:
        trace = book.Trace.from_json(fh.read())
    report = checks.check_trace(c, trace)
    if args.report:
        atomic_write_text(args.report, report.to_json())
    failures = report.failures()
    for cid, res in sorted(failures.items()):
        print(f"FAIL {cid}: step {res.first_violation}: {res.detail or ''}",
              file=sys.stderr)
    return 2 if failures else 0


def _cmd_verify_bounds(args) -> int:
    appendices = ["A", "B", "C", "D"] if args.appendix == "all" else [args.appendix]
    jobs = resolve_jobs(args.jobs)
    from ._util import pmap

    row_groups = pmap(_verify_one, [(a, args.tol) for a in appendices], jobs=jobs)
    rows = [row for group in row_groups for row in group]
    _emit(bounds.rows_to_csv(rows), args.out)
    return 0 if all(r.status == "pass" for r in rows) else 2


def _verify_one(task):
    appendix, tol = task
    return bounds.verify_appendix_claims(appendix, tol)


def _cmd_tables(args) -> int:
    try:
        lo, hi = (int(part) for part in args.k_range.split(":"))
    except ValueError:
        raise SystemExit(f"--k-range must look like 4:40, got {args.k_range!r}")
    rows = tables.bound_rows(lo, hi, args.ell_rule)
    _emit(tables.rows_to_csv(rows), args.out)
    return 0


def _cmd_clique(args) -> int:
    from .cliques import max_clique

    c = colouring.load(args.infile)
    found = max_clique(c, args.colour, colouring.VertexSet.full(c.n), args.cap)
    print(f"{args.colour} clique size {len(found)}: {sorted(found)}")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "run-book": _cmd_run_book,
    "check-trace": _cmd_check_trace,
    "verify-bounds": _cmd_verify_bounds,
    "tables": _cmd_tables,
    "clique": _cmd_clique,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"rbl {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
