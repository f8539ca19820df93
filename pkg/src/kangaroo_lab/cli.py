"""Command-line driver: ``kangaroo-lab <command> [options] FILE``."""

from __future__ import annotations

import argparse
import sys

from . import report as R
from .blowup import blowup, permissibility_check
from .contact import EXACT_WEIGHT_BUDGET, MAXIMAL, PRECISION_EXHAUSTED, residual_order, weak_max_contact
from .errors import InternalAssertion, ParseError, PrecisionError
from .grammar import format_poly
from .poly import INF
from .kangaroo import VERDICT_INCONCLUSIVE, detect_kangaroo
from .scenario import Scenario, SearchSpace, load
from .search import check_oracle_guard, run_search

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3
EXIT_ASSERTION = 4

COMMANDS = ("analyze", "blowup", "detect", "check-theorem", "search", "oracle-compare")


def build_parser():
    ap = argparse.ArgumentParser(prog="kangaroo-lab",
                                 description="Residual orders under blowup in positive characteristic.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help="scenario file, or search-space file for search / oracle-compare")
    ap.add_argument("--precision", type=int, default=None, help="jet precision (overrides the file)")
    ap.add_argument("--report", default=None, help="also write the report to this file")
    ap.add_argument("--workers", type=int, default=1, help="worker processes for search")
    return ap


def _need(obj, kind, command):
    if not isinstance(obj, kind):
        what = "a search-space file" if kind is SearchSpace else "a scenario file"
        raise ParseError(f"'{command}' needs {what}")


def _precision(sc: Scenario, override):
    return sc.precision if override is None else override


def cmd_analyze(sc: Scenario, precision):
    J = sc.ideal(precision)
    frame = weak_max_contact(J)
    rep = R.Report("analyze")
    status = 0
    if frame.status == MAXIMAL:
        rep.line(R.frame_line(frame))
    elif frame.status == PRECISION_EXHAUSTED:
        if J.precision == INF:
            rep.line(f"c={frame.c}, o>={R.fmt(frame.o)}: cleaning passed w = {EXACT_WEIGHT_BUDGET} on exact input; "
                     f"inconclusive")
        else:
            rep.line(f"c={frame.c}, o>={R.fmt(frame.data.vanished_bound)}: inconclusive, raise precision")
        status = EXIT_INCONCLUSIVE
    elif J.precision != INF:
        rep.line(f"c={frame.c}, o=inf: J = (u^{frame.c}) for {frame.hypersurface()} up to precision "
                 f"{J.precision}; inconclusive, raise precision")
        status = EXIT_INCONCLUSIVE
    else:
        rep.line(f"c={frame.c}, o=inf, J = (u^{frame.c}) for {frame.hypersurface()} (pure power)")
    for i, (o, q) in enumerate(zip(frame.orders, frame.steps), 1):
        rep.line(f"  cleaning step {i}: o={R.fmt(o)}, z -> z + {format_poly(q)}")
    if frame.status == MAXIMAL:
        K = frame.K
        rep.line("coefficient ideal: (" + ", ".join(format_poly(g) for g in K.gens) + ")")
        ro = residual_order(J, sc.divisor, frame)
        rep.line(f"divisor {sc.divisor}: {ro.describe()}")
        rep.put("resord.before", ro.value)
        rep.put("compatible", ro.compatible)
    R.add_frame(rep, frame)
    return rep, status


def cmd_blowup(sc: Scenario, precision):
    if sc.chart is None:
        raise ParseError("'blowup' needs a [chart] section")
    J = sc.ideal(precision)
    frame = weak_max_contact(J)
    if frame.status != MAXIMAL:
        raise PrecisionError(f"contact frame status {frame.status}")
    perm = permissibility_check(J, sc.divisor, sc.chart, frame)
    rep = R.Report("blowup")
    rep.line(f"center {sc.chart.describe()} with {frame.hypersurface()}")
    rep.put("permissible", perm.ok)
    if not perm.ok:
        rep.line("NOT PERMISSIBLE: " + ", ".join(perm.failures()))
        return rep, EXIT_OK
    tr = blowup(J, sc.divisor, sc.chart, frame)
    rep.line("weak transform: " + " ; ".join(format_poly(g) for g in tr.ideal.gens))
    rep.line(f"divisor: {tr.divisor}; lost components: {sorted(tr.lost) or 'none'}; "
             f"exceptional multiplicity {tr.exceptional_multiplicity}")
    R.add_transform(rep, tr)
    return rep, EXIT_OK


def cmd_detect(sc: Scenario, precision, command="detect"):
    if sc.chart is None:
        raise ParseError(f"'{command}' needs a [chart] section")
    J = sc.ideal(precision)
    strict = command == "detect"
    ar = detect_kangaroo(J, sc.divisor, sc.chart, strict=strict)
    rep = R.detect_report(ar, command)
    status = EXIT_INCONCLUSIVE if ar.verdict == VERDICT_INCONCLUSIVE else EXIT_OK
    if ar.violations:
        status = EXIT_ASSERTION
    return rep, status


def cmd_search(space: SearchSpace, workers, command="search"):
    if command == "oracle-compare":
        check_oracle_guard(space)
        result = run_search(space, workers, oracle=True)
    else:
        result = run_search(space, workers)
    rep = R.search_report(result, command)
    bad = result.violations() or result.discrepancies()
    return rep, EXIT_ASSERTION if bad else EXIT_OK


def run(argv=None, out=sys.stdout, err=sys.stderr):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        obj = load(args.file)
        if args.command in ("search", "oracle-compare"):
            _need(obj, SearchSpace, args.command)
            rep, status = cmd_search(obj, args.workers, args.command)
        else:
            _need(obj, Scenario, args.command)
            prec = _precision(obj, args.precision)
            if args.command == "analyze":
                rep, status = cmd_analyze(obj, prec)
            elif args.command == "blowup":
                rep, status = cmd_blowup(obj, prec)
            else:
                rep, status = cmd_detect(obj, prec, args.command)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    except OSError as exc:
        print(f"parse error: cannot read {args.file}: {exc.strerror}", file=err)
        return EXIT_PARSE
    except PrecisionError as exc:
        print(f"inconclusive: raise precision ({exc})", file=err)
        return EXIT_INCONCLUSIVE
    except InternalAssertion as exc:
        print(f"internal assertion failed: {exc}", file=err)
        return EXIT_ASSERTION
    except ValueError as exc:
        print(f"invalid input: {exc}", file=err)
        return EXIT_PARSE
    text = rep.render()
    out.write(text)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
