"""Argument parsing and the console entry point.

Two invocation shapes share one flag set:

    rectify-kit run MANIFEST            execute every task in the manifest
    rectify-kit <op> MANIFEST ENTITY    run a single op against one entity

Exit codes: 0 all assertions pass, 1 input error, 2 a definite failure,
3 a bounded search ended without a verdict (--strict turns 3 into 2).
"""

from __future__ import annotations

import argparse
import sys

from ..errors import InputError
from . import manifest as mf
from . import runner


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--field", help='coefficient field override: "Q" or "F<p>"')
    sp.add_argument("--arity-bound", type=int, dest="arity_bound", metavar="N",
                    help="structure relations checked through this arity")
    sp.add_argument("--length-bound", type=int, dest="length_bound", metavar="N",
                    help="tensor length for staged constructions")
    sp.add_argument("--word-bound", type=int, dest="word_bound", metavar="N",
                    help="zigzag word or hammock width bound")
    sp.add_argument("--degree-window", dest="degree_window", metavar="LO:HI",
                    help="cohomological degree window, e.g. =-1:2")
    sp.add_argument("--report", dest="report_path", metavar="PATH",
                    help="write the JSON report here instead of stdout")
    sp.add_argument("--strict", action="store_true",
                    help="treat indeterminate verdicts as failures for the exit code")
    sp.add_argument("--jobs", type=int, default=1, metavar="N",
                    help="run up to N tasks concurrently")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rectify-kit",
        description="exact checks for finite homotopy-algebraic structures",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    rp = sub.add_parser("run", help="execute every task in a manifest")
    rp.add_argument("manifest")
    _add_common(rp)
    for op in mf.OPS:
        sp = sub.add_parser(op, help="run a single %s task" % op)
        sp.add_argument("manifest")
        sp.add_argument("entity")
        _add_common(sp)
    return p


def _parse_window(raw: str):
    lo, sep, hi = raw.partition(":")
    try:
        if not sep:
            raise ValueError
        return (int(lo), int(hi))
    except ValueError:
        raise InputError("degree window must be LO:HI with integer bounds, found %r" % raw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        window = _parse_window(args.degree_window) if args.degree_window else None
        man = mf.load(args.manifest, field_override=args.field)
        defaults = runner.Defaults(
            arity_bound=args.arity_bound,
            length_bound=args.length_bound,
            word_bound=args.word_bound,
            window=window,
        )
        if args.command == "run":
            tasks = man.tasks
        else:
            op = args.command
            mf._entity(man.entities, args.entity, mf.OP_ENTITY_KINDS[op], "task %r" % op)
            tasks = [mf.Task(name=op, op=op, entity=args.entity, params={})]
        report, code = runner.run_tasks(
            man, tasks, defaults, strict=args.strict, jobs=max(1, args.jobs)
        )
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    text = runner.render_report(report)
    if args.report_path:
        with open(args.report_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
