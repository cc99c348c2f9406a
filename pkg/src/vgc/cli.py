"""Command-line entry point: ``vgc run`` and ``vgc group``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .matrix_groups import ClosureCapExceeded, DEFAULT_CAP, FixtureError, GroupError, load_group
from .report import UnknownSuite, emit, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vgc", description="Exact verification suites for finite group actions "
                                                        "on rational surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run verification suites")
    run.add_argument("--suite", action="append", default=None,
                     help="group, orbits, picard, noether, funfield, a5 or all; repeat or comma-separate "
                          "(default: all; an empty value selects nothing)")
    run.add_argument("--format", choices=("json", "text"), default="text")
    run.add_argument("--out", type=Path, help="write the report here instead of stdout")
    run.add_argument("--fixtures", type=Path, help="fixture directory (default: $VGC_FIXTURES or packaged)")
    run.add_argument("--timings", action="store_true", help="record elapsed_ms per check (breaks byte-identity)")

    grp = sub.add_parser("group", help="inspect a group definition file")
    grp.add_argument("--file", type=Path, required=True)
    grp.add_argument("--order", action="store_true", help="print the order of the generated group")
    grp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    return p


def _cmd_run(args) -> int:
    suites = args.suite if args.suite is not None else ["all"]
    try:
        report = run_suite(suites, args.fixtures, args.format, timings=args.timings)
    except (UnknownSuite, FixtureError, OSError) as exc:
        print(f"vgc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for w in report.warnings:
        print(f"vgc: warning: {w}", file=sys.stderr)
    data = emit(report, args.format)
    if args.out:
        args.out.write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if report.status == "fail":
        for c in report.checks:
            if c.status == "fail":
                print(f"vgc: FAIL {c.id}: " + json.dumps(c.witness, sort_keys=True, ensure_ascii=False),
                      file=sys.stderr)
    return report.exit_code()


def _cmd_group(args) -> int:
    try:
        defn = load_group(args.file)
    except (FixtureError, OSError) as exc:
        print(f"vgc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        table = defn.closure(args.cap)
    except (ClosureCapExceeded, GroupError) as exc:
        print(f"vgc: {defn.name}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.order:
        print(table.order)
    else:
        kind = "PGL" if defn.projective else "GL"
        print(f"{defn.name}: {len(defn.generators)} generators in {kind}(3), order {table.order}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_group(args)


if __name__ == "__main__":
    sys.exit(main())
