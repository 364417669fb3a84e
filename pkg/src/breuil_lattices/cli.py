"""Command line front end.

    breuil-lattices verify --job point.json --out report.json
    breuil-lattices sweep --job grid.json
    breuil-lattices suite --prime 7

The JSON report goes to --out when given and to standard output
otherwise; the human summary goes to standard output when the report is
written to a file and to standard error when it is not.  Exit status: 0
when every requested check passed, 1 when some verification failed, 2 for
unusable input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline, suite

JOB_VERBS = ("classify", "delta", "build", "verify", "reduce", "verdict", "sweep")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="breuil-lattices",
                                 description="Strongly divisible lattices and their mod p reductions.")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in JOB_VERBS:
        sp = sub.add_parser(verb, help=f"run the pipeline up to {verb}" if verb != "sweep"
                            else "run the full pipeline on every point of a grid")
        sp.add_argument("--job", required=True, help="JSON job file")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--cap", type=int, help="override the precision cap (pi-adic digits)")
        sp.add_argument("--fil-depth", type=int, help="override the truncation depth m of S")
        sp.add_argument("--max-iter", type=int, help="bound on recursion steps for Delta")
    sp = sub.add_parser("suite", help="run the acceptance battery")
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--cap", type=int, default=16, help="cap for e = 2 (e = 4 uses 1.5 times it)")
    sp.add_argument("--prime", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--only", type=int, action="append", help="run only this criterion (repeatable)")
    return ap


def _emit(text: str, summary: str, out: str | None):
    if out:
        Path(out).write_text(text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)


def _run_job(args) -> int:
    try:
        text = Path(args.job).read_text()
    except OSError as exc:
        print(f"error: cannot read job file: {exc}", file=sys.stderr)
        return 2
    stages = None if args.verb == "sweep" else pipeline.VERB_STAGES[args.verb]
    try:
        job = pipeline.load_job(text, cap=args.cap, fil_depth=args.fil_depth,
                                max_iter=args.max_iter, stages=stages)
    except pipeline.JobError as exc:
        print(f"error: {args.job}: {exc}", file=sys.stderr)
        return 2
    report = pipeline.run(job)
    _emit(pipeline.dumps(report.to_json()), pipeline.describe(report), args.out)
    return 0 if report.ok else 1


def _run_suite(args) -> int:
    try:
        crits = suite.run_suite(args.prime, args.cap, args.seed, only=set(args.only or ()))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    ok = all(c.ok for c in crits)
    data = {"p": args.prime, "cap": args.cap, "seed": args.seed, "ok": ok,
            "criteria": [c.to_json() for c in crits]}
    lines = []
    for c in crits:
        lines.append(c.line())
        lines += [f"    {i.name}: {i.detail}" for i in c.items if not i.ok]
    _emit(pipeline.dumps(data), "\n".join(lines), args.out)
    return 0 if ok else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.verb == "suite":
        return _run_suite(args)
    return _run_job(args)


if __name__ == "__main__":
    sys.exit(main())
