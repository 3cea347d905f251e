"""Command-line driver.

Exit codes: 0 all tasks succeeded with no refuted verdicts; 1 a task
errored or a verification was refuted (or a cache audit failed); 2 usage
problems, including job-file parse errors.

Every flag has an environment-variable mirror prefixed MIXMULT_
(e.g. MIXMULT_KMAX=128, MIXMULT_CACHE_PATH=...); flags win over the
environment.
"""

from __future__ import annotations

import argparse
import os
import sys

from mixmult.cache import LengthCache
from mixmult.errors import JobError, MixmultError
from mixmult.jobs import RunOptions, emit, parse_job, run_job

ENV_PREFIX = "MIXMULT_"


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mixmult",
        description="Exact mixed/Buchsbaum-Rim multiplicity engine over monomial data",
    )
    ap.add_argument("--job", required=True, help="path to a job file (see README for the grammar)")
    ap.add_argument("--out", default=_env("OUT"), help="write the report here instead of stdout")
    ap.add_argument("--format", default=_env("FORMAT", "structured"),
                    choices=["human", "structured", "csv-tables"])
    ap.add_argument("--window", type=int, default=_int_env("WINDOW"),
                    help="stabilization window span override")
    ap.add_argument("--base", type=int, default=_int_env("BASE"),
                    help="stabilization base point override")
    ap.add_argument("--kmax", type=int, default=_int_env("KMAX", 64),
                    help="finiteness-certificate bound")
    ap.add_argument("--threads", type=int, default=_int_env("THREADS", 1))
    ap.add_argument("--no-cache", action="store_true",
                    default=_env("NO_CACHE") == "1")
    ap.add_argument("--cache-path",
                    default=_env("CACHE_PATH",
                                 os.path.join(os.path.expanduser("~"), ".cache", "mixmult",
                                              "lengths.jsonl")))
    ap.add_argument("--seed", type=int, default=_int_env("SEED", 0),
                    help="seed for randomized cache audits")
    return ap


def _int_env(name: str, default=None):
    raw = _env(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        with open(args.job, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read job file: {exc}", file=sys.stderr)
        return 2

    try:
        spec = parse_job(text)
    except JobError as exc:
        print(f"job parse error: {exc}", file=sys.stderr)
        return 2

    cache = None if args.no_cache else LengthCache(args.cache_path)
    options = RunOptions(window=args.window, base=args.base, kmax=args.kmax,
                         threads=args.threads, seed=args.seed, cache=cache)
    try:
        report = run_job(spec, options)
    except MixmultError as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 1

    blob = emit(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(blob)
    else:
        sys.stdout.buffer.write(blob)
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
