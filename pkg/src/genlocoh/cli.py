"""Command line front end: ``genlocoh predict|verify|bounds|report|selftest``.

Exit codes: 0 success, 1 hard failure (a predictor/oracle disagreement or an
instance that could not be evaluated), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import glc
from .fileformat import InstanceParseError, parse_instance
from .homalg import DEFAULT_SLACK
from .poly import MonomialOrder

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUFFIX = ".inst"


def _num(x):
    return "inf" if x == math.inf else x


def _primes(ps):
    return [str(p) for p in ps]


def _bounds_dict(b):
    if b is None:
        return None
    return {"pdM": _num(b.pdM), "dimTensor": b.dimTensor, "gradeT": _num(b.gradeT),
            "araUpper": b.araUpper, "depthN": b.depthN, "d": b.d,
            "vanishingAbove": _num(b.vanishing_above)}


def _oracle_dict(trace, slack):
    if trace is None:
        return None
    return {
        "i": trace.i, "verdict": trace.verdict, "nmax": trace.n_max, "window": trace.window,
        "slack": slack,
        "stableDims": {str(j): v for j, v in sorted(trace.stable_dims.items())},
    }


def _evaluate(job):
    """Run one command on one instance file; always returns a record."""
    command, name, text, opts = job
    record = {"id": name, "command": command}
    start = time.perf_counter()
    try:
        inst = parse_instance(text, name, MonomialOrder(opts["order"]))
    except InstanceParseError as exc:
        record.update(status="error", kind="parse", error=str(exc))
        return record
    except Exception as exc:  # validation of the instance data itself
        record.update(status="error", kind=type(exc).__name__, error=str(exc))
        return record
    try:
        if command == "predict":
            v = glc.predict_top_vanishing(inst)
            record.update(status="ok", predictor=v.value, witnesses=_primes(v.witnesses),
                          complete=v.complete)
        elif command == "bounds":
            record.update(status="ok", bounds=_bounds_dict(glc.bounds(inst)))
        else:
            rep = glc.cross_validate(inst, opts["nmax"], opts["window"], opts["slack"])
            att = rep.attached
            record.update(
                status="ok",
                predictor=rep.predictor.value,
                witnesses=_primes(rep.predictor.witnesses),
                oracle=_oracle_dict(rep.oracle, opts["slack"]),
                agreement=rep.agreement,
                bounds=_bounds_dict(rep.bounds),
                attached=_primes(att.primes),
                homIdentity=att.identity_holds,
            )
    except Exception as exc:
        record.update(status="error", kind=type(exc).__name__, error=str(exc),
                      trace=traceback.format_exc(limit=3).splitlines()[-1])
    record["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    return record


def _collect(paths):
    files = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob("*" + SUFFIX)))
        else:
            files.append(p)
    return files


def _jobs_from_files(command, files, opts):
    jobs = []
    for f in files:
        jobs.append((command, f.stem, f.read_text(encoding="utf-8"), opts))
    return jobs


def run_jobs(jobs, n_workers=1):
    if n_workers <= 1 or len(jobs) <= 1:
        return [_evaluate(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(_evaluate, jobs))


# --------------------------------------------------------------------------
# output


def _row(r):
    if r["status"] != "ok":
        return [r["id"], "ERROR", r.get("kind", ""), r["error"]]
    if r["command"] == "predict":
        return [r["id"], r["predictor"], ",".join(r["witnesses"]) or "-"]
    if r["command"] == "bounds":
        b = r["bounds"]
        return [r["id"]] + [str(b[k]) for k in ("pdM", "dimTensor", "gradeT", "araUpper",
                                                 "depthN", "d")]
    return [r["id"], r["predictor"], r["oracle"]["verdict"], r["agreement"],
            ",".join(r["witnesses"]) or "-"]


HEADERS = {
    "predict": ["id", "predictor", "witnesses"],
    "bounds": ["id", "pdM", "dimTensor", "gradeT", "araUpper", "depthN", "d"],
    "verify": ["id", "predictor", "oracle", "agreement", "witnesses"],
}


def format_table(command, records) -> str:
    head = HEADERS["verify" if command in ("report", "selftest") else command]
    rows = [head] + [_row(r) for r in records]
    widths = {}
    for row in rows:
        if row[1] == "ERROR":
            continue
        for k, cell in enumerate(row):
            widths[k] = max(widths.get(k, 0), len(str(cell)))
    lines = []
    for row in rows:
        if row[1] == "ERROR":
            lines.append("  ".join(str(c) for c in row))
        else:
            lines.append("  ".join(str(c).ljust(widths[k]) for k, c in enumerate(row)).rstrip())
    return "\n".join(lines)


def format_records(records) -> str:
    return "\n".join(json.dumps(r, sort_keys=True) for r in records)


def exit_code(records) -> int:
    if any(r.get("agreement") == "disagree" for r in records):
        return EXIT_FAIL
    if any(r["status"] == "error" and r.get("kind") == "parse" for r in records):
        return EXIT_USAGE
    if any(r["status"] == "error" for r in records):
        return EXIT_FAIL
    return EXIT_OK


def summary(records) -> str:
    ok = [r for r in records if r["status"] == "ok"]
    agree = sum(r.get("agreement") == "agree" for r in ok)
    dis = sum(r.get("agreement") == "disagree" for r in ok)
    na = sum(r.get("agreement") == "n/a" for r in ok)
    return (f"{len(records)} instances: {len(ok)} evaluated, {len(records) - len(ok)} failed; "
            f"agree {agree}, disagree {dis}, not applicable {na}")


# --------------------------------------------------------------------------


def corpus_dir() -> Path:
    return Path(str(resources.files("genlocoh") / "corpus"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genlocoh", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nmax", type=int, default=glc.DEFAULT_NMAX)
    common.add_argument("--window", type=int, default=glc.DEFAULT_WINDOW)
    common.add_argument("--degree-slack", type=int, default=DEFAULT_SLACK)
    common.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("table", "json", "both"), default="table",
                        help="aligned table, one JSON record per line, or both")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("predict", "decide top vanishing from associated primes"),
        ("verify", "predictor, oracle and bounds for each instance"),
        ("bounds", "vanishing bounds for each instance"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("paths", nargs="+", help="instance files or directories")
    p = sub.add_parser("report", parents=[common], help="verify every instance in a directory")
    p.add_argument("directory")
    sub.add_parser("selftest", parents=[common], help="verify the bundled corpus")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.window < 1 or args.nmax < args.window + 1 or args.degree_slack < 0 or args.jobs < 1:
        print("error: need window >= 1, nmax >= window + 1, degree-slack >= 0, jobs >= 1",
              file=sys.stderr)
        return EXIT_USAGE
    opts = {"nmax": args.nmax, "window": args.window, "slack": args.degree_slack,
            "order": args.order}
    if args.command == "report":
        if not Path(args.directory).is_dir():
            print(f"error: {args.directory} is not a directory", file=sys.stderr)
            return EXIT_USAGE
        paths = [args.directory]
    elif args.command == "selftest":
        paths = [corpus_dir()]
    else:
        paths = args.paths
    files = _collect(paths)
    missing = [f for f in files if not f.is_file()]
    if missing:
        print(f"error: cannot read {missing[0]}", file=sys.stderr)
        return EXIT_USAGE
    command = "verify" if args.command in ("report", "selftest") else args.command
    records = run_jobs(_jobs_from_files(command, files, opts), args.jobs)
    if args.format in ("table", "both"):
        print(format_table(args.command, records))
        if command == "verify":
            print(summary(records))
    if args.format in ("json", "both"):
        print(format_records(records))
    return exit_code(records)


if __name__ == "__main__":
    sys.exit(main())
