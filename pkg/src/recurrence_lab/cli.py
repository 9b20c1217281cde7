"""Command-line runner: one JSON report per invocation.

Exit codes: 0 when every hard invariant holds, 2 when one fails, 1 on usage
errors. Reports carry the resolved configuration, so a report file can be
passed back through ``--config`` to reproduce it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import __version__
from .experiments import RUNNERS

SCHEMA = "recurrence-lab-report/1"
THREADS_ENV = "RECURRENCE_LAB_THREADS"
_PLUMBING = {"out", "csv", "csv_out", "config", "command"}


class UsageError(Exception):
    def __init__(self, message: str, help_text: str = ""):
        super().__init__(message)
        self.help_text = help_text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_help())


def count(text) -> int:
    """Integer flag accepting ``1e7``, ``10**7`` and ``2^24``."""
    if isinstance(text, int):
        return text
    t = str(text).strip().replace("_", "")
    for op in ("**", "^"):
        if op in t:
            base, exp = t.split(op)
            return int(base) ** int(exp)
    if "e" in t.lower():
        mant, exp = t.lower().split("e")
        if "." not in mant:
            return int(mant) * 10 ** int(exp)
        val = float(t)
        if val != int(val):
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
        return int(val)
    return int(t)


def _common(p):
    p.add_argument("--out", default="-", help="report path (default stdout)")
    p.add_argument("--config", help="key=value file, or an earlier JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help=f"thread cap (fallback ${THREADS_ENV}, default 1)")
    p.add_argument("--csv", default=None, help="comma-separated result fields to project as CSV")
    p.add_argument("--csv-out", default="-", help="CSV path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="recurrence-lab", description="Desk-scale recurrence experiments.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("sieve", help="members of a family and shifted-pair counts")
    p.add_argument("--family", default="primes")
    p.add_argument("--window", type=count, default=10**6)
    p.add_argument("--shifts", default="1,2,6")

    p = sub.add_parser("thmB", help="sparse-difference construction with exact recheck")
    p.add_argument("--family", default="primes")
    p.add_argument("--f", default="pow:2")
    p.add_argument("--g", default="auto", help="'auto' or a growth rule such as table:100,1e4,1e8")
    p.add_argument("--window", type=count, default=10**7)
    p.add_argument("--k-max", type=int, default=8)

    p = sub.add_parser("digit", help="difference battery for the digit-balanced set")
    p.add_argument("--a-max", type=int, default=50)
    p.add_argument("--window-exp", type=int, default=24)
    p.add_argument("--banach-n", type=count, default=1024)
    p.add_argument("--banach-max", default="1/50")

    p = sub.add_parser("tuples", help="admissibility and prime translates of a tuple")
    p.add_argument("--H", default="0,2")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--n-max", type=count, default=100)
    p.add_argument("--delta-star-span", type=count, default=0)
    p.add_argument("--delta-star-r", type=int, default=2)

    p = sub.add_parser("color-gaps", help="two-colouring avoiding a thick difference set")
    p.add_argument("--family", default="squares")
    p.add_argument("--f-indices", default="16,10000,100000000", help="interval anchors, members of the family")
    p.add_argument("--window", type=count, default=10**6)

    p = sub.add_parser("kriz", help="Hamming Cayley graphs, witnesses and the separating assembly")
    p.add_argument("action", nargs="?", choices=["kneser", "witness", "assemble"], default="kneser")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--S", default="1")
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--delta", default="1/4")
    p.add_argument("--family", default="naturals")
    p.add_argument("--rounds", type=int, default=2)

    p = sub.add_parser("bohr", help="residue-class bound on the Bohr closure measure")
    p.add_argument("--family", default="primes")
    p.add_argument("--prime-bound", type=count, default=100)

    p = sub.add_parser("chen", help="Chen weights, Gowers norms and shifted-Chen recurrence")
    p.add_argument("action", nargs="?", choices=["sum", "gowers", "recurrence"], default="sum")
    p.add_argument("--N", type=count, default=10**6)
    p.add_argument("--function", default="constant:1")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n-max", type=count, default=100)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--subset-density", type=float, default=1.0)

    for sp in sub.choices.values():
        _common(sp)
    p = sub.add_parser("verify", help="recompute every hard invariant of a report")
    p.add_argument("--report", required=True)
    p.add_argument("--out", default="-")
    return top


# ---------------------------------------------------------------------------
# config handling


def load_config(path: str, command: str) -> dict:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        rep = json.loads(text)
        if rep.get("command") != command:
            raise UsageError(f"config report is for {rep.get('command')!r}, not {command!r}")
        return dict(rep["full_config"])
    out = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key=value")
        out[key.strip().lstrip("-").replace("-", "_")] = val.strip()
    return out


def _subparser(parser, command):
    return parser._subparsers._group_actions[0].choices[command]


def _parse(parser, argv):
    args, extra = parser.parse_known_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required", parser.format_help())
    if extra:
        sp = _subparser(parser, args.command)
        raise UsageError(f"unrecognized arguments: {' '.join(extra)}", sp.format_help())
    return args


def _resolve(parser, argv):
    args = _parse(parser, argv)
    if args.command == "verify" or not args.config:
        return args
    sp = _subparser(parser, args.command)
    cfg = load_config(args.config, args.command)
    known = {a.dest for a in sp._actions}
    unknown = sorted(set(cfg) - known - {"command"})
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}", sp.format_help())
    sp.set_defaults(**{k: v for k, v in cfg.items() if k != "command"})
    return _parse(parser, argv)


def full_config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in _PLUMBING}
    if cfg.get("threads") is None:
        cfg["threads"] = int(os.environ.get(THREADS_ENV, "1"))
    cfg["command"] = args.command
    return cfg


# ---------------------------------------------------------------------------
# output


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def strip_timing(report: dict) -> str:
    return dumps({k: v for k, v in report.items() if k != "timing"})


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _lookup(result: dict, dotted: str):
    cur = result
    for part in dotted.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise UsageError(f"--csv field {dotted!r} is not in the result")
        cur = cur[part]
    return cur


def csv_projection(result: dict, fields) -> str:
    cols = [_lookup(result, f) for f in fields]
    lengths = {len(c) for c in cols if isinstance(c, list)}
    rows = max(lengths) if lengths else 1
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for i in range(rows):
        row = []
        for c in cols:
            v = (c[i] if i < len(c) else "") if isinstance(c, list) else c
            row.append(json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
        w.writerow(row)
    return buf.getvalue()


def run_command(args) -> tuple[dict, int]:
    cfg = full_config(args)
    runner, _ = RUNNERS[args.command]
    t0 = time.perf_counter()
    result, raw, checks = runner(cfg)
    elapsed = time.perf_counter() - t0
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": args.command,
        "seed": cfg["seed"],
        "full_config": cfg,
        "result": result,
        "checks": checks,
        "ok": all(checks.values()),
        "raw": raw,
        "timing": {"seconds": round(elapsed, 3)},
    }
    return report, 0 if report["ok"] else 2


def verify_report(report: dict) -> dict:
    if report.get("schema") != SCHEMA:
        raise UsageError(f"unsupported report schema {report.get('schema')!r}")
    _, verifier = RUNNERS[report["command"]]
    checks = verifier(report)
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": "verify",
        "verified_command": report["command"],
        "checks": checks,
        "ok": all(checks.values()),
    }


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _resolve(parser, sys.argv[1:] if argv is None else list(argv))
        if args.command == "verify":
            with open(args.report) as fh:
                out = verify_report(json.load(fh))
            _write(args.out, dumps(out))
            return 0 if out["ok"] else 2
        report, code = run_command(args)
        _write(args.out, dumps(report))
        if args.csv:
            _write(args.csv_out, csv_projection(report["result"], args.csv.split(",")))
        return code
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        if exc.help_text:
            sys.stderr.write(exc.help_text)
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
