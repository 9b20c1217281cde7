"""Produce every preset report, rerun each from its embedded config and verify it.

    python scripts/run_presets.py --out-dir reports [--only c01-thmB-primes ...]

Prints one line per preset: exit code, rerun identity and verify outcome.
"""
import argparse
import json
import sys
import time
from pathlib import Path

from recurrence_lab.cli import main, strip_timing
from recurrence_lab.presets import PRESETS


def run_one(name: str, argv: list[str], out_dir: Path) -> dict:
    first = out_dir / f"{name}.json"
    again = out_dir / f"{name}.rerun.json"
    check = out_dir / f"{name}.verify.json"
    t0 = time.perf_counter()
    code = main(argv + ["--out", str(first)])
    seconds = time.perf_counter() - t0
    report = json.loads(first.read_text())
    rerun_code = main([argv[0], "--config", str(first), "--out", str(again)])
    same = strip_timing(report) == strip_timing(json.loads(again.read_text()))
    verify_code = main(["verify", "--report", str(first), "--out", str(check)])
    return {
        "name": name, "exit": code, "rerun_exit": rerun_code, "identical": same,
        "verify_exit": verify_code, "seconds": round(seconds, 2),
    }


def cli(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="reports")
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = args.only or list(PRESETS)
    bad = 0
    for name in names:
        row = run_one(name, PRESETS[name], out_dir)
        ok = row["identical"] and row["verify_exit"] == 0
        bad += not ok
        print(
            f"{name:28s} exit={row['exit']} identical={row['identical']} "
            f"verify={row['verify_exit']} {row['seconds']:.2f}s"
        )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(cli())
