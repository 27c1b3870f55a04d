#!/usr/bin/env python3
"""Print an experiment report bundle as a terminal table."""

import argparse
import json
import pathlib
import sys


def fmt_value(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("path", help="report.json file or the directory holding one")
    args = parser.parse_args()

    path = pathlib.Path(args.path)
    if path.is_dir():
        path = path / "report.json"
    report = json.loads(path.read_text())

    config = report["config"]
    print(f"experiment: {config['experiment']}  law: {config['law']}  "
          f"beta: {config['beta']}  seed: {config['master_seed']}")
    print(f"replicates/cell: {config['replicates']}  alpha: {config['alpha']}  "
          f"t: {config['t']}  y: {config['y']}")

    failures = 0
    for cell in report["cells"]:
        print(f"\nn = {cell['n']}")
        for name, est in sorted(cell["estimates"].items()):
            print(f"  {name:32s} {fmt_value(est['value']):>14s} "
                  f"+/- {fmt_value(est['stderr']):>12s}  (count {est['count']})")
        for name, value in sorted(cell["theory"].items()):
            print(f"  theory {name:25s} {fmt_value(value):>14s}")
        for name, verdict in sorted(cell["verdicts"].items()):
            tag = "pass" if verdict["pass"] else "FAIL"
            if not verdict["pass"]:
                failures += 1
            print(f"  {tag}   {name}  (tolerance {fmt_value(verdict['tolerance'])})")

    meta = report["meta"]
    print(f"\nrng: {meta['rng']}  version: {meta['version']}  "
          f"events: {meta['events']}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
