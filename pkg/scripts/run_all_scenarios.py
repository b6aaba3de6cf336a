#!/usr/bin/env python3
"""Run every bundled scenario config and summarize exit codes.

Usage: python scripts/run_all_scenarios.py [--out DIR]
"""

import argparse
import os
import sys
import time

from turnwave.config import load_config
from turnwave.scenarios import run_scenario

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="parent output directory")
    args = ap.parse_args()

    worst = 0
    for name in sorted(os.listdir(CONFIG_DIR)):
        if not name.endswith(".cfg"):
            continue
        cfg = load_config(os.path.join(CONFIG_DIR, name))
        cfg.output_dir = os.path.join(args.out, name[:-4])
        t0 = time.time()
        result = run_scenario(cfg)
        print(f"{name:28s} exit={result.exit_code} "
              f"({time.time() - t0:5.1f}s)  {result.message}")
        worst = max(worst, result.exit_code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
