#!/usr/bin/env python3
"""Run the result-figure experiment presets and write one CSV each.

Figures can then be rendered from the CSVs with the frontend renderer:
    node frontend/dist/render_figures.js results/fig7.csv --x fraction --out fig7.svg
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bdris_sim.harness import PRESETS, preset_plan, run_sweep, write_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--only", nargs="*", choices=sorted(PRESETS),
                        help="subset of presets (default: all)")
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = args.only or sorted(PRESETS)
    for name in names:
        plan = preset_plan(name, trials=args.trials, master_seed=args.seed)
        start = time.perf_counter()
        records = run_sweep(plan, workers=args.workers)
        path = outdir / f"{name}.csv"
        write_csv(records, path)
        print(f"{name}: {len(records)} records "
              f"({plan.total_trials()} trials, {time.perf_counter() - start:.1f}s) "
              f"-> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
