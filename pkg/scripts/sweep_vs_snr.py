#!/usr/bin/env python3
"""Free-form NMSE-vs-SNR experiment: edit the plan below and run.

Unlike the CLI this is meant for interactive poking (change axes, print the
table, keep the CSV only if you want it).
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bdris_sim.harness import SweepPlan, run_sweep, write_csv
from bdris_sim.system import SystemConfig

plan = SweepPlan(
    base=SystemConfig.create(m_t=2, m_r=4, n=32, nbar=4, master_seed=42),
    nbars=(1, 4),
    kinds=("ideal", "type3"),
    snrs_db=tuple(range(-10, 32, 2)),
    fractions=(0.2,),
    trials=100,
)

records = run_sweep(plan, workers=2)
print(f"{'kind':8s} {'nbar':>4s} {'snr':>6s} {'nmse_mean':>12s}")
for r in records:
    print(f"{r.impairment_type:8s} {r.nbar:4d} {r.snr_db:6.1f} {r.nmse_mean:12.5e}")

if len(sys.argv) > 1:
    write_csv(records, sys.argv[1])
    print(f"wrote {sys.argv[1]}")
