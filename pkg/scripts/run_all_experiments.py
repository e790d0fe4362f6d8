#!/usr/bin/env python3
"""Run every experiment at its default (acceptance-scale) configuration and
write one report CSV per experiment into an output directory.

    python scripts/run_all_experiments.py --out-dir reports
    python scripts/run_all_experiments.py --quick --only run_tv_limit

``--quick`` shrinks seeds and grids to smoke-test scale (a few seconds per
experiment) while keeping every grid-adequacy gate satisfied.
"""

import argparse
import sys
import time
from pathlib import Path

from pathint.experiments import (
    EXPERIMENT_NAMES,
    ExperimentConfig,
    default_config,
    run_experiment,
    write_report_csv,
)

QUICK_OVERRIDES = {
    "run_identity_suite": dict(seeds=tuple(range(1, 11))),
    "run_step_convergence": dict(seeds=tuple(range(1, 41))),
    "run_bm_convergence": dict(seeds=(1, 2, 3), steps=2**18, c_grid=(0.2, 0.05)),
    "run_tv_limit": dict(seeds=(1, 2, 3), steps=2**20, c_grid=(0.02,)),
    "run_as_convergence": dict(seeds=(1, 2, 3), steps=2**18, n_range=tuple(range(1, 33))),
    "run_cx_z": dict(seeds=(1, 2, 3), steps=10**5, n_range=(2, 4)),
    "run_cx_y": dict(seeds=(1, 2, 3), steps=2**18, n_range=(2, 3, 4)),
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="reports")
    ap.add_argument("--only", action="append", choices=sorted(EXPERIMENT_NAMES),
                    help="run only these experiments (repeatable)")
    ap.add_argument("--quick", action="store_true", help="smoke-test scale")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = args.only or sorted(EXPERIMENT_NAMES)
    for name in names:
        cfg = default_config(name)
        if args.quick:
            cfg = ExperimentConfig(**{**cfg.__dict__, **QUICK_OVERRIDES[name]})
        t0 = time.perf_counter()
        report = run_experiment(cfg)
        dest = out_dir / f"{name}.csv"
        write_report_csv(report, dest)
        print(f"{name}: {len(report.rows)} rows -> {dest} ({time.perf_counter() - t0:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
