#!/usr/bin/env python3
"""Example consumer of the report CSVs: one PNG per report.

    python scripts/run_all_experiments.py --quick --out-dir reports
    python scripts/plot_reports.py --in-dir reports --out-dir plots

Plots the per-seed scatter of the report's main statistic over its parameter
axis, with the median overlaid where the report carries aggregate rows.
"""

import argparse
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

MAIN_STATISTIC = {
    "run_bm_convergence": "correction_error",
    "run_tv_limit": "c_times_tv_c",
    "run_as_convergence": "sup_deviation",
    "run_cx_z": "integral_current",
    "run_cx_y": "integral_left",
    "run_step_convergence": "sup_error",
    "run_identity_suite": None,  # violations are all ~0; plot the max per c
}


def read_rows(path):
    rows = []
    for line in path.read_text().splitlines():
        if line.startswith("#") or line.startswith("seed,"):
            continue
        seed, param, stat, value, target, abs_error = line.split(",")
        rows.append((int(seed), float(param), stat, float(value)))
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in-dir", default="reports")
    ap.add_argument("--out-dir", default="plots")
    args = ap.parse_args()
    in_dir, out_dir = Path(args.in_dir), Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for csv_path in sorted(in_dir.glob("*.csv")):
        name = csv_path.stem
        rows = read_rows(csv_path)
        stat = MAIN_STATISTIC.get(name)
        fig, ax = plt.subplots(figsize=(6, 4))
        if stat is None:
            worst = defaultdict(float)
            for seed, param, s, value in rows:
                worst[param] = max(worst[param], value)
            params = sorted(worst)
            ax.plot(params, [worst[p] for p in params], "o-")
            ax.set_ylabel("max normalized violation")
            ax.set_yscale("symlog", linthresh=1e-15)
        else:
            pts = [(p, v) for seed, p, s, v in rows if s == stat and seed >= 0]
            med = [(p, v) for seed, p, s, v in rows if s == f"median_{stat}" and seed < 0]
            ax.plot([p for p, _ in pts], [v for _, v in pts], ".", alpha=0.4, label="seeds")
            if med:
                med.sort()
                ax.plot([p for p, _ in med], [v for _, v in med], "o-", label="median")
                ax.legend()
            ax.set_ylabel(stat)
        ax.set_xlabel("parameter (c or n)")
        ax.set_title(name)
        fig.tight_layout()
        dest = out_dir / f"{name}.png"
        fig.savefig(dest, dpi=120)
        plt.close(fig)
        print(f"{csv_path} -> {dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
