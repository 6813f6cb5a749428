"""Run the four scaling-scan experiments and emit their log-log plot data.

Usage: python scripts/run_scans.py --out results/scans [--workers N] [--force]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from schromax import harness

SCANS = ("theorem1-scan", "theorem2-scan", "eq6-scan", "lemma4-scan")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--workers", type=int,
                    default=int(os.environ.get("SCHROMAX_WORKERS", "0")) or None)
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args()

    worst = 0
    for name in SCANS:
        out_dir = os.path.join(args.out, name)
        cfg = harness.ExperimentConfig(name)
        manifest = harness.run_experiment(cfg, out_dir, force=args.force,
                                          workers=args.workers)
        print(f"{name}: {manifest.verdict} "
              f"({manifest.timings['total_seconds']:.1f} s)")
        if manifest.verdict != "pass":
            worst = 2
        data, script = harness.emit_plot_data(
            os.path.join(out_dir, "scan.csv"),
            {"x": "lambda", "y": "normalized_ratio"})
        with open(os.path.join(out_dir, "plot.dat"), "w", newline="\n") as fh:
            fh.write(data)
        with open(os.path.join(out_dir, "plot.gp"), "w", newline="\n") as fh:
            fh.write(script)
    return worst


if __name__ == "__main__":
    sys.exit(main())
