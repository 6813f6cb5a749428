"""Run the blow-up witness family and emit the (log M, log ratio^2) fit plot.

Usage: python scripts/run_counterexample.py --out results/counterexample
       [--a 2] [--s 0.25] [--n 2] [--eps 0.02] [--octaves 6] [--force]
"""

import argparse
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from schromax import harness


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--a", type=float, default=2.0)
    ap.add_argument("--s", type=float, default=0.25)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--eps", type=float, default=0.02)
    ap.add_argument("--octaves", type=int, default=6)
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args()

    cfg = harness.ExperimentConfig("counterexample-growth", {
        "a": args.a, "s": args.s, "n": args.n, "eps": args.eps,
        "j_values": list(range(1, args.octaves + 1)),
    })
    manifest = harness.run_experiment(cfg, args.out, force=args.force)
    with open(os.path.join(args.out, "summary.json")) as fh:
        summary = json.load(fh)
    print(f"counterexample-growth: {manifest.verdict} "
          f"slope={summary['slope']:.4f} "
          f"(expected {summary['expected_slope']:.4f})")

    data, script = harness.emit_plot_data(
        os.path.join(args.out, "witnesses.csv"),
        {"x": "M", "y": "ratio", "transform_x": "log", "transform_y": "log",
         "overlay": (0.5 * summary["slope"], 0.5 * summary["intercept"])})
    with open(os.path.join(args.out, "plot.dat"), "w", newline="\n") as fh:
        fh.write(data)
    with open(os.path.join(args.out, "plot.gp"), "w", newline="\n") as fh:
        fh.write(script)
    return 0 if manifest.verdict == "pass" else 2


if __name__ == "__main__":
    sys.exit(main())
