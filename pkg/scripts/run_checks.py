"""Run the identity/inequality/probe experiments (everything except the scans
and the counterexample family).

Usage: python scripts/run_checks.py --out results/checks [--force]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from schromax import harness

CHECKS = ("prop2-check", "prop3-bound", "thm6-ineq", "thm7-identity",
          "seq-classify", "convergence-probe")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args()

    worst = 0
    for name in CHECKS:
        cfg = harness.ExperimentConfig(name)
        manifest = harness.run_experiment(
            cfg, os.path.join(args.out, name), force=args.force)
        print(f"{name}: {manifest.verdict} "
              f"({manifest.timings['total_seconds']:.1f} s)")
        if manifest.verdict != "pass":
            worst = 2
    return worst


if __name__ == "__main__":
    sys.exit(main())
