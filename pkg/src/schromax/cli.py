"""Command line front end.

    schromax <experiment> [--config cfg.json] --out dir/ [--force] [--workers N]
    schromax --list
    schromax classify-seq --gen power --alpha 2 --r 0.5 [--weak]
    schromax counterexample --a 2 --s 0.25 --n 2 --octaves 6 --out dir/
    schromax bessel-table --two-nu 0 [--r-max 50] [--count 500]

Exit codes: 0 pass, 2 bound-violation verdict, 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from schromax import harness, sequences, special


def _default_workers() -> int | None:
    env = os.environ.get("SCHROMAX_WORKERS")
    return int(env) if env else None


def _run_experiment(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = harness.ExperimentConfig.from_json(fh.read())
        if cfg.experiment != args.experiment:
            print(f"error: config names experiment {cfg.experiment!r}, "
                  f"command line says {args.experiment!r}", file=sys.stderr)
            return 1
    else:
        cfg = harness.ExperimentConfig(args.experiment)
    workers = args.workers if args.workers else _default_workers()
    manifest = harness.run_experiment(cfg, args.out, force=args.force,
                                      workers=workers)
    print(f"{manifest.experiment}: {manifest.verdict} "
          f"({manifest.timings['total_seconds']:.1f} s) -> {args.out}")
    return 0 if manifest.verdict == "pass" else 2


def _run_classify(args) -> int:
    params = {"gen": args.gen, "r": args.r}
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.ratio is not None:
        params["ratio"] = args.ratio
    tables, summary, _ = harness.run_seq_classify(params)
    if args.weak:
        columns, rows = tables["classify.csv"]
        print(",".join(columns))
        for row in rows:
            print(",".join(harness._fmt(v) for v in row))
    print(json.dumps(summary, sort_keys=True))
    return 0


def _run_counterexample(args) -> int:
    params = {"a": args.a, "s": args.s, "n": args.n, "eps": args.eps,
              "j_values": list(range(1, args.octaves + 1))}
    cfg = harness.ExperimentConfig("counterexample-growth", params)
    manifest = harness.run_experiment(cfg, args.out, force=args.force,
                                      workers=None)
    print(f"counterexample: {manifest.verdict} -> {args.out}")
    return 0 if manifest.verdict == "pass" else 2


def _run_bessel_table(args) -> int:
    nu = special.BesselOrder(args.two_nu)
    r = np.linspace(args.r_min, args.r_max, args.count)
    print("r,J_nu,K_nu_re,K_nu_im")
    for ri in map(float, r):
        j = special.bessel_j(nu, ri)
        k = (complex(0) if nu.two_nu == -1
             else special.remainder_kernel(nu, ri))
        print(f"{ri!r},{j!r},{k.real!r},{k.imag!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schromax",
        description="numerical experiments for dispersive maximal estimates")
    parser.add_argument("--list", action="store_true",
                        help="list experiment names and exit")
    sub = parser.add_subparsers(dest="command")

    for name in harness.EXPERIMENT_NAMES:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None)
        p.add_argument("--out", required=True)
        p.add_argument("--force", action="store_true")
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(func=_run_experiment, experiment=name)

    p = sub.add_parser("classify-seq")
    p.add_argument("--gen", required=True,
                   choices=["power", "geometric", "log"])
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--ratio", type=float, default=None)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--weak", action="store_true",
                   help="print the (b, count, b^r count) table")
    p.set_defaults(func=_run_classify)

    p = sub.add_parser("counterexample")
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--s", type=float, default=0.25)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--eps", type=float, default=0.02)
    p.add_argument("--octaves", type=int, default=6)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=_run_counterexample)

    p = sub.add_parser("bessel-table")
    p.add_argument("--two-nu", type=int, default=0)
    p.add_argument("--r-min", type=float, default=0.1)
    p.add_argument("--r-max", type=float, default=50.0)
    p.add_argument("--count", type=int, default=500)
    p.set_defaults(func=_run_bessel_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        for name in harness.EXPERIMENT_NAMES:
            print(name)
        return 0
    if not getattr(args, "func", None):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except (ValueError, FileExistsError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
