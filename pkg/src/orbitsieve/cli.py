"""Command-line front end.

Subcommands: sieve, correlate, bsz, orbit, equidist, pairs, algebra-check.
Global flags: --config PATH, --out DIR, --seed U64, --threads N.
Environment overrides (between config file and CLI flags in precedence):
ORBITSIEVE_CONFIG, ORBITSIEVE_OUT, ORBITSIEVE_SEED, ORBITSIEVE_THREADS.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import config as config_mod
from . import runner
from .errors import ConfigError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitsieve",
        description="sieve tables, unipotent orbits, and correlation experiments",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in config_mod.KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        p.add_argument("--config", help="JSON config file (defaults built in)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="rng seed, recorded in outputs")
        p.add_argument("--threads", type=int, help="worker threads for pair tasks")
        p.add_argument("--n", type=int, help="override the main length N")
        if kind == "sieve":
            p.add_argument("--cache", help="table cache file to write/reuse")
        if kind == "bsz":
            p.add_argument("--tau", type=float, help="criterion threshold")
            p.add_argument("--m", type=int, help="pair-sum length M")
        if kind == "algebra-check":
            p.add_argument("--trials", type=int, help="random trials per suite")
    return parser


def _merged_config(args) -> dict:
    cfg_path = args.config or os.environ.get("ORBITSIEVE_CONFIG")
    if cfg_path:
        cfg = config_mod.load_config(cfg_path)
    else:
        cfg = runner.default_config(args.kind)
    cfg["kind"] = args.kind  # the subcommand is authoritative
    env = {
        "out": os.environ.get("ORBITSIEVE_OUT"),
        "seed": os.environ.get("ORBITSIEVE_SEED"),
        "threads": os.environ.get("ORBITSIEVE_THREADS"),
    }
    if env["out"]:
        cfg["out"] = env["out"]
    for key in ("seed", "threads"):
        if env[key]:
            try:
                cfg[key] = int(env[key])
            except ValueError:
                raise ConfigError(f"environment override for '{key}' is not an integer")
    for key in ("out", "seed", "threads", "n", "cache", "tau", "m", "trials"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _merged_config(args)
        return runner.run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
