"""Command-line front end.

Subcommands: generate, truncate, variation, integrate, experiment. All
outputs go through a temp-file-then-rename dance so a failed run never
leaves a partial file behind. Exit codes: 0 success, 1 a computed identity
or bound violated (the first offending detail goes to stderr), 2 usage,
input or configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import Callable, List, Optional

from . import experiments
from .errors import (
    BoundViolation,
    CarrierViolation,
    ConfigError,
    IdentityViolation,
    PathIntError,
    PhiOutOfRange,
)
from .integration import bichteler_path, stieltjes_current, stieltjes_left
from .paths import PathGenSpec, gen_path, read_path_csv, write_path_csv
from .truncation import truncate_skorohod, truncate_tvmin
from .variation import truncated_variation

_VIOLATION_ERRORS = (BoundViolation, IdentityViolation, CarrierViolation, PhiOutOfRange)


def _atomic_write(out_path: str, writer: Callable) -> None:
    """Write via a sibling temp file and rename on success."""
    directory = os.path.dirname(os.path.abspath(out_path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".pathint-", dir=directory, text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            writer(fh)
        os.replace(tmp, out_path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pathint",
        description="Finite-variation envelopes, truncated variation and "
        "pathwise Stieltjes integration on step paths.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a seeded path CSV")
    g.add_argument("--kind", choices=["brownian", "jump_diffusion"], default="brownian")
    g.add_argument("--steps", type=int, required=True)
    g.add_argument("--horizon", type=float, default=1.0)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--sigma", type=float, default=1.0)
    g.add_argument("--drift", type=float, default=0.0)
    g.add_argument("--jump-rate", type=float, default=0.0)
    g.add_argument("--jump-sigma", type=float, default=0.0)
    g.add_argument("--out", required=True)

    t = sub.add_parser("truncate", help="finite-variation envelope of a path CSV")
    t.add_argument("--c", type=float, required=True)
    t.add_argument("--method", choices=["skorohod", "tvmin"], default="skorohod")
    t.add_argument("--in", dest="inp", required=True)
    t.add_argument("--out", required=True)

    v = sub.add_parser("variation", help="running variation functionals of a path CSV")
    v.add_argument("--c", type=float, required=True)
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--out", required=True)

    i = sub.add_parser("integrate", help="pathwise integral of one CSV against another")
    i.add_argument("--integrand", required=True)
    i.add_argument("--integrator", required=True)
    i.add_argument("--convention", choices=["left", "current", "bichteler"], default="left")
    i.add_argument("--threshold", type=float, default=None,
                   help="ladder threshold (bichteler convention only)")
    i.add_argument("--out", required=True)

    e = sub.add_parser("experiment", help="run a seeded experiment to a report CSV")
    e.add_argument("--config", default=None, help="JSON config file")
    e.add_argument("--name", default=None,
                   help="experiment name, run with its default config")
    e.add_argument("--out", required=True)
    return p


def _cmd_generate(args) -> int:
    spec = PathGenSpec(
        kind=args.kind,
        steps=args.steps,
        horizon=args.horizon,
        seed=args.seed,
        sigma=args.sigma,
        drift=args.drift,
        jump_rate=args.jump_rate,
        jump_sigma=args.jump_sigma,
    )
    path = gen_path(spec)
    _atomic_write(args.out, lambda fh: write_path_csv(path, fh))
    return 0


def _cmd_truncate(args) -> int:
    base = read_path_csv(args.inp)
    trunc = (truncate_skorohod if args.method == "skorohod" else truncate_tvmin)(base, args.c)
    comment = f"method={trunc.method} c={trunc.c:.17g}"
    _atomic_write(args.out, lambda fh: write_path_csv(trunc.path, fh, comments=[comment]))
    return 0


def _cmd_variation(args) -> int:
    path = read_path_csv(args.inp)
    rep = truncated_variation(path, args.c, running=True)

    def write(fh) -> None:
        fh.write(f"# c={rep.c:.17g}\n")
        fh.write("t,tv,utv_c,dtv_c,tv_c\n")
        run = rep.running
        for i in range(len(path)):
            fh.write(
                f"{path.times[i]:.17g},{run.tv[i]:.17g},{run.utv_c[i]:.17g},"
                f"{run.dtv_c[i]:.17g},{run.tv_c[i]:.17g}\n"
            )

    _atomic_write(args.out, write)
    return 0


def _cmd_integrate(args) -> int:
    y = read_path_csv(args.integrand)
    x = read_path_csv(args.integrator)
    if args.convention == "left":
        ip = stieltjes_left(y, x)
    elif args.convention == "current":
        ip = stieltjes_current(y, x)
    else:
        if args.threshold is None:
            raise ConfigError("--threshold is required for the bichteler convention")
        ip = bichteler_path(y, x, args.threshold)

    def write(fh) -> None:
        fh.write(f"# convention={args.convention}\n")
        fh.write("t,value\n")
        for i in range(ip.grid.size):
            fh.write(f"{ip.grid[i]:.17g},{ip.running[i]:.17g}\n")

    _atomic_write(args.out, write)
    return 0


def _cmd_experiment(args) -> int:
    if (args.config is None) == (args.name is None):
        raise ConfigError("give exactly one of --config or --name")
    if args.config is not None:
        cfg = experiments.load_config(args.config)
    else:
        cfg = experiments.default_config(args.name)
    report = experiments.run_experiment(cfg)
    _atomic_write(args.out, lambda fh: experiments.write_report_csv(report, fh))
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "truncate": _cmd_truncate,
    "variation": _cmd_variation,
    "integrate": _cmd_integrate,
    "experiment": _cmd_experiment,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _VIOLATION_ERRORS as exc:
        print(f"pathint: violation: {exc}", file=sys.stderr)
        return 1
    except (PathIntError, OSError, ValueError) as exc:
        print(f"pathint: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
